// Copyright 2026 The jtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every randomized input is seeded, so a failure
// reproduces exactly.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jtree/algorithms.h"
#include "jtree/bench.h"
#include "jtree/incremental.h"
#include "jtree/verify.h"

namespace {

using namespace jtree;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;  // first few, for the log

  void Fail(const std::string& what) {
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

std::shared_ptr<BeliefNetwork> Shared(BeliefNetwork net) {
  return std::make_shared<BeliefNetwork>(std::move(net));
}

// n in [lo, hi], arcs in [n - 1, min(2n, n(n-1)/2)], cardinalities in [2, 4].
std::shared_ptr<BeliefNetwork> RandomNetwork(uint64_t seed, int lo, int hi) {
  Rng rng(DeriveSeed(seed, 0x5eed));
  const int n = static_cast<int>(rng.Between(lo, hi));
  const int max_arcs = std::min(2 * n, n * (n - 1) / 2);
  const int arcs = static_cast<int>(rng.Between(n - 1, max_arcs));
  return Shared(GenerateRandomNetwork(
      {.variables = n, .arcs = arcs, .cardinality_low = 2, .cardinality_high = 4, .seed = seed}));
}

std::string Where(const std::string& preset, uint64_t seed) {
  return "preset " + preset + " network seed " + std::to_string(seed);
}

// The validity fuzz suite shared by the validity, audit and postprocessing
// criteria.
constexpr int kFuzzNetworks = 500;
constexpr uint64_t kFuzzSeed = 1000;

Outcome PolytreeIdentity() {
  Outcome out;
  const auto start = Clock::now();
  int ok = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int n = static_cast<int>(rng.Between(1, 30));
    BeliefNetwork net = GenerateRandomPolytree(n, 2, 4, DeriveSeed(seed, 1));
    if (!net.IsPolytree()) {
      out.Fail("generator produced a non-polytree, seed " + std::to_string(seed));
      continue;
    }
    CheckReport r = CheckJunctionTree(BuildInitialClusterGraph(net));
    if (r.pass) {
      ++ok;
    } else {
      out.Fail("seed " + std::to_string(seed) + ": " + r.witnesses.front());
    }
  }
  const double secs = Seconds(start);
  if (secs >= 5.0) out.Fail("took " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/200 initial graphs are junction trees (%.2f s)", ok, secs);
  out.detail = buf;
  return out;
}

struct FuzzStats {
  Outcome validity, audit;
  int runs = 0, invocations = 0;
  double seconds = 0;
};

FuzzStats ValidityAndAudit() {
  FuzzStats s;
  const auto start = Clock::now();
  for (int i = 0; i < kFuzzNetworks; ++i) {
    const uint64_t seed = kFuzzSeed + static_cast<uint64_t>(i);
    auto net = RandomNetwork(seed, 5, 25);
    for (const std::string name : {"E", "D", "D2"}) {
      ClusterGraph g = BuildInitialClusterGraph(net);
      RunReport report;
      try {
        report = RunPreset(g, PresetByName(name), DeriveSeed(seed, 7));
      } catch (const Error& e) {
        s.validity.Fail(Where(name, seed) + ": " + e.what());
        continue;
      }
      ++s.runs;
      for (const CheckReport& r : {CheckFamilyProperty(g), CheckPathProperty(g), CheckJunctionTree(g),
                                   CheckChordalEmbedding(g)}) {
        if (!r.pass) s.validity.Fail(Where(name, seed) + ": " + r.property + ": " + r.witnesses.front());
      }
      for (const SubInvocationAudit& a : report.audits) {
        ++s.invocations;
        if (a.metric_drop < 1 || !a.Holds() || a.metric_drop != a.measured_drop) {
          s.audit.Fail(Where(name, seed) + ": metric_drop " + std::to_string(a.metric_drop) +
                       " measured " + std::to_string(a.measured_drop));
        }
      }
      const int64_t components = static_cast<int64_t>(ConnectedComponentCount(g));
      if (EdgesMinusClusters(g) != -components) {
        s.audit.Fail(Where(name, seed) + ": edges - clusters = " +
                     std::to_string(EdgesMinusClusters(g)) + " with " +
                     std::to_string(components) + " components");
      }
    }
  }
  s.seconds = Seconds(start);
  if (s.seconds >= 120) s.validity.Fail("took " + std::to_string(s.seconds) + " s");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d runs over %d networks x {E,D,D2}, 4 checks each (%.1f s)",
                s.runs, kFuzzNetworks, s.seconds);
  s.validity.detail = buf;
  s.audit.detail = std::to_string(s.invocations) + " invocations audited, final edges - clusters checked on " +
                   std::to_string(s.runs) + " runs";
  return s;
}

Outcome OracleEquivalence() {
  Outcome out;
  int compared = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto net = RandomNetwork(DeriveSeed(seed, 2), 3, 8);
    Rng rng(seed);
    for (int k = 0; k < 20; ++k) {
      std::vector<VarId> order = net->Variables();
      rng.Shuffle(order);
      ClusterGraph g = BuildInitialClusterGraph(net);
      NodeElimination(g, AllClusters(g), FixedOrderSelector(order),
                      {.stop_when_singly_connected = false});
      MergeRedundantClusters(g, MergeMode::kPost);
      const Cost got = GraphCost(g), want = ReferenceEliminationCost(*net, order);
      ++compared;
      if (got != want) {
        out.Fail("seed " + std::to_string(seed) + " order " + std::to_string(k) + ": transformational " +
                 std::to_string(got) + " vs reference " + std::to_string(want));
      }
    }
  }
  out.detail = std::to_string(compared) + " (network, order) pairs compared exactly";
  return out;
}

Outcome OptimalityBound() {
  Outcome out;
  int runs = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto net = RandomNetwork(DeriveSeed(seed, 2), 3, 8);
    const Cost optimum = BruteForceOptimalCost(*net);
    for (const std::string& name : PresetNames()) {
      Cost cost;
      if (IsIncrementalPreset(name)) {
        cost = RunIncrementalExperiment(*net, PresetByName(name), seed).cost;
      } else {
        ClusterGraph g = BuildInitialClusterGraph(net);
        cost = RunPreset(g, PresetByName(name), seed).cost;
      }
      ++runs;
      if (cost < optimum) {
        out.Fail(Where(name, seed) + ": cost " + std::to_string(cost) + " below optimum " +
                 std::to_string(optimum));
      }
    }
  }
  auto diamond = std::make_shared<BeliefNetwork>();
  for (const char* v : {"A", "B", "C", "D"}) diamond->AddVariable(v, 2);
  for (auto [p, c] : {std::pair{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}}) diamond->AddArc(p, c);
  ClusterGraph g = BuildInitialClusterGraph(diamond);
  const Cost diamond_cost = RunPreset(g, PresetByName("E"), 0).cost;
  if (diamond_cost != 16) out.Fail("diamond under E costs " + std::to_string(diamond_cost));
  out.detail = std::to_string(runs) + " preset runs >= brute-force optimum; diamond under E = " +
               std::to_string(diamond_cost);
  return out;
}

Outcome PostprocessingMonotone() {
  Outcome out;
  int slides = 0, merges = 0;
  for (int i = 0; i < kFuzzNetworks; ++i) {
    const uint64_t seed = kFuzzSeed + static_cast<uint64_t>(i);
    auto net = RandomNetwork(seed, 5, 25);
    for (const std::string name : {"E", "D", "D2"}) {
      AlgorithmPreset bare = PresetByName(name);
      bare.post_slide = bare.post_merge = bare.final_merge = false;
      ClusterGraph g = BuildInitialClusterGraph(net);
      Rng rng(DeriveSeed(seed, 7));
      TransformToTree(g, MakeSubroutine(bare, rng));
      const Cost before = GraphCost(g);
      SlideBeneficially(g);
      ++slides;
      const Cost slid = GraphCost(g);
      if (slid > before) out.Fail(Where(name, seed) + ": slide raised cost " + std::to_string(before) + " -> " + std::to_string(slid));
      if (!IsSinglyConnected(g) || !CheckJunctionTree(g).pass) {
        out.Fail(Where(name, seed) + ": slide left no junction tree");
      }
      MergeRedundantClusters(g, MergeMode::kPost);
      ++merges;
      if (GraphCost(g) > slid) out.Fail(Where(name, seed) + ": merge raised cost");
      if (!CheckJunctionTree(g).pass) out.Fail(Where(name, seed) + ": merge left no junction tree");
    }
  }
  out.detail = std::to_string(slides) + " slide passes and " + std::to_string(merges) +
               " merge passes on the fuzz suite";
  return out;
}

Outcome IncrementalSoundness() {
  Outcome out;
  int builds = 0, restores = 0, edits = 0, bounded = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    // Half of the suite is small enough for the brute-force bound.
    auto net = seed % 2 == 0 ? RandomNetwork(DeriveSeed(seed, 3), 4, 8)
                             : RandomNetwork(DeriveSeed(seed, 3), 9, 20);
    for (const std::string name : {"IE", "ID"}) {
      const std::string where = Where(name, seed);
      IncrementalOutcome o;
      try {
        o = RunIncrementalExperiment(
            *net, PresetByName(name), seed, [&](const EditSession& s, std::string_view stage) {
              const ClusterGraph& g = s.graph();
              if (stage == "edit") {
                ++edits;
                if (!CheckFamilyProperty(g).pass || !CheckPathProperty(g).pass) {
                  out.Fail(where + ": properties broken after an edit");
                }
              } else if (!CheckJunctionTree(g).pass) {
                out.Fail(where + ": no junction tree after a restore");
              }
            });
      } catch (const Error& e) {
        out.Fail(where + ": " + e.what());
        continue;
      }
      ++builds;
      restores += o.restores;
      if (!CheckJunctionTree(o.graph).pass) out.Fail(where + ": final graph is no junction tree");
      if (net->num_variables() <= 8) {
        ++bounded;
        const Cost optimum = BruteForceOptimalCost(*net);
        if (o.cost < optimum) out.Fail(where + ": cost below the optimum");
      }
    }
  }
  out.detail = std::to_string(builds) + " arc-by-arc builds, " + std::to_string(edits) + " edits, " +
               std::to_string(restores) + " restores, " + std::to_string(bounded) +
               " bounded by brute force";
  return out;
}

Outcome Determinism() {
  Outcome out;
  int triples = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    auto net = RandomNetwork(DeriveSeed(seed, 4), 5, 18);
    auto again = RandomNetwork(DeriveSeed(seed, 4), 5, 18);
    if (!(*net == *again)) out.Fail("generator differs for seed " + std::to_string(seed));
    for (const std::string& name : PresetNames()) {
      auto run = [&]() -> std::pair<Cost, std::vector<TraceEvent>> {
        if (IsIncrementalPreset(name)) {
          IncrementalOutcome o = RunIncrementalExperiment(*net, PresetByName(name), seed);
          return {o.cost, o.graph.trace()};
        }
        ClusterGraph g = BuildInitialClusterGraph(net);
        Cost c = RunPreset(g, PresetByName(name), seed).cost;
        return {c, g.trace()};
      };
      auto a = run(), b = run();
      ++triples;
      if (a != b) out.Fail(Where(name, seed) + ": runs differ");
    }
  }
  out.detail = std::to_string(triples) + " (network, preset, seed) triples reproduced";
  return out;
}

}  // namespace

int main() {
  struct Line {
    const char* name;
    Outcome outcome;
  };
  std::vector<Line> lines;
  lines.push_back({"polytree identity", PolytreeIdentity()});
  FuzzStats fuzz = ValidityAndAudit();
  lines.push_back({"validity fuzz", fuzz.validity});
  lines.push_back({"tree-building audit", fuzz.audit});
  lines.push_back({"oracle equivalence", OracleEquivalence()});
  lines.push_back({"optimality bound", OptimalityBound()});
  lines.push_back({"postprocessing monotonicity", PostprocessingMonotone()});
  lines.push_back({"incremental soundness", IncrementalSoundness()});
  lines.push_back({"determinism", Determinism()});

  bool all = true;
  for (const Line& l : lines) {
    std::printf("%s %s: %s\n", l.outcome.pass ? "PASS" : "FAIL", l.name, l.outcome.detail.c_str());
    for (const std::string& f : l.outcome.failures) std::printf("    %s\n", f.c_str());
    all = all && l.outcome.pass;
  }
  return all ? 0 : 1;
}
