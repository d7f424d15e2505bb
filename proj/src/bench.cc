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

#include "jtree/bench.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "jtree/verify.h"

namespace jtree {
namespace {

std::string VarName(int i) { return "V" + std::to_string(i); }

uint32_t DrawCardinality(Rng& rng, uint32_t low, uint32_t high) {
  return static_cast<uint32_t>(rng.Between(low, high));
}

}  // namespace

void ValidateSpec(const NetworkSpec& spec) {
  const int64_t n = spec.variables;
  if (n < 0 || spec.arcs < 0) throw PreconditionError("network spec: negative counts");
  if (n > 0 && spec.arcs < n - 1) {
    throw PreconditionError("network spec: " + std::to_string(spec.arcs) +
                            " arcs cannot connect " + std::to_string(n) + " variables");
  }
  if (spec.arcs > n * (n - 1) / 2) {
    throw PreconditionError("network spec: more than n(n-1)/2 arcs");
  }
  if (spec.cardinality_low < 2 || spec.cardinality_high < spec.cardinality_low) {
    throw PreconditionError("network spec: cardinality range must satisfy 2 <= low <= high");
  }
}

BeliefNetwork GenerateRandomNetwork(const NetworkSpec& spec) {
  ValidateSpec(spec);
  Rng rng(spec.seed);
  const int n = spec.variables;
  BeliefNetwork net;
  for (int i = 0; i < n; ++i) {
    net.AddVariable(VarName(i), DrawCardinality(rng, spec.cardinality_low, spec.cardinality_high));
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);

  std::set<std::pair<int, int>> arcs;
  for (int i = 1; i < n; ++i) {
    int earlier = order[rng.Index(static_cast<size_t>(i))];
    arcs.emplace(earlier, order[static_cast<size_t>(i)]);
  }
  std::vector<std::pair<int, int>> others;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::pair<int, int> pair{order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]};
      if (!arcs.contains(pair)) others.push_back(pair);
    }
  }
  // Partial Fisher-Yates: the first `extra` entries are a uniform sample.
  const size_t extra = static_cast<size_t>(spec.arcs) - arcs.size();
  for (size_t i = 0; i < extra; ++i) {
    std::swap(others[i], others[i + rng.Index(others.size() - i)]);
    arcs.insert(others[i]);
  }
  for (const auto& [p, c] : arcs) {
    net.AddArc(VarId{static_cast<uint32_t>(p)}, VarId{static_cast<uint32_t>(c)});
  }
  return net;
}

BeliefNetwork GenerateRandomPolytree(int variables, uint32_t cardinality_low,
                                     uint32_t cardinality_high, uint64_t seed) {
  NetworkSpec spec{.variables = variables,
                   .arcs = std::max(variables - 1, 0),
                   .cardinality_low = cardinality_low,
                   .cardinality_high = cardinality_high,
                   .seed = seed};
  ValidateSpec(spec);
  Rng rng(seed);
  BeliefNetwork net;
  for (int i = 0; i < variables; ++i) {
    net.AddVariable(VarName(i), DrawCardinality(rng, cardinality_low, cardinality_high));
  }
  for (int i = 1; i < variables; ++i) {
    VarId a{static_cast<uint32_t>(rng.Index(static_cast<size_t>(i)))};
    VarId b{static_cast<uint32_t>(i)};
    if (rng.Index(2) == 0) {
      net.AddArc(a, b);
    } else {
      net.AddArc(b, a);
    }
  }
  return net;
}

ExperimentResult Summarize(std::string algorithm, std::string network, std::vector<Cost> costs) {
  ExperimentResult r{.algorithm = std::move(algorithm), .network = std::move(network)};
  r.costs = std::move(costs);
  if (r.costs.empty()) return r;
  std::vector<Cost> sorted = r.costs;
  std::sort(sorted.begin(), sorted.end());
  r.min = sorted.front();
  r.max = sorted.back();
  r.median = sorted[(sorted.size() - 1) / 2];
  long double sum = 0;
  for (Cost c : sorted) sum += static_cast<long double>(c);
  r.mean = static_cast<double>(sum / static_cast<long double>(sorted.size()));
  return r;
}

bool IsIncrementalPreset(std::string_view name) { return name == "IE" || name == "ID"; }

IncrementalOutcome RunIncrementalExperiment(const BeliefNetwork& network,
                                            const AlgorithmPreset& preset, uint64_t seed,
                                            const IncrementalObserver& observer) {
  Rng rng(seed);
  EditSession session(preset, DeriveSeed(seed, 1));
  IncrementalOutcome out;
  auto ensure = [&](VarId v) {
    const std::string& name = network.Name(v);
    if (session.network().Find(name)) return;
    session.AddVariable(name, network.Cardinality(v));
    if (observer) observer(session, "edit");
  };

  std::vector<Arc> remaining = network.Arcs();
  VarSet built;
  while (!remaining.empty()) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (built.Empty() || built.Contains(remaining[i].parent) ||
          built.Contains(remaining[i].child)) {
        eligible.push_back(i);
      }
    }
    if (eligible.empty()) {
      // A disconnected network: start the next piece anywhere.
      eligible.resize(remaining.size());
      std::iota(eligible.begin(), eligible.end(), 0);
    }
    const size_t pick = eligible[rng.Index(eligible.size())];
    const Arc arc = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    ensure(arc.parent);
    ensure(arc.child);
    built.Insert(arc.parent);
    built.Insert(arc.child);
    out.arc_order.emplace_back(network.Name(arc.parent), network.Name(arc.child));
    session.AddArc(network.Name(arc.parent), network.Name(arc.child));
    if (observer) observer(session, "edit");
    if (!IsSinglyConnected(session.graph())) {
      session.Restore();
      ++out.restores;
      if (observer) observer(session, "restore");
    }
  }
  for (VarId v : network.Variables()) ensure(v);
  session.Finish();
  CheckReport check = CheckJunctionTree(session.graph());
  if (!check.pass) {
    std::string msg = "incremental build produced an invalid junction tree; arc order:";
    for (const auto& [p, c] : out.arc_order) msg += " " + p + "->" + c;
    throw InvariantError(msg);
  }
  out.cost = GraphCost(session.graph());
  out.graph = session.graph();
  return out;
}

std::vector<ExperimentResult> RunExperiment(const std::vector<NamedNetwork>& networks,
                                            const std::vector<std::string>& presets, int runs,
                                            uint64_t seed, std::vector<RunRecord>* records) {
  if (runs < kMinimumRuns) {
    throw PreconditionError("run_experiment: at least " + std::to_string(kMinimumRuns) +
                            " runs are required");
  }
  std::vector<ExperimentResult> results;
  for (const NamedNetwork& nn : networks) {
    for (const std::string& name : presets) {
      const AlgorithmPreset preset = PresetByName(name);
      std::vector<Cost> costs;
      for (int run = 0; run < runs; ++run) {
        const uint64_t run_seed = DeriveSeed(seed, static_cast<uint64_t>(run));
        RunRecord rec{.algorithm = name, .network = nn.name, .run = run, .seed = run_seed};
        if (IsIncrementalPreset(name)) {
          IncrementalOutcome o = RunIncrementalExperiment(*nn.network, preset, run_seed);
          rec.cost = o.cost;
          rec.trace_length = o.graph.trace().size();
        } else {
          ClusterGraph g = BuildInitialClusterGraph(nn.network);
          RunReport r = RunPreset(g, preset, run_seed);
          rec.cost = r.cost;
          rec.trace_length = r.trace_length;
        }
        costs.push_back(rec.cost);
        if (records) records->push_back(rec);
      }
      results.push_back(Summarize(name, nn.name, std::move(costs)));
    }
  }
  return results;
}

}  // namespace jtree
