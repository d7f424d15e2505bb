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

#include <gtest/gtest.h>

#include <queue>

#include "fixtures.h"
#include "jtree/bench.h"
#include "jtree/verify.h"

namespace jtree {
namespace {

// Connectivity of the undirected skeleton, by BFS.
bool SkeletonConnected(const BeliefNetwork& net) {
  std::vector<VarId> vars = net.Variables();
  if (vars.empty()) return true;
  VarSet seen;
  std::queue<VarId> q;
  q.push(vars.front());
  seen.Insert(vars.front());
  while (!q.empty()) {
    VarId v = q.front();
    q.pop();
    for (VarId w : net.Parents(v) | net.Children(v)) {
      if (!seen.Contains(w)) {
        seen.Insert(w);
        q.push(w);
      }
    }
  }
  return seen.Size() == vars.size();
}

TEST(BenchTest, SpecValidation) {
  EXPECT_THROW(ValidateSpec({.variables = 5, .arcs = 3}), PreconditionError);
  EXPECT_THROW(ValidateSpec({.variables = 4, .arcs = 7}), PreconditionError);
  EXPECT_THROW(ValidateSpec({.variables = 4, .arcs = 4, .cardinality_low = 1}),
               PreconditionError);
  EXPECT_THROW(ValidateSpec({.variables = 4, .arcs = 4, .cardinality_low = 3,
                             .cardinality_high = 2}),
               PreconditionError);
  EXPECT_NO_THROW(ValidateSpec({.variables = 4, .arcs = 6}));
  EXPECT_NO_THROW(ValidateSpec({.variables = 0, .arcs = 0}));
}

TEST(BenchTest, GeneratorHitsExactCounts) {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    NetworkSpec spec{.variables = 12, .arcs = 11 + static_cast<int>(seed % 30),
                     .cardinality_low = 2, .cardinality_high = 4, .seed = seed};
    BeliefNetwork net = GenerateRandomNetwork(spec);
    EXPECT_EQ(net.num_variables(), 12u);
    EXPECT_EQ(net.num_arcs(), static_cast<size_t>(spec.arcs));
    EXPECT_TRUE(SkeletonConnected(net));
    for (VarId v : net.Variables()) {
      EXPECT_GE(net.Cardinality(v), 2u);
      EXPECT_LE(net.Cardinality(v), 4u);
    }
  }
}

TEST(BenchTest, GeneratorIsDeterministic) {
  NetworkSpec spec{.variables = 15, .arcs = 25, .cardinality_high = 3, .seed = 99};
  EXPECT_EQ(GenerateRandomNetwork(spec), GenerateRandomNetwork(spec));
  NetworkSpec other = spec;
  other.seed = 100;
  EXPECT_NE(GenerateRandomNetwork(spec), GenerateRandomNetwork(other));
}

TEST(BenchTest, CompleteDagIsReachable) {
  BeliefNetwork net = GenerateRandomNetwork({.variables = 6, .arcs = 15, .seed = 3});
  EXPECT_EQ(net.num_arcs(), 15u);
}

TEST(BenchTest, PolytreesArePolytrees) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    BeliefNetwork net = GenerateRandomPolytree(20, 2, 3, seed);
    EXPECT_EQ(net.num_arcs(), 19u);
    EXPECT_TRUE(net.IsPolytree());
    EXPECT_TRUE(SkeletonConnected(net));
  }
}

TEST(BenchTest, SummaryStatistics) {
  ExperimentResult r = Summarize("E", "n", {5, 1, 4, 2});
  EXPECT_EQ(r.min, 1u);
  EXPECT_EQ(r.max, 5u);
  EXPECT_EQ(r.median, 2u);
  EXPECT_DOUBLE_EQ(r.mean, 3.0);
  EXPECT_EQ(r.costs, (std::vector<Cost>{5, 1, 4, 2}));
}

TEST(BenchTest, DiamondUnderE) {
  std::vector<RunRecord> records;
  auto results = RunExperiment({{"diamond", testing::Diamond()}}, {"E"}, 20, 7, &records);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(records.size(), 20u);
  for (Cost c : results[0].costs) EXPECT_EQ(c, 16u);
}

TEST(BenchTest, TooFewRunsRejected) {
  EXPECT_THROW(RunExperiment({{"d", testing::Diamond()}}, {"E"}, 19, 0), PreconditionError);
  EXPECT_THROW(RunExperiment({{"d", testing::Diamond()}}, {"Q"}, 20, 0), PreconditionError);
}

TEST(BenchTest, TreeNetworkHasNoSpread) {
  auto poly = std::make_shared<BeliefNetwork>(GenerateRandomPolytree(10, 2, 3, 5));
  auto results = RunExperiment({{"poly", poly}}, {"E", "D", "D2", "ID", "IE"}, 20, 1);
  for (const ExperimentResult& r : results) {
    EXPECT_EQ(r.min, r.max) << r.algorithm;
    EXPECT_DOUBLE_EQ(r.mean, static_cast<double>(r.median)) << r.algorithm;
  }
}

TEST(BenchTest, IncrementalDiamond) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    IncrementalOutcome o = RunIncrementalExperiment(*testing::Diamond(), PresetByName("IE"), seed);
    EXPECT_EQ(o.restores, 1);
    EXPECT_EQ(o.cost, 16u);
    EXPECT_EQ(o.arc_order.size(), 4u);
  }
}

TEST(BenchTest, IncrementalPolytreeNeverRestores) {
  BeliefNetwork net = GenerateRandomPolytree(15, 2, 2, 11);
  for (const char* p : {"IE", "ID"}) {
    IncrementalOutcome o = RunIncrementalExperiment(net, PresetByName(p), 4);
    EXPECT_EQ(o.restores, 0);
    EXPECT_TRUE(CheckJunctionTree(o.graph).pass);
  }
}

TEST(BenchTest, IncrementalArcsTouchBuiltPart) {
  BeliefNetwork net = GenerateRandomNetwork({.variables = 10, .arcs = 16, .seed = 8});
  int edits = 0;
  IncrementalOutcome o = RunIncrementalExperiment(
      net, PresetByName("ID"), 2, [&](const EditSession& s, std::string_view stage) {
        if (stage == "edit") ++edits;
        if (stage == "restore") EXPECT_TRUE(IsSinglyConnected(s.graph()));
      });
  std::set<std::string> built;
  for (size_t i = 0; i < o.arc_order.size(); ++i) {
    const auto& [p, c] = o.arc_order[i];
    if (i > 0) EXPECT_TRUE(built.contains(p) || built.contains(c));
    built.insert(p);
    built.insert(c);
  }
  EXPECT_EQ(edits, 10 + 16);
}

TEST(BenchTest, SameSeedSameRecords) {
  auto net = std::make_shared<BeliefNetwork>(
      GenerateRandomNetwork({.variables = 10, .arcs = 15, .cardinality_high = 3, .seed = 4}));
  std::vector<RunRecord> a, b;
  RunExperiment({{"n", net}}, PresetNames(), 20, 42, &a);
  RunExperiment({{"n", net}}, PresetNames(), 20, 42, &b);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].cost, b[i].cost);
    EXPECT_EQ(a[i].trace_length, b[i].trace_length);
  }
}

// Per-loop elimination used to orphan the sibling piece of a split cycle,
// and Divide-Loops then spun on the same cycle.
TEST(BenchTest, IncrementalDivideKeepsSiblingPieces) {
  for (uint64_t seed : {130, 147, 149, 166, 180}) {
    BeliefNetwork net = GenerateRandomNetwork(
        {.variables = 8, .arcs = 12, .cardinality_low = 2, .cardinality_high = 3, .seed = seed});
    EXPECT_NO_THROW(RunIncrementalExperiment(net, PresetByName("ID"), seed)) << seed;
  }
}

}  // namespace
}  // namespace jtree
