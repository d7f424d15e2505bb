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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "jtree/algorithms.h"
#include "jtree/transforms.h"
#include "jtree/verify.h"

namespace jtree {
namespace {

using testing::ClusterStrings;
using testing::ClusterWith;
using testing::HandGraph;
using testing::Vars;

// A ring of k clusters; cluster i holds v_i and v_{i+1}, marked as its own.
ClusterGraph Ring(int k, std::vector<ClusterId>* ids, std::vector<uint32_t> cards = {}) {
  auto net = std::make_shared<BeliefNetwork>();
  for (int i = 0; i < k; ++i) {
    net->AddVariable("v" + std::to_string(i),
                     cards.empty() ? 2 : cards[static_cast<size_t>(i)]);
  }
  std::vector<testing::HandCluster> clusters;
  std::vector<testing::HandEdge> edges;
  for (int i = 0; i < k; ++i) {
    std::string a = "v" + std::to_string(i), b = "v" + std::to_string((i + 1) % k);
    clusters.push_back({{a, b}, {a, b}});
    edges.push_back({static_cast<size_t>(i), static_cast<size_t>((i + 1) % k), {b}});
  }
  return HandGraph(net, clusters, edges, ids);
}

AlgorithmPreset PlainDivide() {
  AlgorithmPreset p = PresetByName("D");
  p.per_loop_free_variables = false;
  p.post_slide = false;
  p.post_merge = false;
  return p;
}

size_t CountKind(const ClusterGraph& g, TraceKind kind) {
  return std::count_if(g.trace().begin(), g.trace().end(),
                       [&](const TraceEvent& e) { return e.kind == kind; });
}

class AlgorithmsTest : public ::testing::Test {
 protected:
  testing::ParanoidChecks paranoid_;
};

TEST_F(AlgorithmsTest, TreeNeedsNoInvocation) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Poly4());
  ClusterGraph before = g;
  Rng rng(1);
  auto audits = TransformToTree(g, MakeSubroutine(PresetByName("E"), rng));
  EXPECT_TRUE(audits.empty());
  EXPECT_TRUE(g.SameStructure(before));
}

TEST_F(AlgorithmsTest, DiamondNodeEliminationAudit) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  Rng rng(5);
  auto audits = TransformToTree(g, MakeSubroutine(PresetByName("E"), rng));
  ASSERT_EQ(audits.size(), 1u);
  const SubInvocationAudit& a = audits[0];
  EXPECT_EQ(a.n_S, 4);
  EXPECT_EQ(a.e_S, 4);
  EXPECT_EQ(a.k_S, 0);
  EXPECT_GE(a.metric_drop, 1);
  EXPECT_EQ(a.metric_drop, a.measured_drop);
  EXPECT_TRUE(a.Holds());
  EXPECT_EQ(EdgesMinusClusters(g), -1);
}

TEST_F(AlgorithmsTest, TwoCyclesBridgedTakeTwoInvocations) {
  auto net = testing::MakeNetwork({{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"},
                                   {"D", "E"},
                                   {"E", "F"}, {"E", "G"}, {"F", "H"}, {"G", "H"}});
  for (const std::string name : {"E", "D", "D2", "ID"}) {
    ClusterGraph g = BuildInitialClusterGraph(net);
    Rng rng(2);
    auto audits = TransformToTree(g, MakeSubroutine(PresetByName(name), rng));
    EXPECT_EQ(audits.size(), 2u) << name;
    EXPECT_TRUE(IsSinglyConnected(g));
    for (const auto& a : audits) EXPECT_TRUE(a.Holds());
  }
}

TEST_F(AlgorithmsTest, FilterRestrictsComponents) {
  auto net = testing::MakeNetwork({{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"},
                                   {"D", "E"},
                                   {"E", "F"}, {"E", "G"}, {"F", "H"}, {"G", "H"}});
  ClusterGraph g = BuildInitialClusterGraph(net);
  ClusterId keep = ClusterWith(g, {"A"});
  Rng rng(2);
  auto audits = TransformToTree(g, MakeSubroutine(PresetByName("E"), rng),
                                [&](const ComponentView& v) {
                                  return std::find(v.clusters.begin(), v.clusters.end(),
                                                   keep) != v.clusters.end();
                                });
  EXPECT_EQ(audits.size(), 1u);
  EXPECT_FALSE(IsSinglyConnected(g));
}

TEST_F(AlgorithmsTest, SubroutineLeavingCycleIsReported) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  EXPECT_THROW(TransformToTree(g, [](ClusterGraph&, const Scope&) {}), InvariantError);
}

TEST_F(AlgorithmsTest, MinWeightSelectDiamond) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  const auto& net = g.network();
  std::vector<VarId> cands = net.Variables();
  std::set<std::string> picked;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    picked.insert(net.Name(MinWeightSelect(g, AllClusters(g), cands, rng)));
  }
  EXPECT_EQ(picked, (std::set<std::string>{"A", "D"}));
  Rng rng(0);
  std::vector<VarId> one{net.Require("B")};
  EXPECT_EQ(MinWeightSelect(g, AllClusters(g), one, rng), net.Require("B"));
  EXPECT_THROW(MinWeightSelect(g, AllClusters(g), {}, rng), PreconditionError);
}

TEST_F(AlgorithmsTest, MinWeightSelectPrefersSmallerCardinality) {
  auto net = std::make_shared<BeliefNetwork>();
  net->AddVariable("A", 3);
  for (const char* n : {"B", "C", "D"}) net->AddVariable(n, 2);
  for (auto [p, c] : {std::pair{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}}) net->AddArc(p, c);
  ClusterGraph g = BuildInitialClusterGraph(net);
  std::vector<VarId> cands{net->Require("A"), net->Require("D")};
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(MinWeightSelect(g, AllClusters(g), cands, rng), net->Require("D"));
  }
}

TEST_F(AlgorithmsTest, NodeEliminationDiamond) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
    Rng rng(seed);
    int n = NodeElimination(g, AllClusters(g), MinWeightSelector(rng));
    EXPECT_GE(n, 1);
    EXPECT_TRUE(IsSinglyConnected(g));
    VarId first = g.trace().front().vars.front();
    if (g.network().Name(first) == "A") {
      EXPECT_EQ(n, 1);
      EXPECT_EQ(GraphCost(g), 20u);
    }
    MergeRedundantClusters(g, MergeMode::kPost);
    EXPECT_EQ(GraphCost(g), 16u) << "seed " << seed;
  }
}

TEST_F(AlgorithmsTest, NodeEliminationTriangleSharingOneVariable) {
  auto net = testing::MakeNetwork({}, {"X", "P", "Q", "R"});
  std::vector<ClusterId> ids;
  ClusterGraph g = HandGraph(net,
                             {{{"X", "P"}, {"X", "P"}}, {{"X", "Q"}, {"Q"}}, {{"X", "R"}, {"R"}}},
                             {{0, 1, {"X"}}, {1, 2, {"X"}}, {0, 2, {"X"}}}, &ids);
  EXPECT_EQ(NodeElimination(g, AllClusters(g), FixedOrderSelector({net->Require("X")})), 1);
  EXPECT_TRUE(IsSinglyConnected(g));
}

TEST_F(AlgorithmsTest, NodeEliminationOnTreeDoesNothing) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Chain3());
  Rng rng(0);
  EXPECT_EQ(NodeElimination(g, AllClusters(g), MinWeightSelector(rng)), 0);
}

TEST_F(AlgorithmsTest, FixedOrderMatchesReference) {
  auto net = testing::Diamond();
  std::vector<VarId> order = net->Variables();
  do {
    ClusterGraph g = BuildInitialClusterGraph(net);
    NodeElimination(g, AllClusters(g), FixedOrderSelector(order),
                    {.stop_when_singly_connected = false});
    MergeRedundantClusters(g, MergeMode::kPost);
    EXPECT_EQ(GraphCost(g), ReferenceEliminationCost(*net, order));
    EXPECT_TRUE(CheckJunctionTree(g).pass);
  } while (std::next_permutation(order.begin(), order.end()));
}

// Triangle through s plus a five-cycle through s.
ClusterGraph FigureEight(std::vector<ClusterId>* ids, uint32_t heavy = 2) {
  auto net = std::make_shared<BeliefNetwork>();
  for (const char* n : {"t1", "t2", "t3", "f1", "f2", "f3", "f4", "f5"}) net->AddVariable(n, 2);
  net->AddVariable("h", heavy);
  return HandGraph(net,
                   {{{"t1", "t3", "f1", "f5"}, {"t1", "t3", "f1", "f5"}},  // s
                    {{"t1", "t2", "h"}, {"t1", "t2", "h"}},
                    {{"t2", "t3"}, {"t2", "t3"}},
                    {{"f1", "f2"}, {"f1", "f2"}},
                    {{"f2", "f3"}, {"f2", "f3"}},
                    {{"f3", "f4"}, {"f3", "f4"}},
                    {{"f4", "f5"}, {"f4", "f5"}}},
                   {{0, 1, {"t1"}}, {1, 2, {"t2"}}, {2, 0, {"t3"}},
                    {0, 3, {"f1"}}, {3, 4, {"f2"}}, {4, 5, {"f3"}}, {5, 6, {"f4"}}, {6, 0, {"f5"}}},
                   ids);
}

TEST_F(AlgorithmsTest, FindCycleUnique) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  for (CyclePolicy p : {CyclePolicy::kShortest, CyclePolicy::kCheapest, CyclePolicy::kWeighted}) {
    Rng rng(3);
    auto cycle = FindCycle(g, AllClusters(g), {.policy = p}, rng);
    EXPECT_EQ(cycle.size(), 4u);
    EXPECT_TRUE(IsSimpleCycle(g, cycle));
  }
}

TEST_F(AlgorithmsTest, FindCycleShortest) {
  std::vector<ClusterId> ids;
  ClusterGraph g = FigureEight(&ids);
  Rng rng(0);
  auto cycle = FindCycle(g, AllClusters(g), {.policy = CyclePolicy::kShortest, .start = ids[0]}, rng);
  EXPECT_EQ(cycle.size(), 3u);
  EXPECT_EQ(cycle.front(), ids[0]);
}

TEST_F(AlgorithmsTest, FindCycleWeightedAvoidsExpensiveShortCycle) {
  std::vector<ClusterId> ids;
  ClusterGraph cheap = FigureEight(&ids);
  Rng rng(0);
  CycleSearch search{.policy = CyclePolicy::kWeighted, .weight = 0.5, .start = ids[0]};
  EXPECT_EQ(FindCycle(cheap, AllClusters(cheap), search, rng).size(), 3u);
  ClusterGraph costly = FigureEight(&ids, 1u << 20);
  auto cycle = FindCycle(costly, AllClusters(costly), search, rng);
  EXPECT_EQ(cycle.size(), 5u);
  EXPECT_TRUE(IsSimpleCycle(costly, cycle));
}

TEST_F(AlgorithmsTest, FindCycleErrors) {
  ClusterGraph tree = BuildInitialClusterGraph(testing::Chain3());
  Rng rng(0);
  EXPECT_THROW(FindCycle(tree, AllClusters(tree), {}, rng), PreconditionError);
  std::vector<ClusterId> ids;
  ClusterGraph g = Ring(4, &ids);
  ClusterId leaf = g.AddCluster(Vars(g.network(), {"v0"}), VarSet());
  g.AddOrMergeEdge(leaf, ids[0], Vars(g.network(), {"v0"}));
  EXPECT_THROW(FindCycle(g, AllClusters(g), {.start = leaf}, rng), PreconditionError);
}

TEST_F(AlgorithmsTest, DivisionsOnDiamond) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  std::vector<ClusterId> cycle{ClusterWith(g, {"A"}), ClusterWith(g, {"A", "B"}),
                               ClusterWith(g, {"B", "C", "D"}), ClusterWith(g, {"A", "C"})};
  auto divisions = EnumerateDivisions(g, cycle, DivisionPolicy::kMinTotalCostIncrease);
  ASSERT_EQ(divisions.size(), 8u);
  for (const Division& d : divisions) {
    EXPECT_EQ(d.kind, TraceKind::kSlide);
    ClusterGraph scratch = g.ScratchCopy();
    Slide(scratch, d.p, d.q, d.through);
    EXPECT_EQ(d.primary_score, CostDelta(GraphCost(g), GraphCost(scratch)));
  }
  Rng rng(4);
  Division best = ChooseDivision(g, cycle, DivisionPolicy::kMinTotalCostIncrease, rng);
  for (const Division& d : divisions) EXPECT_LE(best.primary_score, d.primary_score);
  // cA's {A} edge can move onto the other side cluster, which holds A
  // already.
  EXPECT_EQ(best.primary_score, 0);
  EXPECT_TRUE(best.p == cycle[0] || best.q == cycle[0]);
  EXPECT_TRUE(best.through == cycle[1] || best.through == cycle[3]);
}

TEST_F(AlgorithmsTest, DivisionPrefersViaAlreadyHoldingSeparator) {
  // Ring of five where cluster 3 already holds v1 (separator of edge 0-1).
  std::vector<ClusterId> ids;
  ClusterGraph g = Ring(5, &ids);
  g.AddMember(ids[3], g.network().Require("v1"));
  Rng rng(9);
  Division d = ChooseDivision(g, ids, DivisionPolicy::kMinClusterCostIncrease, rng);
  EXPECT_EQ(d.primary_score, 0);
  EXPECT_EQ(d.through, ids[3]);
  EXPECT_EQ(d.kind, TraceKind::kStealAnEdge);
}

TEST_F(AlgorithmsTest, DivisionTiesAreSeeded) {
  std::vector<ClusterId> ids;
  ClusterGraph g = Ring(6, &ids);
  auto pick = [&](uint64_t seed) {
    Rng rng(seed);
    Division d = ChooseDivision(g, ids, DivisionPolicy::kMinDegreeIncrease, rng);
    return std::tuple(d.edge, d.via);
  };
  EXPECT_EQ(pick(17), pick(17));
  std::set<std::tuple<size_t, size_t>> seen;
  for (uint64_t s = 0; s < 30; ++s) seen.insert(pick(s));
  EXPECT_GT(seen.size(), 1u);
}

TEST_F(AlgorithmsTest, DivideALoopTriangleIsOneDrop) {
  std::vector<ClusterId> ids;
  ClusterGraph g = Ring(3, &ids);
  Rng rng(0);
  DivideALoop(g, ids, PlainDivide(), rng);
  EXPECT_EQ(g.trace().size(), 1u);
  EXPECT_EQ(g.trace()[0].kind, TraceKind::kDrop);
  EXPECT_TRUE(CheckJunctionTree(g).pass);
}

TEST_F(AlgorithmsTest, DivideALoopSquare) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  std::vector<ClusterId> cycle{ClusterWith(g, {"A"}), ClusterWith(g, {"A", "B"}),
                               ClusterWith(g, {"B", "C", "D"}), ClusterWith(g, {"A", "C"})};
  Rng rng(0);
  DivideALoop(g, cycle, PlainDivide(), rng);
  ASSERT_EQ(g.trace().size(), 2u);
  EXPECT_EQ(g.trace()[0].kind, TraceKind::kSlide);
  EXPECT_EQ(g.trace()[1].kind, TraceKind::kDrop);
  EXPECT_TRUE(CheckJunctionTree(g).pass);
}

TEST_F(AlgorithmsTest, DivideALoopLongerRings) {
  for (int k : {5, 6, 9}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      std::vector<ClusterId> ids;
      ClusterGraph g = Ring(k, &ids);
      Rng rng(seed);
      DivideALoop(g, ids, PlainDivide(), rng);
      EXPECT_TRUE(CheckJunctionTree(g).pass);
      size_t splits = CountKind(g, TraceKind::kStealAnEdge) + CountKind(g, TraceKind::kSlide);
      EXPECT_EQ(splits + CountKind(g, TraceKind::kDrop), g.trace().size());
      // A six-ring cannot be finished by a single split.
      EXPECT_GE(splits, k >= 6 ? 2u : 1u) << k;
      EXPECT_GE(CountKind(g, TraceKind::kDrop), 1u);
    }
  }
}

TEST_F(AlgorithmsTest, FreeVariableEliminationDiamond) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  Scope s = AllClusters(g);
  std::map<ClusterId, ClusterId> replaced;
  ClusterId d = ClusterWith(g, {"B", "C", "D"});
  EXPECT_EQ(FreeVariableElimination(g, s, &replaced), 1);
  ASSERT_TRUE(replaced.contains(d));
  EXPECT_EQ(g.cluster(replaced[d]).members, Vars(g.network(), {"B", "C"}));
  EXPECT_TRUE(s.contains(replaced[d]));
  EXPECT_FALSE(s.contains(d));
}

TEST_F(AlgorithmsTest, FreeVariableEliminationFixpoint) {
  std::vector<ClusterId> ids;
  ClusterGraph ring = Ring(5, &ids);
  Scope s = AllClusters(ring);
  EXPECT_EQ(FreeVariableElimination(ring, s), 0);

  auto net = testing::MakeNetwork({}, {"a", "b", "c", "x"});
  ClusterGraph g = HandGraph(net, {{{"a", "x"}, {"a", "x"}}, {{"x", "b"}, {"b"}}, {{"x", "c"}, {"c"}}},
                             {{0, 1, {"x"}}, {1, 2, {"x"}}}, &ids);
  Scope all = AllClusters(g);
  EXPECT_EQ(FreeVariableElimination(g, all), 3);
  EXPECT_TRUE(CheckPathProperty(g).pass);
}

TEST_F(AlgorithmsTest, MergeRedundantPost) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
  Eliminate(g, g.network().Require("A"), AllClusters(g));
  EXPECT_EQ(MergeRedundantClusters(g, MergeMode::kPost), 1);
  EXPECT_EQ(ClusterStrings(g), (std::vector<std::string>{"{A,B,C}", "{B,C,D}"}));
  EXPECT_EQ(g.Edges().front().separator, Vars(g.network(), {"B", "C"}));
  EXPECT_EQ(GraphCost(g), 16u);
  EXPECT_EQ(MergeRedundantClusters(g, MergeMode::kPost), 0);
}

TEST_F(AlgorithmsTest, MergeRedundantPreGuard) {
  // {A} is a subset of {A,B} but houses A's family, which {A,B} does not mark.
  auto net = testing::MakeNetwork({}, {"A", "B"});
  std::vector<ClusterId> ids;
  ClusterGraph g = HandGraph(net, {{{"A"}, {"A"}}, {{"A", "B"}, {"B"}}}, {{0, 1, {"A"}}}, &ids);
  EXPECT_EQ(MergeRedundantClusters(g, MergeMode::kPre), 0);
  EXPECT_EQ(MergeRedundantClusters(g, MergeMode::kPost), 1);
  ClusterGraph loop = BuildInitialClusterGraph(testing::Diamond());
  EXPECT_THROW(MergeRedundantClusters(loop, MergeMode::kPost), PreconditionError);
  // {A} into {A,B}: the markings nest, so pre mode merges even on a cycle.
  EXPECT_EQ(MergeRedundantClusters(loop, MergeMode::kPre), 1);
}

TEST_F(AlgorithmsTest, SlideBeneficiallyNoGain) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Poly4());
  ClusterGraph before = g;
  EXPECT_EQ(SlideBeneficially(g), 0u);
  EXPECT_TRUE(g.SameStructure(before));
  ClusterGraph loop = BuildInitialClusterGraph(testing::Diamond());
  EXPECT_THROW(SlideBeneficially(loop), PreconditionError);
}

TEST_F(AlgorithmsTest, SlideBeneficiallyTransitCarrier) {
  auto net = testing::MakeNetwork({{"X", "W"}}, {"Y", "Z"});
  std::vector<ClusterId> ids;
  ClusterGraph g = HandGraph(net,
                             {{{"X", "W"}, {"X", "W"}},
                              {{"X", "Y"}, {"Y"}},
                              {{"X", "Y", "Z"}, {"X", "Y", "Z"}}},
                             {{0, 1, {"X"}}, {1, 2, {"X", "Y"}}}, &ids);
  Cost before = GraphCost(g);
  Cost saved = SlideBeneficially(g);
  EXPECT_EQ(saved, 2u);
  EXPECT_EQ(GraphCost(g), before - saved);
  EXPECT_TRUE(CheckJunctionTree(g).pass);
}

TEST_F(AlgorithmsTest, PresetNames) {
  for (const std::string& n : PresetNames()) EXPECT_EQ(PresetByName(n).name, n);
  EXPECT_THROW(PresetByName("Q"), PreconditionError);
  EXPECT_EQ(PresetByName("D2").cycle_search.policy, CyclePolicy::kShortest);
  EXPECT_TRUE(PresetByName("ID").per_loop_slide);
  EXPECT_FALSE(PresetByName("ID").post_merge);
}

TEST_F(AlgorithmsTest, PresetEDiamondIs16) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
    RunReport r = RunPreset(g, PresetByName("E"), seed);
    EXPECT_EQ(r.cost, 16u);
    EXPECT_EQ(r.initial_cost, 18u);
    EXPECT_EQ(r.components, 1u);
  }
}

TEST_F(AlgorithmsTest, PresetDDiamondValid) {
  for (const std::string name : {"D", "D2", "ID", "IE"}) {
    ClusterGraph g = BuildInitialClusterGraph(testing::Diamond());
    RunReport r = RunPreset(g, PresetByName(name), 7);
    EXPECT_TRUE(CheckJunctionTree(g).pass) << name;
    EXPECT_GE(r.cost, 16u) << name;
  }
}

TEST_F(AlgorithmsTest, PresetDOnTreeOnlyPostprocesses) {
  ClusterGraph g = BuildInitialClusterGraph(testing::Poly4());
  RunReport r = RunPreset(g, PresetByName("D"), 1);
  EXPECT_TRUE(r.audits.empty());
  for (const TraceEvent& e : g.trace()) EXPECT_EQ(e.kind, TraceKind::kMerge);
}

TEST_F(AlgorithmsTest, DAndD2AgreeOnUniqueCycle) {
  std::vector<ClusterId> ids;
  ClusterGraph x = Ring(7, &ids), y = Ring(7, &ids);
  RunPreset(x, PresetByName("D"), 21);
  RunPreset(y, PresetByName("D2"), 21);
  EXPECT_EQ(x.trace(), y.trace());
  EXPECT_TRUE(x.SameStructure(y));
}

}  // namespace
}  // namespace jtree
