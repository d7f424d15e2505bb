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

#ifndef JTREE_ALGORITHMS_H_
#define JTREE_ALGORITHMS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jtree/cluster_graph.h"
#include "jtree/transforms.h"

namespace jtree {

// Bookkeeping for one subroutine invocation of the tree-building driver.
// T is the part of the graph outside the subgraph S; R the edges between T
// and S; X the edges between clusters of S that are not part of S.
//
//   drop in (#edges - #clusters) = 1 + k_S - delta_R - delta_X
//
// delta_X is measured so that the identity is exact whenever T itself is
// untouched; `measured_drop` is the observed change for comparison.
struct SubInvocationAudit {
  int64_t n_T = 0, n_S = 0;
  int64_t e_T = 0, e_R = 0, e_S = 0, e_X = 0;
  int64_t k_S = 0;
  int64_t delta_S = 0, delta_R = 0, delta_X = 0;
  int64_t metric_drop = 0;
  int64_t measured_drop = 0;
  size_t components_before = 0;
  size_t components_after = 0;
  std::vector<ClusterId> scope;

  // k_S >= 0, delta_R <= 0, delta_X <= 0, metric_drop >= 1, measured >= 1.
  bool Holds() const;
};

// Renders `scope` (the clusters of a multiply-connected subgraph) singly
// connected. Clusters it creates count as part of the subgraph.
using Subroutine = std::function<void(ClusterGraph&, const Scope&)>;
using ComponentFilter = std::function<bool(const ComponentView&)>;

// Repeatedly picks the smallest multiply-connected biconnected component
// (passing `filter`, if given) and hands it to `sub`, until none is left.
// Throws InvariantError if an invocation leaves its subgraph with a cycle or
// breaks the audit identity.
std::vector<SubInvocationAudit> TransformToTree(ClusterGraph& graph, const Subroutine& sub,
                                                const ComponentFilter& filter = {});

// Picks the next variable to eliminate from a scope.
using EliminationSelector =
    std::function<VarId(const ClusterGraph&, const Scope&, std::span<const VarId>)>;

// The candidate whose scope clusters, merged, have the smallest potential.
// Ties go to a seeded random draw.
VarId MinWeightSelect(const ClusterGraph& graph, const Scope& scope,
                      std::span<const VarId> candidates, Rng& rng);
EliminationSelector MinWeightSelector(Rng& rng);
// The first variable of `order` still present in the scope.
EliminationSelector FixedOrderSelector(std::vector<VarId> order);

struct NodeEliminationOptions {
  // Stop once the remaining scope is singly connected. Off, every variable
  // of the scope is eliminated (the classical algorithm).
  bool stop_when_singly_connected = true;
};

// Eliminates variables chosen by `select` from the scope, each time
// replacing the scope by scope - merged - {elim} + {buffer}. Returns the
// number of eliminations.
int NodeElimination(ClusterGraph& graph, const Scope& scope, const EliminationSelector& select,
                    NodeEliminationOptions options = {});

enum class CyclePolicy { kShortest, kCheapest, kWeighted };
std::string_view CyclePolicyName(CyclePolicy p);

struct CycleSearch {
  CyclePolicy policy = CyclePolicy::kWeighted;
  // score = length + weight * log2(sum of cluster costs on the cycle)
  double weight = 0.5;
  // Start cluster; a random cluster on some cycle when absent.
  std::optional<ClusterId> start;
};

// A simple cycle through the start cluster among those found by
// breadth-first search from it, chosen per policy. Throws PreconditionError
// when the scope has no cycle (or none through `start`).
std::vector<ClusterId> FindCycle(const ClusterGraph& graph, const Scope& scope,
                                 const CycleSearch& search, Rng& rng);

enum class DivisionPolicy {
  kMinClusterCostIncrease,
  kMinTotalCostIncrease,
  kMinDegreeIncrease,
  kClusterCostThenDegree,
  kTotalCostThenDegree,
};
std::string_view DivisionPolicyName(DivisionPolicy p);

// One way of splitting a cycle: reroute cycle edge (cycle[edge],
// cycle[edge + 1]) through cycle[via].
struct Division {
  size_t edge = 0;
  size_t via = 0;
  TraceKind kind = TraceKind::kStealAnEdge;  // steal, slide or drop
  ClusterId p, q, through;
  int64_t primary_score = 0;
  int64_t secondary_score = 0;
};

// Every legal steal/slide/drop on the cycle, scored by `policy`.
std::vector<Division> EnumerateDivisions(const ClusterGraph& graph,
                                         std::span<const ClusterId> cycle,
                                         DivisionPolicy policy);
// The lowest-scored division; ties broken by `rng`.
Division ChooseDivision(const ClusterGraph& graph, std::span<const ClusterId> cycle,
                        DivisionPolicy policy, Rng& rng);

// Applies `division` and returns the cycles it leaves behind (length >= 3).
std::vector<std::vector<ClusterId>> ApplyDivision(ClusterGraph& graph,
                                                  std::span<const ClusterId> cycle,
                                                  const Division& division);

// Eliminates, to a fixpoint, every variable occurring in exactly one scope
// cluster. `scope` is updated in place (merged clusters leave, buffers join,
// elimination clusters are not part of it). `replaced` receives, for each
// eliminated-from cluster, the cluster that took its place in the scope.
int FreeVariableElimination(ClusterGraph& graph, Scope& scope,
                            std::map<ClusterId, ClusterId>* replaced = nullptr);

enum class MergeMode { kPre, kPost };

// Merges adjacent P into Q whenever members(P) is a subset of members(Q)
// (pre mode additionally requires the same for the family markings), to a
// fixpoint. Post mode requires a singly-connected graph.
int MergeRedundantClusters(ClusterGraph& graph, MergeMode mode);

// Greedy hill climbing over slides whose spurious-variable cleanup lowers
// the total cost; applies the best one until none lowers it. Requires a
// singly-connected graph. Returns the total cost reduction.
Cost SlideBeneficially(ClusterGraph& graph);
// Same search limited to slides around clusters of `scope`; no tree
// requirement.
Cost SlideBeneficiallyWithin(ClusterGraph& graph, const Scope& scope);

enum class Strategy { kNodeElimination, kDivideLoops };

struct AlgorithmPreset {
  std::string name;
  Strategy strategy = Strategy::kNodeElimination;
  CycleSearch cycle_search;
  DivisionPolicy division_policy = DivisionPolicy::kMinClusterCostIncrease;
  // Free-variable elimination on the cycle at every Divide-a-Loop call.
  bool per_loop_free_variables = false;
  // Slide-Beneficially around each resolved cycle.
  bool per_loop_slide = false;
  // Whole-graph postprocessing after the tree is built (or restored).
  bool post_slide = false;
  bool post_merge = false;
  // Merge redundant clusters once when an incremental build is complete.
  bool final_merge = false;
};

// E, D, D2, ID, IE. Throws PreconditionError for other names.
AlgorithmPreset PresetByName(std::string_view name);
std::vector<std::string> PresetNames();

// Recursively splits a cycle with steal/slide until triangles remain, which
// are dropped.
void DivideALoop(ClusterGraph& graph, std::vector<ClusterId> cycle,
                 const AlgorithmPreset& preset, Rng& rng);
// Resolves cycles of the scope one at a time until it is singly connected.
void DivideLoops(ClusterGraph& graph, const Scope& scope, const AlgorithmPreset& preset,
                 Rng& rng);

// The subroutine a preset hands to TransformToTree.
Subroutine MakeSubroutine(const AlgorithmPreset& preset, Rng& rng);
// Whole-graph postprocessing of a preset (slide, then merge).
void PostProcess(ClusterGraph& graph, const AlgorithmPreset& preset);

struct RunReport {
  std::string preset;
  uint64_t seed = 0;
  Cost initial_cost = 0;
  Cost cost = 0;
  size_t trace_length = 0;
  std::vector<SubInvocationAudit> audits;
  size_t components = 0;
};

// Turns the graph into a junction tree with the preset; throws
// InvariantError if the result is not one.
RunReport RunPreset(ClusterGraph& graph, const AlgorithmPreset& preset, uint64_t seed);

}  // namespace jtree

#endif  // JTREE_ALGORITHMS_H_
