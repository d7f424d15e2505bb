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

#ifndef JTREE_TRANSFORMS_H_
#define JTREE_TRANSFORMS_H_

#include <optional>
#include <span>
#include <vector>

#include "jtree/cluster_graph.h"

namespace jtree {

// Graph transformations. Each one preserves the family and path properties,
// validates its preconditions before touching the graph (throwing
// PreconditionError), and appends one TraceEvent. The trace argument layout
// is given per operation.

// Replaces p and q by a new cluster holding the union of members, family
// markings and family assignments. Parallel edges to a common neighbor are
// merged by separator union; a p-q edge disappears. Spurious variables are
// dropped around the result unless `drop_spurious` is false.
// Trace: clusters = {p, q}; value = 1 when the cleanup was skipped.
ClusterId Merge(ClusterGraph& graph, ClusterId p, ClusterId q, bool drop_spurious = true);

// Reroutes edge (p, q) through `via`, which must be adjacent to neither. The
// old separator is added to `via` and carried by both new edges.
// Trace: clusters = {p, q, via}.
void StealAnEdge(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via);

// Like StealAnEdge when exactly one of (p, via), (q, via) exists; that edge's
// separator absorbs sep(p, q). Spurious variables are dropped afterwards.
// Trace: clusters = {p, q, via}.
void Slide(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via);

// Deletes edge (p, q) of the triangle p, q, via; `via` and its two edges
// absorb the old separator. Spurious variables are dropped afterwards.
// Trace: clusters = {p, q, via}.
void Drop(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via);

// Deletes the cycle edge (cycle[victim], cycle[victim + 1 mod k]) and adds its
// separator to every other cluster and edge of the cycle.
// Trace: clusters = cycle, value = victim.
void Collapse(ClusterGraph& graph, std::span<const ClusterId> cycle, size_t victim);

struct EliminationResult {
  ClusterId elim;
  std::optional<ClusterId> buffer;  // absent when the elimination cluster is {x}
  std::vector<ClusterId> merged;
};

// Merges the scope clusters containing x into an elimination cluster and
// hangs a buffer cluster (everything but x) off it. The buffer inherits the
// merged clusters' edges into the scope; edges leaving the scope migrate to
// the elimination cluster. No spurious cleanup is performed.
// Trace: vars = {x}, clusters = scope.
EliminationResult Eliminate(ClusterGraph& graph, VarId x, const Scope& scope);

// x is in no housed family of c and is carried by at most one edge at c.
bool IsSpurious(const ClusterGraph& graph, VarId x, ClusterId c);

// Removes spurious variables to a fixpoint, starting from `seeds` (all
// clusters when absent) and following every edge a removal touches. Empty
// edges and clusters are deleted. Returns the number of (variable, cluster)
// removals.
// Trace: clusters = seeds, value = 1 when seeded with every cluster.
int DropSpurious(ClusterGraph& graph, const std::optional<Scope>& seeds = std::nullopt);

// Makes x and y co-resident. When no cluster holds both, the missing
// variable is added to a cluster holding the other and a new edge carrying it
// joins that cluster to a cluster already containing it. The automatic
// choice prefers a host that already neighbors such a cluster, then the
// cheapest result, then the lowest id.
// Trace: vars = {x, y}, clusters = {} or {host, partner}.
void AddFillArc(ClusterGraph& graph, VarId x, VarId y);
void AddFillArc(ClusterGraph& graph, VarId x, VarId y, ClusterId host, ClusterId partner);

// Every cluster distinct and alive, consecutive clusters (cyclically)
// adjacent, length >= 3.
bool IsSimpleCycle(const ClusterGraph& graph, std::span<const ClusterId> cycle);

}  // namespace jtree

#endif  // JTREE_TRANSFORMS_H_
