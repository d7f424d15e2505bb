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

#ifndef JTREE_CLUSTER_GRAPH_H_
#define JTREE_CLUSTER_GRAPH_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jtree/common.h"
#include "jtree/network.h"
#include "jtree/var_set.h"

namespace jtree {

struct Cluster {
  ClusterId id;
  VarSet members;
  // Variables belonging to families housed in this cluster. Always a subset
  // of `members`.
  VarSet family_vars;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct ClusterEdge {
  ClusterId a;  // a < b
  ClusterId b;
  VarSet separator;
  friend bool operator==(const ClusterEdge&, const ClusterEdge&) = default;
};

using Scope = std::set<ClusterId>;

// Every kind of event that can appear in a trace. The first eight are the
// graph transformations; the rest are network edits.
enum class TraceKind {
  kMerge,
  kStealAnEdge,
  kSlide,
  kDrop,
  kCollapse,
  kEliminate,
  kDropSpurious,
  kAddFillArc,
  kAddVariable,
  kAddArc,
  kDeleteArc,
  kRetractVariable,
  kDeleteVariable,
};

std::string_view TraceKindName(TraceKind kind);
std::optional<TraceKind> ParseTraceKind(std::string_view name);
inline bool IsTransformKind(TraceKind kind) {
  return kind <= TraceKind::kAddFillArc;
}

// One applied operation. Arguments are positional; each operation documents
// its layout in transforms.h / incremental.h.
struct TraceEvent {
  TraceKind kind = TraceKind::kMerge;
  std::vector<ClusterId> clusters;
  std::vector<VarId> vars;
  std::string label;
  int64_t value = 0;
  int64_t cost_delta = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// A cluster graph over a belief network. Clusters carry sets of variables,
// edges carry separators, and every family of the network is assigned to
// exactly one cluster. The low-level mutators below do not enforce the
// family/path properties; the operations in transforms.h and incremental.h
// do.
class ClusterGraph {
 public:
  using Neighbors = std::map<ClusterId, VarSet>;

  ClusterGraph();
  explicit ClusterGraph(std::shared_ptr<const BeliefNetwork> network);

  const BeliefNetwork& network() const { return *network_; }
  std::shared_ptr<const BeliefNetwork> shared_network() const { return network_; }
  // Copy-on-write access for edits.
  BeliefNetwork& MutableNetwork();

  // Clusters.
  bool HasCluster(ClusterId c) const { return clusters_.contains(c); }
  const Cluster& cluster(ClusterId c) const;
  const std::map<ClusterId, Cluster>& clusters() const { return clusters_; }
  std::vector<ClusterId> ClusterIds() const;
  size_t num_clusters() const { return clusters_.size(); }
  ClusterId AddCluster(VarSet members, VarSet family_vars);
  // Raises the id the next AddCluster will use (never lowers it). For
  // loading stored graphs with their ids.
  void SkipClusterIds(ClusterId next);
  // Removes the cluster with all incident edges and family assignments.
  void RemoveCluster(ClusterId c);
  void AddMember(ClusterId c, VarId v);
  void AddMembers(ClusterId c, const VarSet& vars);
  void RemoveMember(ClusterId c, VarId v);
  void SetFamilyVars(ClusterId c, VarSet family_vars);
  // Id the next AddCluster will use.
  ClusterId next_cluster_id() const { return next_id_; }

  // Edges.
  bool HasEdge(ClusterId a, ClusterId b) const;
  const VarSet& Separator(ClusterId a, ClusterId b) const;
  const Neighbors& NeighborsOf(ClusterId c) const;
  size_t Degree(ClusterId c) const { return NeighborsOf(c).size(); }
  size_t num_edges() const { return num_edges_; }
  std::vector<ClusterEdge> Edges() const;
  // Adds an edge or unions `separator` into the existing one. An empty
  // separator never creates an edge.
  void AddOrMergeEdge(ClusterId a, ClusterId b, const VarSet& separator);
  // Replaces the separator; an empty one deletes the edge.
  void SetSeparator(ClusterId a, ClusterId b, VarSet separator);
  void RemoveEdge(ClusterId a, ClusterId b);

  // Family assignment: which cluster houses family(v).
  std::optional<ClusterId> FamilyHome(VarId v) const;
  const std::map<VarId, ClusterId>& family_homes() const { return family_home_; }
  void SetFamilyHome(VarId v, ClusterId c);
  void ClearFamilyHome(VarId v);
  std::vector<VarId> FamiliesHousedIn(ClusterId c) const;
  // Union of the families currently housed in c, from the network.
  VarSet HousedFamilyVars(ClusterId c) const;

  // Trace.
  const std::vector<TraceEvent>& trace() const { return trace_; }
  bool tracing() const { return tracing_; }
  void set_tracing(bool on) { tracing_ = on; }

  // Copy without the trace and with tracing off, for trial applications.
  ClusterGraph ScratchCopy() const;

  // Structural equality: clusters, edges, family homes, network and the id
  // counter. The trace is not compared.
  bool SameStructure(const ClusterGraph& other) const;

 private:
  friend class TraceRecorder;

  Cluster& MutableCluster(ClusterId c);

  std::shared_ptr<const BeliefNetwork> network_;
  std::map<ClusterId, Cluster> clusters_;
  std::map<ClusterId, Neighbors> adjacency_;
  std::map<VarId, ClusterId> family_home_;
  size_t num_edges_ = 0;
  ClusterId next_id_{0};

  std::vector<TraceEvent> trace_;
  bool tracing_ = true;
  int op_depth_ = 0;
};

// Scoped recording of one public operation. Nested operations (e.g. the
// spurious-variable cleanup run inside a slide) are not recorded on their
// own; only the outermost operation lands in the trace, with the cost delta
// measured across the whole operation.
class TraceRecorder {
 public:
  TraceRecorder(ClusterGraph& graph, TraceEvent event);
  ~TraceRecorder();
  TraceRecorder(const TraceRecorder&) = delete;
  TraceRecorder& operator=(const TraceRecorder&) = delete;

  TraceEvent& event() { return event_; }
  void Commit();

 private:
  ClusterGraph& graph_;
  TraceEvent event_;
  bool outermost_;
  bool done_ = false;
  Cost cost_before_ = 0;
};

// Called after every committed outermost operation when installed. Used by
// tests to assert the family and path properties after each step.
using PostOperationHook = std::function<void(const ClusterGraph&, const TraceEvent&)>;
void SetPostOperationHook(PostOperationHook hook);

// One cluster per variable holding its family, and one edge per arc X->Y
// between the clusters of X and Y carrying {X}.
ClusterGraph BuildInitialClusterGraph(std::shared_ptr<const BeliefNetwork> network);
ClusterGraph BuildInitialClusterGraph(const BeliefNetwork& network);

// Product of member cardinalities; the empty set costs 1.
Cost ClusterCost(const VarSet& members, const BeliefNetwork& network);
Cost ClusterCost(const ClusterGraph& graph, ClusterId c);
Cost GraphCost(const ClusterGraph& graph);
int64_t EdgesMinusClusters(const ClusterGraph& graph);

// A biconnected block of the graph (or of the subgraph induced by a scope).
struct ComponentView {
  std::vector<ClusterId> clusters;  // sorted
  std::vector<std::pair<ClusterId, ClusterId>> edges;  // (a < b), sorted
  // A single edge (bridge): nothing to resolve.
  bool trivially_resolved = false;
};

// Standard block decomposition. Isolated clusters belong to no block. With a
// scope, only the subgraph induced by the scope is considered.
std::vector<ComponentView> BiconnectedComponents(const ClusterGraph& graph,
                                                 const Scope* scope = nullptr);

// Connected components of the graph (or of the induced subgraph).
size_t ConnectedComponentCount(const ClusterGraph& graph, const Scope* scope = nullptr);
// Number of edges with both endpoints in the scope.
size_t InducedEdgeCount(const ClusterGraph& graph, const Scope& scope);
// No cycles in the graph (or in the induced subgraph).
bool IsSinglyConnected(const ClusterGraph& graph, const Scope* scope = nullptr);
Scope AllClusters(const ClusterGraph& graph);

}  // namespace jtree

#endif  // JTREE_CLUSTER_GRAPH_H_
