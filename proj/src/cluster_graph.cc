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

#include "jtree/cluster_graph.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_map>

namespace jtree {
namespace {

PostOperationHook& Hook() {
  static PostOperationHook hook;
  return hook;
}

std::string IdText(ClusterId c) { return std::to_string(c.value); }

constexpr std::array<std::pair<TraceKind, std::string_view>, 13> kKindNames = {{
    {TraceKind::kMerge, "merge"},
    {TraceKind::kStealAnEdge, "steal_an_edge"},
    {TraceKind::kSlide, "slide"},
    {TraceKind::kDrop, "drop"},
    {TraceKind::kCollapse, "collapse"},
    {TraceKind::kEliminate, "eliminate"},
    {TraceKind::kDropSpurious, "drop_spurious"},
    {TraceKind::kAddFillArc, "add_fill_arc"},
    {TraceKind::kAddVariable, "add_variable"},
    {TraceKind::kAddArc, "add_arc"},
    {TraceKind::kDeleteArc, "delete_arc"},
    {TraceKind::kRetractVariable, "retract_variable"},
    {TraceKind::kDeleteVariable, "delete_variable"},
}};

}  // namespace

std::string_view TraceKindName(TraceKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<TraceKind> ParseTraceKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

ClusterGraph::ClusterGraph() : network_(std::make_shared<BeliefNetwork>()) {}

ClusterGraph::ClusterGraph(std::shared_ptr<const BeliefNetwork> network)
    : network_(std::move(network)) {
  if (!network_) network_ = std::make_shared<BeliefNetwork>();
}

BeliefNetwork& ClusterGraph::MutableNetwork() {
  if (network_.use_count() > 1) {
    network_ = std::make_shared<BeliefNetwork>(*network_);
  }
  return const_cast<BeliefNetwork&>(*network_);
}

const Cluster& ClusterGraph::cluster(ClusterId c) const {
  auto it = clusters_.find(c);
  if (it == clusters_.end()) {
    throw PreconditionError("unknown cluster " + IdText(c));
  }
  return it->second;
}

Cluster& ClusterGraph::MutableCluster(ClusterId c) {
  return const_cast<Cluster&>(cluster(c));
}

std::vector<ClusterId> ClusterGraph::ClusterIds() const {
  std::vector<ClusterId> ids;
  ids.reserve(clusters_.size());
  for (const auto& [id, _] : clusters_) ids.push_back(id);
  return ids;
}

ClusterId ClusterGraph::AddCluster(VarSet members, VarSet family_vars) {
  ClusterId id = next_id_;
  next_id_.value++;
  members |= family_vars;
  clusters_.emplace(id, Cluster{id, std::move(members), std::move(family_vars)});
  adjacency_.emplace(id, Neighbors{});
  return id;
}

void ClusterGraph::SkipClusterIds(ClusterId next) {
  if (next_id_ < next) next_id_ = next;
}

void ClusterGraph::RemoveCluster(ClusterId c) {
  cluster(c);
  std::vector<ClusterId> nbrs;
  for (const auto& [n, _] : adjacency_.at(c)) nbrs.push_back(n);
  for (ClusterId n : nbrs) RemoveEdge(c, n);
  for (auto it = family_home_.begin(); it != family_home_.end();) {
    it = it->second == c ? family_home_.erase(it) : std::next(it);
  }
  clusters_.erase(c);
  adjacency_.erase(c);
}

void ClusterGraph::AddMember(ClusterId c, VarId v) { MutableCluster(c).members.Insert(v); }

void ClusterGraph::AddMembers(ClusterId c, const VarSet& vars) {
  MutableCluster(c).members |= vars;
}

void ClusterGraph::RemoveMember(ClusterId c, VarId v) {
  Cluster& cl = MutableCluster(c);
  cl.members.Erase(v);
  cl.family_vars.Erase(v);
}

void ClusterGraph::SetFamilyVars(ClusterId c, VarSet family_vars) {
  Cluster& cl = MutableCluster(c);
  cl.members |= family_vars;
  cl.family_vars = std::move(family_vars);
}

bool ClusterGraph::HasEdge(ClusterId a, ClusterId b) const {
  auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.contains(b);
}

const VarSet& ClusterGraph::Separator(ClusterId a, ClusterId b) const {
  auto it = adjacency_.find(a);
  if (it != adjacency_.end()) {
    auto jt = it->second.find(b);
    if (jt != it->second.end()) return jt->second;
  }
  throw PreconditionError("no edge between clusters " + IdText(a) + " and " + IdText(b));
}

const ClusterGraph::Neighbors& ClusterGraph::NeighborsOf(ClusterId c) const {
  auto it = adjacency_.find(c);
  if (it == adjacency_.end()) throw PreconditionError("unknown cluster " + IdText(c));
  return it->second;
}

std::vector<ClusterEdge> ClusterGraph::Edges() const {
  std::vector<ClusterEdge> out;
  out.reserve(num_edges_);
  for (const auto& [a, nbrs] : adjacency_) {
    for (const auto& [b, sep] : nbrs) {
      if (a < b) out.push_back(ClusterEdge{a, b, sep});
    }
  }
  return out;
}

void ClusterGraph::AddOrMergeEdge(ClusterId a, ClusterId b, const VarSet& separator) {
  if (a == b) throw PreconditionError("self edge on cluster " + IdText(a));
  cluster(a);
  cluster(b);
  auto& na = adjacency_.at(a);
  auto it = na.find(b);
  if (it != na.end()) {
    it->second |= separator;
    adjacency_.at(b).at(a) |= separator;
    return;
  }
  if (separator.Empty()) return;
  na.emplace(b, separator);
  adjacency_.at(b).emplace(a, separator);
  ++num_edges_;
}

void ClusterGraph::SetSeparator(ClusterId a, ClusterId b, VarSet separator) {
  Separator(a, b);
  if (separator.Empty()) {
    RemoveEdge(a, b);
    return;
  }
  adjacency_.at(a).at(b) = separator;
  adjacency_.at(b).at(a) = std::move(separator);
}

void ClusterGraph::RemoveEdge(ClusterId a, ClusterId b) {
  Separator(a, b);
  adjacency_.at(a).erase(b);
  adjacency_.at(b).erase(a);
  --num_edges_;
}

std::optional<ClusterId> ClusterGraph::FamilyHome(VarId v) const {
  auto it = family_home_.find(v);
  if (it == family_home_.end()) return std::nullopt;
  return it->second;
}

void ClusterGraph::SetFamilyHome(VarId v, ClusterId c) {
  cluster(c);
  family_home_[v] = c;
}

void ClusterGraph::ClearFamilyHome(VarId v) { family_home_.erase(v); }

std::vector<VarId> ClusterGraph::FamiliesHousedIn(ClusterId c) const {
  std::vector<VarId> out;
  for (const auto& [v, home] : family_home_) {
    if (home == c) out.push_back(v);
  }
  return out;
}

VarSet ClusterGraph::HousedFamilyVars(ClusterId c) const {
  VarSet out;
  for (VarId v : FamiliesHousedIn(c)) out |= network_->Family(v);
  return out;
}

ClusterGraph ClusterGraph::ScratchCopy() const {
  ClusterGraph copy;
  copy.network_ = network_;
  copy.clusters_ = clusters_;
  copy.adjacency_ = adjacency_;
  copy.family_home_ = family_home_;
  copy.num_edges_ = num_edges_;
  copy.next_id_ = next_id_;
  copy.tracing_ = false;
  return copy;
}

bool ClusterGraph::SameStructure(const ClusterGraph& other) const {
  return clusters_ == other.clusters_ && adjacency_ == other.adjacency_ &&
         family_home_ == other.family_home_ && next_id_ == other.next_id_ &&
         *network_ == *other.network_;
}

TraceRecorder::TraceRecorder(ClusterGraph& graph, TraceEvent event)
    : graph_(graph), event_(std::move(event)), outermost_(graph.op_depth_ == 0) {
  ++graph_.op_depth_;
  if (outermost_) cost_before_ = GraphCost(graph_);
}

TraceRecorder::~TraceRecorder() {
  if (!done_) --graph_.op_depth_;
}

void TraceRecorder::Commit() {
  if (done_) return;
  done_ = true;
  --graph_.op_depth_;
  if (!outermost_) return;
  event_.cost_delta = CostDelta(cost_before_, GraphCost(graph_));
  if (graph_.tracing_) graph_.trace_.push_back(event_);
  if (graph_.tracing_ && Hook()) Hook()(graph_, event_);
}

void SetPostOperationHook(PostOperationHook hook) { Hook() = std::move(hook); }

ClusterGraph BuildInitialClusterGraph(std::shared_ptr<const BeliefNetwork> network) {
  ClusterGraph graph(std::move(network));
  const BeliefNetwork& net = graph.network();
  std::map<VarId, ClusterId> home;
  for (VarId v : net.Variables()) {
    VarSet family = net.Family(v);
    ClusterId c = graph.AddCluster(family, family);
    graph.SetFamilyHome(v, c);
    home.emplace(v, c);
  }
  for (const Arc& arc : net.Arcs()) {
    graph.AddOrMergeEdge(home.at(arc.parent), home.at(arc.child), VarSet{arc.parent});
  }
  return graph;
}

ClusterGraph BuildInitialClusterGraph(const BeliefNetwork& network) {
  return BuildInitialClusterGraph(std::make_shared<const BeliefNetwork>(network));
}

Cost ClusterCost(const VarSet& members, const BeliefNetwork& network) {
  Cost cost = 1;
  for (VarId v : members) cost = SaturatingMul(cost, network.Cardinality(v));
  return cost;
}

Cost ClusterCost(const ClusterGraph& graph, ClusterId c) {
  return ClusterCost(graph.cluster(c).members, graph.network());
}

Cost GraphCost(const ClusterGraph& graph) {
  Cost total = 0;
  for (const auto& [id, cl] : graph.clusters()) {
    total = SaturatingAdd(total, ClusterCost(cl.members, graph.network()));
  }
  return total;
}

int64_t EdgesMinusClusters(const ClusterGraph& graph) {
  return static_cast<int64_t>(graph.num_edges()) -
         static_cast<int64_t>(graph.num_clusters());
}

Scope AllClusters(const ClusterGraph& graph) {
  Scope s;
  for (const auto& [id, _] : graph.clusters()) s.insert(s.end(), id);
  return s;
}

namespace {

// Hopcroft-Tarjan block decomposition over a compact index space.
class BlockFinder {
 public:
  BlockFinder(const ClusterGraph& graph, const Scope* scope) : graph_(graph) {
    for (const auto& [id, _] : graph.clusters()) {
      if (scope && !scope->contains(id)) continue;
      index_.emplace(id.value, ids_.size());
      ids_.push_back(id);
    }
    adj_.resize(ids_.size());
    for (size_t i = 0; i < ids_.size(); ++i) {
      for (const auto& [n, _] : graph.NeighborsOf(ids_[i])) {
        auto it = index_.find(n.value);
        if (it != index_.end()) adj_[i].push_back(it->second);
      }
    }
  }

  std::vector<ComponentView> Run() {
    disc_.assign(ids_.size(), -1);
    low_.assign(ids_.size(), 0);
    for (size_t v = 0; v < ids_.size(); ++v) {
      if (disc_[v] < 0) Visit(v);
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const ComponentView& a, const ComponentView& b) {
                return a.clusters < b.clusters;
              });
    return std::move(blocks_);
  }

 private:
  // Iterative DFS keeping an explicit edge stack.
  void Visit(size_t root) {
    struct Frame {
      size_t v;
      size_t parent;
      size_t next = 0;
    };
    std::vector<Frame> stack;
    disc_[root] = low_[root] = time_++;
    stack.push_back({root, SIZE_MAX});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj_[f.v].size()) {
        size_t w = adj_[f.v][f.next++];
        if (w == f.parent) continue;
        if (disc_[w] < 0) {
          edge_stack_.emplace_back(f.v, w);
          disc_[w] = low_[w] = time_++;
          stack.push_back({w, f.v});
        } else if (disc_[w] < disc_[f.v]) {
          edge_stack_.emplace_back(f.v, w);
          low_[f.v] = std::min(low_[f.v], disc_[w]);
        }
        continue;
      }
      size_t v = f.v;
      size_t parent = f.parent;
      stack.pop_back();
      if (parent == SIZE_MAX) continue;
      low_[parent] = std::min(low_[parent], low_[v]);
      if (low_[v] >= disc_[parent]) EmitBlock(parent, v);
    }
  }

  void EmitBlock(size_t u, size_t v) {
    ComponentView view;
    std::set<ClusterId> members;
    while (!edge_stack_.empty()) {
      auto [a, b] = edge_stack_.back();
      edge_stack_.pop_back();
      ClusterId ca = ids_[a], cb = ids_[b];
      members.insert(ca);
      members.insert(cb);
      view.edges.emplace_back(std::min(ca, cb), std::max(ca, cb));
      if (a == u && b == v) break;
    }
    view.clusters.assign(members.begin(), members.end());
    std::sort(view.edges.begin(), view.edges.end());
    view.trivially_resolved = view.edges.size() == 1;
    blocks_.push_back(std::move(view));
  }

  const ClusterGraph& graph_;
  std::vector<ClusterId> ids_;
  std::unordered_map<uint32_t, size_t> index_;
  std::vector<std::vector<size_t>> adj_;
  std::vector<int> disc_;
  std::vector<int> low_;
  int time_ = 0;
  std::vector<std::pair<size_t, size_t>> edge_stack_;
  std::vector<ComponentView> blocks_;
};

}  // namespace

std::vector<ComponentView> BiconnectedComponents(const ClusterGraph& graph,
                                                 const Scope* scope) {
  return BlockFinder(graph, scope).Run();
}

namespace {

struct UnionFind {
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t Find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool Unite(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<size_t> parent;
};

// Returns (components, edges that closed a cycle).
std::pair<size_t, size_t> ForestStats(const ClusterGraph& graph, const Scope* scope) {
  std::unordered_map<uint32_t, size_t> index;
  for (const auto& [id, _] : graph.clusters()) {
    if (scope && !scope->contains(id)) continue;
    index.emplace(id.value, index.size());
  }
  UnionFind uf(index.size());
  size_t components = index.size();
  size_t cyclic = 0;
  for (const auto& [id, _] : graph.clusters()) {
    auto ia = index.find(id.value);
    if (ia == index.end()) continue;
    for (const auto& [n, sep] : graph.NeighborsOf(id)) {
      if (!(id < n)) continue;
      auto ib = index.find(n.value);
      if (ib == index.end()) continue;
      if (uf.Unite(ia->second, ib->second)) {
        --components;
      } else {
        ++cyclic;
      }
    }
  }
  return {components, cyclic};
}

}  // namespace

size_t ConnectedComponentCount(const ClusterGraph& graph, const Scope* scope) {
  return ForestStats(graph, scope).first;
}

size_t InducedEdgeCount(const ClusterGraph& graph, const Scope& scope) {
  size_t count = 0;
  for (ClusterId c : scope) {
    if (!graph.HasCluster(c)) continue;
    for (const auto& [n, _] : graph.NeighborsOf(c)) {
      if (c < n && scope.contains(n)) ++count;
    }
  }
  return count;
}

bool IsSinglyConnected(const ClusterGraph& graph, const Scope* scope) {
  return ForestStats(graph, scope).second == 0;
}

}  // namespace jtree
