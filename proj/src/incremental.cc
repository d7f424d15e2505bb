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

#include "jtree/incremental.h"

#include <algorithm>

#include "jtree/transforms.h"
#include "jtree/verify.h"

namespace jtree {
namespace {

ClusterId HomeOf(const ClusterGraph& graph, VarId v) {
  std::optional<ClusterId> home = graph.FamilyHome(v);
  if (!home) {
    throw InvariantError("family of " + graph.network().Name(v) + " is not housed anywhere");
  }
  return *home;
}

// Removes x from c and from every separator at c; empty edges go away.
void Strip(ClusterGraph& graph, ClusterId c, VarId x) {
  std::vector<std::pair<ClusterId, VarSet>> carrying;
  for (const auto& [n, sep] : graph.NeighborsOf(c)) {
    if (sep.Contains(x)) carrying.emplace_back(n, sep);
  }
  for (auto& [n, sep] : carrying) {
    sep.Erase(x);
    graph.SetSeparator(c, n, std::move(sep));
  }
  graph.RemoveMember(c, x);
}

void RefreshFamilyMarks(ClusterGraph& graph, ClusterId c) {
  graph.SetFamilyVars(c, graph.HousedFamilyVars(c));
}

}  // namespace

int64_t EditPolicy::Encode() const {
  return (retract ? 1 : 0) | (shape == RetractionShape::kStar ? 2 : 0);
}

EditPolicy EditPolicy::Decode(int64_t value) {
  return EditPolicy{.retract = (value & 1) != 0,
                    .shape = (value & 2) != 0 ? RetractionShape::kStar : RetractionShape::kChain};
}

ClusterId AddVariable(ClusterGraph& graph, const std::string& name, uint32_t cardinality) {
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kAddVariable,
                                      .label = name,
                                      .value = cardinality});
  VarId v = graph.MutableNetwork().AddVariable(name, cardinality);
  ClusterId c = graph.AddCluster(VarSet{v}, VarSet{v});
  graph.SetFamilyHome(v, c);
  rec.event().vars = {v};
  rec.event().clusters = {c};
  rec.Commit();
  return c;
}

void AddArc(ClusterGraph& graph, VarId x, VarId y) {
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kAddArc, .vars = {x, y}});
  graph.MutableNetwork().AddArc(x, y);
  ClusterId p = HomeOf(graph, y);
  ClusterId q = HomeOf(graph, x);
  graph.AddMember(p, x);
  RefreshFamilyMarks(graph, p);
  if (p != q) graph.AddOrMergeEdge(p, q, VarSet{x});
  rec.event().clusters = {p, q};
  rec.Commit();
}

void DeleteArc(ClusterGraph& graph, VarId x, VarId y, EditPolicy policy) {
  const BeliefNetwork& net = graph.network();
  if (!net.Contains(x) || !net.Contains(y) || !net.HasArc(x, y)) {
    throw PreconditionError("delete_arc: no arc " +
                            (net.Contains(x) ? net.Name(x) : std::string("?")) + " -> " +
                            (net.Contains(y) ? net.Name(y) : std::string("?")));
  }
  ClusterId p = HomeOf(graph, y);
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kDeleteArc,
                                      .clusters = {p},
                                      .vars = {x, y},
                                      .value = policy.Encode()});
  graph.MutableNetwork().RemoveArc(x, y);
  RefreshFamilyMarks(graph, p);
  if (!graph.cluster(p).family_vars.Contains(x)) {
    if (IsSpurious(graph, x, p)) {
      DropSpurious(graph, Scope{p});
    } else if (policy.retract) {
      RetractVariable(graph, p, x, policy.shape);
    }
  }
  rec.Commit();
}

void RetractVariable(ClusterGraph& graph, ClusterId p, VarId x, RetractionShape shape) {
  const Cluster& cp = graph.cluster(p);
  if (!cp.members.Contains(x)) {
    throw PreconditionError("retract_variable: " + graph.network().Name(x) +
                            " is not in cluster " + std::to_string(p.value));
  }
  if (cp.family_vars.Contains(x)) {
    throw PreconditionError("retract_variable: " + graph.network().Name(x) +
                            " belongs to a family housed in cluster " + std::to_string(p.value));
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kRetractVariable,
                                      .clusters = {p},
                                      .vars = {x},
                                      .value = shape == RetractionShape::kStar ? 1 : 0});
  std::vector<ClusterId> pending{p};
  while (!pending.empty()) {
    ClusterId c = pending.back();
    pending.pop_back();
    if (!graph.HasCluster(c) || !graph.cluster(c).members.Contains(x) ||
        graph.cluster(c).family_vars.Contains(x)) {
      continue;
    }
    std::vector<ClusterId> carriers;
    for (const auto& [n, sep] : graph.NeighborsOf(c)) {
      if (sep.Contains(x)) carriers.push_back(n);
    }
    for (size_t i = 1; i < carriers.size(); ++i) {
      ClusterId from = shape == RetractionShape::kStar ? carriers[0] : carriers[i - 1];
      graph.AddOrMergeEdge(from, carriers[i], VarSet{x});
    }
    Strip(graph, c, x);
    if (graph.cluster(c).members.Empty()) graph.RemoveCluster(c);
    // Larger ids first so the lowest-numbered carrier is handled next.
    for (auto it = carriers.rbegin(); it != carriers.rend(); ++it) pending.push_back(*it);
  }
  rec.Commit();
}

void DeleteVariable(ClusterGraph& graph, VarId v, EditPolicy policy) {
  if (!graph.network().Contains(v)) {
    throw PreconditionError("delete_variable: unknown variable id " + std::to_string(v.value));
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kDeleteVariable,
                                      .vars = {v},
                                      .label = graph.network().Name(v),
                                      .value = policy.Encode()});
  for (VarId parent : graph.network().Parents(v).ToVector()) DeleteArc(graph, parent, v, policy);
  for (VarId child : graph.network().Children(v).ToVector()) DeleteArc(graph, v, child, policy);
  graph.ClearFamilyHome(v);
  Scope touched;
  for (ClusterId c : graph.ClusterIds()) {
    if (!graph.cluster(c).members.Contains(v)) continue;
    for (const auto& [n, _] : graph.NeighborsOf(c)) touched.insert(n);
    Strip(graph, c, v);
    if (graph.cluster(c).members.Empty()) {
      graph.RemoveCluster(c);
    } else {
      RefreshFamilyMarks(graph, c);
      touched.insert(c);
    }
  }
  graph.MutableNetwork().RemoveVariable(v);
  std::erase_if(touched, [&](ClusterId c) { return !graph.HasCluster(c); });
  if (!touched.empty()) DropSpurious(graph, touched);
  rec.Commit();
}

void ApplyTraceEvent(ClusterGraph& graph, const TraceEvent& e) {
  auto cluster = [&](size_t i) {
    if (i >= e.clusters.size()) throw PreconditionError("trace event lacks cluster argument");
    return e.clusters[i];
  };
  auto var = [&](size_t i) {
    if (i >= e.vars.size()) throw PreconditionError("trace event lacks variable argument");
    return e.vars[i];
  };
  switch (e.kind) {
    case TraceKind::kMerge: Merge(graph, cluster(0), cluster(1), e.value == 0); return;
    case TraceKind::kStealAnEdge: StealAnEdge(graph, cluster(0), cluster(1), cluster(2)); return;
    case TraceKind::kSlide: Slide(graph, cluster(0), cluster(1), cluster(2)); return;
    case TraceKind::kDrop: Drop(graph, cluster(0), cluster(1), cluster(2)); return;
    case TraceKind::kCollapse:
      if (e.value < 0) throw PreconditionError("collapse: negative victim index");
      Collapse(graph, e.clusters, static_cast<size_t>(e.value));
      return;
    case TraceKind::kEliminate:
      Eliminate(graph, var(0), Scope(e.clusters.begin(), e.clusters.end()));
      return;
    case TraceKind::kDropSpurious:
      if (e.value == 1) {
        DropSpurious(graph);
      } else {
        DropSpurious(graph, Scope(e.clusters.begin(), e.clusters.end()));
      }
      return;
    case TraceKind::kAddFillArc:
      if (e.clusters.empty()) {
        AddFillArc(graph, var(0), var(1));
      } else {
        AddFillArc(graph, var(0), var(1), cluster(0), cluster(1));
      }
      return;
    case TraceKind::kAddVariable:
      if (e.value < 1 || e.value > UINT32_MAX) throw PreconditionError("bad cardinality");
      AddVariable(graph, e.label, static_cast<uint32_t>(e.value));
      return;
    case TraceKind::kAddArc: AddArc(graph, var(0), var(1)); return;
    case TraceKind::kDeleteArc: DeleteArc(graph, var(0), var(1), EditPolicy::Decode(e.value)); return;
    case TraceKind::kRetractVariable:
      RetractVariable(graph, cluster(0), var(0),
                      e.value == 1 ? RetractionShape::kStar : RetractionShape::kChain);
      return;
    case TraceKind::kDeleteVariable:
      DeleteVariable(graph, var(0), EditPolicy::Decode(e.value));
      return;
  }
  throw PreconditionError("unknown trace event kind");
}

void ReplayTrace(ClusterGraph& graph, const std::vector<TraceEvent>& events) {
  for (const TraceEvent& e : events) ApplyTraceEvent(graph, e);
}

EditSession::EditSession(AlgorithmPreset preset, uint64_t seed, EditPolicy policy)
    : graph_(std::make_shared<BeliefNetwork>()),
      preset_(std::move(preset)),
      rng_(seed),
      policy_(policy) {}

EditSession::EditSession(ClusterGraph graph, AlgorithmPreset preset, uint64_t seed,
                         EditPolicy policy)
    : graph_(std::move(graph)), preset_(std::move(preset)), rng_(seed), policy_(policy) {
  dirty_ = AllClusters(graph_);
}

template <typename Fn>
void EditSession::Edit(Fn&& fn) {
  // Anything whose contents or edges changed is dirty.
  const auto clusters_before = graph_.clusters();
  std::map<ClusterId, ClusterGraph::Neighbors> adjacency_before;
  for (const auto& [id, _] : clusters_before) adjacency_before.emplace(id, graph_.NeighborsOf(id));
  fn();
  for (const auto& [id, cl] : graph_.clusters()) {
    auto it = clusters_before.find(id);
    if (it == clusters_before.end() || !(it->second == cl) ||
        adjacency_before.at(id) != graph_.NeighborsOf(id)) {
      dirty_.insert(id);
    }
  }
  std::erase_if(dirty_, [&](ClusterId c) { return !graph_.HasCluster(c); });
}

ClusterId EditSession::AddVariable(const std::string& name, uint32_t cardinality) {
  ClusterId c;
  Edit([&] { c = jtree::AddVariable(graph_, name, cardinality); });
  return c;
}

void EditSession::AddArc(VarId x, VarId y) {
  Edit([&] { jtree::AddArc(graph_, x, y); });
}

void EditSession::AddArc(std::string_view x, std::string_view y) {
  AddArc(network().Require(x), network().Require(y));
}

void EditSession::DeleteArc(VarId x, VarId y) {
  Edit([&] { jtree::DeleteArc(graph_, x, y, policy_); });
}

void EditSession::RetractVariable(ClusterId p, VarId x) {
  Edit([&] { jtree::RetractVariable(graph_, p, x, policy_.shape); });
}

void EditSession::DeleteVariable(VarId v) {
  Edit([&] { jtree::DeleteVariable(graph_, v, policy_); });
}

RestoreReport EditSession::Restore() {
  RestoreReport report;
  report.was_singly_connected = IsSinglyConnected(graph_);
  const Scope dirty = dirty_;
  const ClusterId watermark = graph_.next_cluster_id();
  report.audits = TransformToTree(graph_, MakeSubroutine(preset_, rng_),
                                  [&](const ComponentView& view) {
                                    for (ClusterId c : view.clusters) {
                                      if (dirty.contains(c) || !(c < watermark)) return true;
                                    }
                                    return false;
                                  });
  if (!report.audits.empty()) PostProcess(graph_, preset_);
  CheckReport check = CheckJunctionTree(graph_);
  if (!check.pass) {
    std::string msg = "restore left an invalid junction tree:";
    for (const std::string& w : check.witnesses) msg += "\n  " + w;
    throw InvariantError(msg);
  }
  dirty_.clear();
  report.cost = GraphCost(graph_);
  return report;
}

void EditSession::Finish() {
  if (preset_.final_merge) MergeRedundantClusters(graph_, MergeMode::kPost);
}

}  // namespace jtree
