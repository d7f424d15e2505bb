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

#include "jtree/transforms.h"

#include <algorithm>
#include <string>
#include <tuple>

namespace jtree {
namespace {

std::string Name(ClusterId c) { return "cluster " + std::to_string(c.value); }

void RequireCluster(const ClusterGraph& graph, ClusterId c) {
  if (!graph.HasCluster(c)) throw PreconditionError("unknown " + Name(c));
}

void RequireEdge(const ClusterGraph& graph, ClusterId p, ClusterId q) {
  RequireCluster(graph, p);
  RequireCluster(graph, q);
  if (!graph.HasEdge(p, q)) {
    throw PreconditionError("no edge between " + Name(p) + " and " + Name(q));
  }
}

void RequireVia(ClusterId p, ClusterId q, ClusterId via) {
  if (via == p || via == q) {
    throw PreconditionError("via " + Name(via) + " is an endpoint of the edge");
  }
}

// Shared body of steal/slide/drop: route sep(p, q) through `via`.
void Reroute(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via) {
  VarSet sep = graph.Separator(p, q);
  graph.RemoveEdge(p, q);
  graph.AddMembers(via, sep);
  graph.AddOrMergeEdge(p, via, sep);
  graph.AddOrMergeEdge(q, via, sep);
}

}  // namespace

ClusterId Merge(ClusterGraph& graph, ClusterId p, ClusterId q, bool drop_spurious) {
  RequireCluster(graph, p);
  RequireCluster(graph, q);
  if (p == q) throw PreconditionError("cannot merge " + Name(p) + " with itself");
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kMerge, .clusters = {p, q},
                                           .value = drop_spurious ? 0 : 1});

  const Cluster& cp = graph.cluster(p);
  const Cluster& cq = graph.cluster(q);
  VarSet members = cp.members | cq.members;
  VarSet family_vars = cp.family_vars | cq.family_vars;
  std::map<ClusterId, VarSet> edges;
  for (ClusterId src : {p, q}) {
    for (const auto& [n, sep] : graph.NeighborsOf(src)) {
      if (n != p && n != q) edges[n] |= sep;
    }
  }
  std::vector<VarId> families = graph.FamiliesHousedIn(p);
  for (VarId v : graph.FamiliesHousedIn(q)) families.push_back(v);

  graph.RemoveCluster(p);
  graph.RemoveCluster(q);
  ClusterId m = graph.AddCluster(std::move(members), std::move(family_vars));
  for (VarId v : families) graph.SetFamilyHome(v, m);
  Scope seeds{m};
  for (const auto& [n, sep] : edges) {
    graph.AddOrMergeEdge(m, n, sep);
    seeds.insert(n);
  }
  if (drop_spurious) DropSpurious(graph, seeds);
  rec.Commit();
  return m;
}

void StealAnEdge(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via) {
  RequireEdge(graph, p, q);
  RequireCluster(graph, via);
  RequireVia(p, q, via);
  if (graph.HasEdge(p, via) || graph.HasEdge(q, via)) {
    throw PreconditionError("steal_an_edge: " + Name(via) +
                            " is adjacent to an endpoint; use slide or drop");
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kStealAnEdge, .clusters = {p, q, via}});
  Reroute(graph, p, q, via);
  rec.Commit();
}

void Slide(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via) {
  RequireEdge(graph, p, q);
  RequireCluster(graph, via);
  RequireVia(p, q, via);
  if (graph.HasEdge(p, via) == graph.HasEdge(q, via)) {
    throw PreconditionError("slide: " + Name(via) +
                            " must be adjacent to exactly one endpoint");
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kSlide, .clusters = {p, q, via}});
  Reroute(graph, p, q, via);
  DropSpurious(graph, Scope{p, q, via});
  rec.Commit();
}

void Drop(ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via) {
  RequireEdge(graph, p, q);
  RequireCluster(graph, via);
  RequireVia(p, q, via);
  if (!graph.HasEdge(p, via) || !graph.HasEdge(q, via)) {
    throw PreconditionError("drop: " + Name(p) + ", " + Name(q) + ", " + Name(via) +
                            " do not form a triangle");
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kDrop, .clusters = {p, q, via}});
  Reroute(graph, p, q, via);
  DropSpurious(graph, Scope{p, q, via});
  rec.Commit();
}

void Collapse(ClusterGraph& graph, std::span<const ClusterId> cycle, size_t victim) {
  if (!IsSimpleCycle(graph, cycle)) {
    throw PreconditionError("collapse: argument is not a simple cycle");
  }
  const size_t k = cycle.size();
  if (victim >= k) throw PreconditionError("collapse: victim edge is not on the cycle");
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kCollapse,
                                      .clusters = {cycle.begin(), cycle.end()},
                                      .value = static_cast<int64_t>(victim)});
  ClusterId a = cycle[victim];
  ClusterId b = cycle[(victim + 1) % k];
  VarSet sep = graph.Separator(a, b);
  graph.RemoveEdge(a, b);
  for (ClusterId c : cycle) graph.AddMembers(c, sep);
  for (size_t i = 0; i < k; ++i) {
    if (i == victim) continue;
    graph.AddOrMergeEdge(cycle[i], cycle[(i + 1) % k], sep);
  }
  DropSpurious(graph, Scope(cycle.begin(), cycle.end()));
  rec.Commit();
}

EliminationResult Eliminate(ClusterGraph& graph, VarId x, const Scope& scope) {
  std::vector<ClusterId> merged;
  for (ClusterId c : scope) {
    RequireCluster(graph, c);
    if (graph.cluster(c).members.Contains(x)) merged.push_back(c);
  }
  if (merged.empty()) {
    throw PreconditionError("eliminate: variable " + std::to_string(x.value) +
                            " is absent from the scope");
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kEliminate,
                                      .clusters = {scope.begin(), scope.end()},
                                      .vars = {x}});
  const Scope merged_set(merged.begin(), merged.end());
  VarSet members;
  VarSet family_vars;
  std::map<ClusterId, VarSet> inside;   // to scope clusters, go to the buffer
  std::map<ClusterId, VarSet> outside;  // leave the scope, go to elim
  std::vector<VarId> families;
  for (ClusterId m : merged) {
    const Cluster& cl = graph.cluster(m);
    members |= cl.members;
    family_vars |= cl.family_vars;
    for (const auto& [n, sep] : graph.NeighborsOf(m)) {
      if (merged_set.contains(n)) continue;
      (scope.contains(n) ? inside : outside)[n] |= sep;
    }
    for (VarId v : graph.FamiliesHousedIn(m)) families.push_back(v);
  }
  for (ClusterId m : merged) graph.RemoveCluster(m);

  VarSet buffer_members = members;
  buffer_members.Erase(x);
  EliminationResult result;
  result.merged = merged;
  result.elim = graph.AddCluster(std::move(members), std::move(family_vars));
  for (VarId v : families) graph.SetFamilyHome(v, result.elim);
  for (const auto& [n, sep] : outside) graph.AddOrMergeEdge(result.elim, n, sep);
  if (!buffer_members.Empty()) {
    result.buffer = graph.AddCluster(buffer_members, VarSet{});
    graph.AddOrMergeEdge(result.elim, *result.buffer, buffer_members);
    for (const auto& [n, sep] : inside) graph.AddOrMergeEdge(*result.buffer, n, sep);
  } else if (!inside.empty()) {
    // Separators into the scope would have to be subsets of {x}, which no
    // non-merged scope cluster contains.
    throw InvariantError("eliminate: empty buffer with edges into the scope");
  }
  rec.Commit();
  return result;
}

bool IsSpurious(const ClusterGraph& graph, VarId x, ClusterId c) {
  const Cluster& cl = graph.cluster(c);
  if (!cl.members.Contains(x)) {
    throw PreconditionError("variable " + std::to_string(x.value) + " is not in " + Name(c));
  }
  if (cl.family_vars.Contains(x)) return false;
  int carried = 0;
  for (const auto& [n, sep] : graph.NeighborsOf(c)) {
    if (sep.Contains(x) && ++carried > 1) return false;
  }
  return true;
}

int DropSpurious(ClusterGraph& graph, const std::optional<Scope>& seeds) {
  TraceEvent event{.kind = TraceKind::kDropSpurious};
  if (seeds) {
    event.clusters.assign(seeds->begin(), seeds->end());
  } else {
    event.value = 1;
  }
  TraceRecorder rec(graph, std::move(event));
  Scope work = seeds ? *seeds : AllClusters(graph);
  int removed = 0;
  while (!work.empty()) {
    ClusterId c = *work.begin();
    work.erase(work.begin());
    if (!graph.HasCluster(c)) continue;
    const Cluster& cl = graph.cluster(c);
    VarSet candidates = cl.members - cl.family_vars;
    for (VarId x : candidates) {
      std::optional<ClusterId> carrier;
      int carried = 0;
      for (const auto& [n, sep] : graph.NeighborsOf(c)) {
        if (sep.Contains(x)) {
          ++carried;
          carrier = n;
        }
      }
      if (carried > 1) continue;
      graph.RemoveMember(c, x);
      ++removed;
      if (carrier) {
        VarSet sep = graph.Separator(c, *carrier);
        sep.Erase(x);
        graph.SetSeparator(c, *carrier, std::move(sep));
        work.insert(*carrier);
      }
    }
    if (graph.cluster(c).members.Empty()) graph.RemoveCluster(c);
  }
  rec.Commit();
  return removed;
}

void AddFillArc(ClusterGraph& graph, VarId x, VarId y, ClusterId host, ClusterId partner) {
  const BeliefNetwork& net = graph.network();
  if (!net.Contains(x) || !net.Contains(y)) {
    throw PreconditionError("add_fill_arc: unknown variable");
  }
  RequireCluster(graph, host);
  RequireCluster(graph, partner);
  const VarSet& hm = graph.cluster(host).members;
  if (hm.Contains(x) == hm.Contains(y)) {
    throw PreconditionError("add_fill_arc: host must contain exactly one of the variables");
  }
  VarId missing = hm.Contains(x) ? y : x;
  if (partner == host || !graph.cluster(partner).members.Contains(missing)) {
    throw PreconditionError("add_fill_arc: partner must be another cluster holding the "
                            "missing variable");
  }
  TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kAddFillArc,
                                      .clusters = {host, partner},
                                      .vars = {x, y}});
  graph.AddMember(host, missing);
  graph.AddOrMergeEdge(host, partner, VarSet{missing});
  rec.Commit();
}

void AddFillArc(ClusterGraph& graph, VarId x, VarId y) {
  const BeliefNetwork& net = graph.network();
  if (!net.Contains(x) || !net.Contains(y)) {
    throw PreconditionError("add_fill_arc: unknown variable");
  }
  using Key = std::tuple<int, Cost, ClusterId>;
  std::optional<Key> best;
  ClusterId best_partner{};
  for (const auto& [id, cl] : graph.clusters()) {
    bool hx = cl.members.Contains(x);
    bool hy = cl.members.Contains(y);
    if (hx && hy) {
      TraceRecorder rec(graph, TraceEvent{.kind = TraceKind::kAddFillArc, .vars = {x, y}});
      rec.Commit();
      return;
    }
    if (hx == hy) continue;
    VarId missing = hx ? y : x;
    std::optional<ClusterId> adjacent;
    for (const auto& [n, _] : graph.NeighborsOf(id)) {
      if (graph.cluster(n).members.Contains(missing)) {
        adjacent = n;
        break;
      }
    }
    VarSet grown = cl.members;
    grown.Insert(missing);
    Key key{adjacent ? 0 : 1, ClusterCost(grown, net), id};
    if (best && !(key < *best)) continue;
    best = key;
    if (adjacent) {
      best_partner = *adjacent;
    } else {
      for (const auto& [other, ocl] : graph.clusters()) {
        if (other != id && ocl.members.Contains(missing)) {
          best_partner = other;
          break;
        }
      }
    }
  }
  if (!best) throw PreconditionError("add_fill_arc: neither variable is in any cluster");
  AddFillArc(graph, x, y, std::get<2>(*best), best_partner);
}

bool IsSimpleCycle(const ClusterGraph& graph, std::span<const ClusterId> cycle) {
  if (cycle.size() < 3) return false;
  Scope seen;
  for (size_t i = 0; i < cycle.size(); ++i) {
    if (!graph.HasCluster(cycle[i]) || !seen.insert(cycle[i]).second) return false;
    if (!graph.HasEdge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

}  // namespace jtree
