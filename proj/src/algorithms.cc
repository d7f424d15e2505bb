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

#include "jtree/algorithms.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <tuple>

#include "jtree/verify.h"

namespace jtree {
namespace {

std::string Name(ClusterId c) { return "cluster " + std::to_string(c.value); }

// Clusters of `scope` that are still alive or were created at or after
// `watermark`.
Scope LiveScope(const ClusterGraph& graph, const Scope& scope, ClusterId watermark) {
  Scope out;
  for (const auto& [id, _] : graph.clusters()) {
    if (scope.contains(id) || !(id < watermark)) out.insert(out.end(), id);
  }
  return out;
}

// Edges with exactly one endpoint in `inner` and the other in `outer`.
int64_t CrossEdges(const ClusterGraph& graph, const Scope& inner, const Scope& outer) {
  int64_t count = 0;
  for (ClusterId c : inner) {
    for (const auto& [n, _] : graph.NeighborsOf(c)) {
      if (outer.contains(n)) ++count;
    }
  }
  return count;
}

template <typename T>
const T& PickTie(const std::vector<T>& tied, Rng& rng) {
  return tied.size() == 1 ? tied.front() : tied[rng.Index(tied.size())];
}

}  // namespace

bool SubInvocationAudit::Holds() const {
  return k_S >= 0 && delta_R <= 0 && delta_X <= 0 && metric_drop >= 1 && measured_drop >= 1;
}

std::vector<SubInvocationAudit> TransformToTree(ClusterGraph& graph, const Subroutine& sub,
                                                const ComponentFilter& filter) {
  std::vector<SubInvocationAudit> audits;
  // Every invocation lowers #edges - #clusters by at least one.
  const int64_t budget = static_cast<int64_t>(graph.num_edges() + graph.num_clusters()) + 1;
  while (true) {
    std::optional<ComponentView> pick;
    for (ComponentView& block : BiconnectedComponents(graph)) {
      if (block.trivially_resolved || block.edges.size() < block.clusters.size()) continue;
      if (filter && !filter(block)) continue;
      if (!pick || block.clusters.size() < pick->clusters.size()) pick = std::move(block);
    }
    if (!pick) break;
    if (static_cast<int64_t>(audits.size()) >= budget) {
      throw InvariantError("transform_to_tree: no progress after " +
                           std::to_string(audits.size()) + " invocations");
    }

    const Scope s(pick->clusters.begin(), pick->clusters.end());
    Scope t;
    for (const auto& [id, _] : graph.clusters()) {
      if (!s.contains(id)) t.insert(t.end(), id);
    }
    SubInvocationAudit audit;
    audit.scope = pick->clusters;
    audit.n_S = static_cast<int64_t>(s.size());
    audit.n_T = static_cast<int64_t>(t.size());
    audit.e_S = static_cast<int64_t>(pick->edges.size());
    audit.e_X = static_cast<int64_t>(InducedEdgeCount(graph, s)) - audit.e_S;
    audit.e_R = CrossEdges(graph, s, t);
    audit.e_T = static_cast<int64_t>(InducedEdgeCount(graph, t));
    audit.k_S = audit.e_S - audit.n_S;
    audit.components_before = ConnectedComponentCount(graph);
    const int64_t before = EdgesMinusClusters(graph);
    const ClusterId watermark = graph.next_cluster_id();

    sub(graph, s);

    const Scope s_after = LiveScope(graph, s, watermark);
    Scope t_after;
    for (const auto& [id, _] : graph.clusters()) {
      if (!s_after.contains(id)) t_after.insert(t_after.end(), id);
    }
    if (!IsSinglyConnected(graph, &s_after)) {
      std::string ids;
      for (ClusterId c : s_after) ids += " " + std::to_string(c.value);
      throw InvariantError("transform_to_tree: subroutine left a cycle among clusters" + ids);
    }
    const int64_t n_s_after = static_cast<int64_t>(s_after.size());
    const int64_t within = static_cast<int64_t>(InducedEdgeCount(graph, s_after));
    audit.delta_S = n_s_after - audit.n_S;
    audit.delta_R = CrossEdges(graph, s_after, t_after) - audit.e_R;
    audit.delta_X = within - (n_s_after - 1) - audit.e_X;
    audit.metric_drop = 1 + audit.k_S - audit.delta_R - audit.delta_X;
    audit.measured_drop = before - EdgesMinusClusters(graph);
    audit.components_after = ConnectedComponentCount(graph);
    audits.push_back(audit);
    if (!audit.Holds()) {
      throw InvariantError("transform_to_tree: audit violated (metric_drop=" +
                           std::to_string(audit.metric_drop) +
                           ", measured_drop=" + std::to_string(audit.measured_drop) + ")");
    }
  }
  return audits;
}

VarId MinWeightSelect(const ClusterGraph& graph, const Scope& scope,
                      std::span<const VarId> candidates, Rng& rng) {
  if (candidates.empty()) throw PreconditionError("min_weight_select: no candidates");
  if (candidates.size() == 1) return candidates.front();
  std::vector<VarId> tied;
  Cost best = kCostSaturated;
  for (VarId x : candidates) {
    VarSet merged;
    for (ClusterId c : scope) {
      const VarSet& m = graph.cluster(c).members;
      if (m.Contains(x)) merged |= m;
    }
    merged.Insert(x);
    Cost cost = ClusterCost(merged, graph.network());
    if (tied.empty() || cost < best) {
      best = cost;
      tied.assign(1, x);
    } else if (cost == best) {
      tied.push_back(x);
    }
  }
  return PickTie(tied, rng);
}

EliminationSelector MinWeightSelector(Rng& rng) {
  return [&rng](const ClusterGraph& g, const Scope& s, std::span<const VarId> cands) {
    return MinWeightSelect(g, s, cands, rng);
  };
}

EliminationSelector FixedOrderSelector(std::vector<VarId> order) {
  return [order = std::move(order)](const ClusterGraph&, const Scope&,
                                    std::span<const VarId> cands) {
    VarSet present = VarSet::FromRange(cands);
    for (VarId v : order) {
      if (present.Contains(v)) return v;
    }
    throw PreconditionError("fixed order exhausted before the scope was");
  };
}

int NodeElimination(ClusterGraph& graph, const Scope& scope, const EliminationSelector& select,
                    NodeEliminationOptions options) {
  Scope s;
  for (ClusterId c : scope) {
    if (graph.HasCluster(c)) s.insert(c);
  }
  int eliminated = 0;
  while (!s.empty()) {
    if (options.stop_when_singly_connected && IsSinglyConnected(graph, &s)) break;
    VarSet present;
    for (ClusterId c : s) present |= graph.cluster(c).members;
    if (present.Empty()) break;
    std::vector<VarId> candidates = present.ToVector();
    VarId x = select(graph, s, candidates);
    EliminationResult r = Eliminate(graph, x, s);
    for (ClusterId m : r.merged) s.erase(m);
    if (r.buffer) s.insert(*r.buffer);
    ++eliminated;
  }
  return eliminated;
}

std::string_view CyclePolicyName(CyclePolicy p) {
  switch (p) {
    case CyclePolicy::kShortest: return "shortest";
    case CyclePolicy::kCheapest: return "cheapest";
    case CyclePolicy::kWeighted: return "weighted";
  }
  return "?";
}

std::vector<ClusterId> FindCycle(const ClusterGraph& graph, const Scope& scope,
                                 const CycleSearch& search, Rng& rng) {
  std::vector<ClusterId> on_cycle;
  {
    Scope seen;
    for (const ComponentView& block : BiconnectedComponents(graph, &scope)) {
      if (block.trivially_resolved) continue;
      for (ClusterId c : block.clusters) {
        if (seen.insert(c).second) on_cycle.push_back(c);
      }
    }
    std::sort(on_cycle.begin(), on_cycle.end());
  }
  if (on_cycle.empty()) throw PreconditionError("find_cycle: scope has no cycle");
  ClusterId start;
  if (search.start) {
    start = *search.start;
    if (!std::binary_search(on_cycle.begin(), on_cycle.end(), start)) {
      throw PreconditionError("find_cycle: no cycle through " + Name(start));
    }
  } else {
    start = on_cycle[rng.Index(on_cycle.size())];
  }

  // Breadth-first search labelling each cluster with its parent and with the
  // start's neighbor it was reached through.
  std::map<ClusterId, ClusterId> parent, branch;
  std::deque<ClusterId> queue{start};
  parent[start] = start;
  branch[start] = start;
  std::vector<ClusterId> visit_order;
  while (!queue.empty()) {
    ClusterId c = queue.front();
    queue.pop_front();
    visit_order.push_back(c);
    for (const auto& [n, _] : graph.NeighborsOf(c)) {
      if (!scope.contains(n) || parent.contains(n)) continue;
      parent[n] = c;
      branch[n] = c == start ? n : branch[c];
      queue.push_back(n);
    }
  }
  auto path_to_start = [&](ClusterId c) {
    std::vector<ClusterId> path;
    for (; c != start; c = parent[c]) path.push_back(c);
    return path;  // c ... child-of-start
  };

  struct Candidate {
    std::vector<ClusterId> cycle;
    double score;
  };
  std::vector<Candidate> candidates;
  for (ClusterId a : visit_order) {
    for (const auto& [b, _] : graph.NeighborsOf(a)) {
      if (!(a < b) || !parent.contains(b) || a == start || b == start) continue;
      if (parent[a] == b || parent[b] == a || branch[a] == branch[b]) continue;
      std::vector<ClusterId> left = path_to_start(a);
      std::vector<ClusterId> right = path_to_start(b);
      std::vector<ClusterId> cycle{start};
      cycle.insert(cycle.end(), left.rbegin(), left.rend());
      cycle.insert(cycle.end(), right.begin(), right.end());
      Cost cost_sum = 0;
      for (ClusterId c : cycle) cost_sum = SaturatingAdd(cost_sum, ClusterCost(graph, c));
      double length = static_cast<double>(cycle.size());
      double score = 0;
      switch (search.policy) {
        case CyclePolicy::kShortest: score = length; break;
        case CyclePolicy::kCheapest: score = static_cast<double>(cost_sum); break;
        case CyclePolicy::kWeighted:
          score = length + search.weight * std::log2(static_cast<double>(cost_sum));
          break;
      }
      candidates.push_back({std::move(cycle), score});
    }
  }
  if (candidates.empty()) throw InvariantError("find_cycle: search found no cycle");
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) best = std::min(best, c.score);
  std::vector<const Candidate*> tied;
  for (const Candidate& c : candidates) {
    if (c.score == best) tied.push_back(&c);
  }
  return PickTie(tied, rng)->cycle;
}

std::string_view DivisionPolicyName(DivisionPolicy p) {
  switch (p) {
    case DivisionPolicy::kMinClusterCostIncrease: return "min-cluster-cost";
    case DivisionPolicy::kMinTotalCostIncrease: return "min-total-cost";
    case DivisionPolicy::kMinDegreeIncrease: return "min-degree";
    case DivisionPolicy::kClusterCostThenDegree: return "cluster-cost-then-degree";
    case DivisionPolicy::kTotalCostThenDegree: return "total-cost-then-degree";
  }
  return "?";
}

namespace {

void ApplyReroute(ClusterGraph& graph, TraceKind kind, ClusterId p, ClusterId q, ClusterId via) {
  switch (kind) {
    case TraceKind::kStealAnEdge: StealAnEdge(graph, p, q, via); break;
    case TraceKind::kSlide: Slide(graph, p, q, via); break;
    case TraceKind::kDrop: Drop(graph, p, q, via); break;
    default: throw PreconditionError("not a rerouting transformation");
  }
}

}  // namespace

std::vector<Division> EnumerateDivisions(const ClusterGraph& graph,
                                         std::span<const ClusterId> cycle,
                                         DivisionPolicy policy) {
  if (!IsSimpleCycle(graph, cycle)) throw PreconditionError("division: not a simple cycle");
  const bool needs_total = policy == DivisionPolicy::kMinTotalCostIncrease ||
                           policy == DivisionPolicy::kTotalCostThenDegree;
  const Cost total_before = needs_total ? GraphCost(graph) : 0;
  const size_t k = cycle.size();
  std::vector<Division> out;
  for (size_t i = 0; i < k; ++i) {
    ClusterId p = cycle[i];
    ClusterId q = cycle[(i + 1) % k];
    const VarSet& sep = graph.Separator(p, q);
    for (size_t j = 0; j < k; ++j) {
      if (j == i || j == (i + 1) % k) continue;
      ClusterId d = cycle[j];
      bool pd = graph.HasEdge(p, d);
      bool qd = graph.HasEdge(q, d);
      Division div{.edge = i, .via = j, .p = p, .q = q, .through = d};
      div.kind = !pd && !qd ? TraceKind::kStealAnEdge
                 : pd && qd ? TraceKind::kDrop
                            : TraceKind::kSlide;
      const VarSet& dm = graph.cluster(d).members;
      const int64_t cluster_inc = CostDelta(ClusterCost(dm, graph.network()),
                                            ClusterCost(dm | sep, graph.network()));
      const int64_t degree_inc = (pd ? 0 : 1) + (qd ? 0 : 1);
      int64_t total_inc = 0;
      if (needs_total) {
        ClusterGraph scratch = graph.ScratchCopy();
        ApplyReroute(scratch, div.kind, p, q, d);
        total_inc = CostDelta(total_before, GraphCost(scratch));
      }
      switch (policy) {
        case DivisionPolicy::kMinClusterCostIncrease: div.primary_score = cluster_inc; break;
        case DivisionPolicy::kMinTotalCostIncrease: div.primary_score = total_inc; break;
        case DivisionPolicy::kMinDegreeIncrease: div.primary_score = degree_inc; break;
        case DivisionPolicy::kClusterCostThenDegree:
          div.primary_score = cluster_inc;
          div.secondary_score = degree_inc;
          break;
        case DivisionPolicy::kTotalCostThenDegree:
          div.primary_score = total_inc;
          div.secondary_score = degree_inc;
          break;
      }
      out.push_back(div);
    }
  }
  return out;
}

Division ChooseDivision(const ClusterGraph& graph, std::span<const ClusterId> cycle,
                        DivisionPolicy policy, Rng& rng) {
  std::vector<Division> all = EnumerateDivisions(graph, cycle, policy);
  auto key = [](const Division& d) { return std::pair(d.primary_score, d.secondary_score); };
  auto best = key(*std::min_element(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    return key(a) < key(b);
  }));
  std::vector<Division> tied;
  for (const Division& d : all) {
    if (key(d) == best) tied.push_back(d);
  }
  return PickTie(tied, rng);
}

std::vector<std::vector<ClusterId>> ApplyDivision(ClusterGraph& graph,
                                                  std::span<const ClusterId> cycle,
                                                  const Division& division) {
  const size_t k = cycle.size();
  ApplyReroute(graph, division.kind, division.p, division.q, division.through);
  // (q .. via) closed by the new (via, q) edge, and (via .. p) closed by
  // (p, via).
  std::vector<std::vector<ClusterId>> pieces(2);
  for (size_t i = (division.edge + 1) % k;; i = (i + 1) % k) {
    pieces[0].push_back(cycle[i]);
    if (i == division.via) break;
  }
  for (size_t i = division.via;; i = (i + 1) % k) {
    pieces[1].push_back(cycle[i]);
    if (i == division.edge) break;
  }
  std::vector<std::vector<ClusterId>> out;
  for (auto& piece : pieces) {
    if (piece.size() >= 3 && IsSimpleCycle(graph, piece)) out.push_back(std::move(piece));
  }
  return out;
}

int FreeVariableElimination(ClusterGraph& graph, Scope& scope,
                            std::map<ClusterId, ClusterId>* replaced) {
  int eliminated = 0;
  while (true) {
    std::map<VarId, int> occurrences;
    for (ClusterId c : scope) {
      for (VarId v : graph.cluster(c).members) ++occurrences[v];
    }
    std::optional<VarId> free;
    for (const auto& [v, n] : occurrences) {
      if (n == 1) {
        free = v;
        break;
      }
    }
    if (!free) break;
    EliminationResult r = Eliminate(graph, *free, scope);
    for (ClusterId m : r.merged) scope.erase(m);
    if (r.buffer) {
      scope.insert(*r.buffer);
      if (replaced) {
        for (ClusterId m : r.merged) (*replaced)[m] = *r.buffer;
      }
    }
    ++eliminated;
  }
  return eliminated;
}

int MergeRedundantClusters(ClusterGraph& graph, MergeMode mode) {
  if (mode == MergeMode::kPost && !IsSinglyConnected(graph)) {
    throw PreconditionError("merge_redundant_clusters(post): graph is not singly connected");
  }
  int merged = 0;
  while (true) {
    bool found = false;
    for (const ClusterEdge& e : graph.Edges()) {
      const Cluster& a = graph.cluster(e.a);
      const Cluster& b = graph.cluster(e.b);
      ClusterId small, big;
      if (a.members.IsSubsetOf(b.members)) {
        small = e.a;
        big = e.b;
      } else if (b.members.IsSubsetOf(a.members)) {
        small = e.b;
        big = e.a;
      } else {
        continue;
      }
      if (mode == MergeMode::kPre &&
          !graph.cluster(small).family_vars.IsSubsetOf(graph.cluster(big).family_vars)) {
        continue;
      }
      // Plain absorption: variables it leaves spurious stay as carriers, so
      // that the result matches classical elimination clique for clique.
      Merge(graph, small, big, /*drop_spurious=*/false);
      ++merged;
      found = true;
      break;
    }
    if (!found) break;
  }
  return merged;
}

namespace {

// A slide of (p, q) onto `via` can only lower the cost if some variable of
// the moved separator ends up carried by at most one edge at p.
bool CanShrink(const ClusterGraph& graph, ClusterId p, ClusterId q, ClusterId via) {
  const Cluster& cp = graph.cluster(p);
  const VarSet& sep = graph.Separator(p, q);
  const VarSet& to_via = graph.Separator(p, via);
  for (VarId v : sep - cp.family_vars) {
    int carried = 0;
    for (const auto& [n, s] : graph.NeighborsOf(p)) carried += s.Contains(v) ? 1 : 0;
    int after = carried - 1 + (to_via.Contains(v) ? 0 : 1);
    if (after <= 1) return true;
  }
  return false;
}

}  // namespace

Cost SlideBeneficiallyWithin(ClusterGraph& graph, const Scope& scope) {
  Cost saved = 0;
  while (true) {
    const Cost before = GraphCost(graph);
    std::optional<std::tuple<int64_t, ClusterId, ClusterId, ClusterId>> best;
    for (ClusterId p : scope) {
      if (!graph.HasCluster(p)) continue;
      for (const auto& [q, _] : graph.NeighborsOf(p)) {
        if (!scope.contains(q)) continue;
        for (const auto& [d, __] : graph.NeighborsOf(p)) {
          if (d == q || !scope.contains(d) || graph.HasEdge(q, d)) continue;
          if (!CanShrink(graph, p, q, d)) continue;
          ClusterGraph scratch = graph.ScratchCopy();
          Slide(scratch, p, q, d);
          int64_t delta = CostDelta(before, GraphCost(scratch));
          if (delta < 0 && (!best || delta < std::get<0>(*best))) best = {delta, p, q, d};
        }
      }
    }
    if (!best) break;
    auto [delta, p, q, d] = *best;
    Slide(graph, p, q, d);
    saved += static_cast<Cost>(-delta);
  }
  return saved;
}

Cost SlideBeneficially(ClusterGraph& graph) {
  if (!IsSinglyConnected(graph)) {
    throw PreconditionError("slide_beneficially: graph is not singly connected");
  }
  return SlideBeneficiallyWithin(graph, AllClusters(graph));
}

AlgorithmPreset PresetByName(std::string_view name) {
  AlgorithmPreset p;
  p.name = std::string(name);
  if (name == "E" || name == "IE") {
    p.strategy = Strategy::kNodeElimination;
    p.post_merge = name == "E";
    p.final_merge = name == "IE";
    return p;
  }
  if (name == "D" || name == "D2" || name == "ID") {
    p.strategy = Strategy::kDivideLoops;
    p.cycle_search.policy = name == "D2" ? CyclePolicy::kShortest : CyclePolicy::kWeighted;
    p.division_policy = DivisionPolicy::kMinClusterCostIncrease;
    p.per_loop_free_variables = true;
    p.per_loop_slide = name == "ID";
    p.post_slide = name != "ID";
    p.post_merge = name != "ID";
    return p;
  }
  throw PreconditionError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> PresetNames() { return {"E", "D", "D2", "ID", "IE"}; }

void DivideALoop(ClusterGraph& graph, std::vector<ClusterId> cycle,
                 const AlgorithmPreset& preset, Rng& rng) {
  const ClusterId watermark = graph.next_cluster_id();
  // Free-variable elimination replaces clusters that pending pieces still
  // name; follow the replacements and, when a piece no longer closes, look
  // for the cycle it became among the replacements and the new clusters.
  std::map<ClusterId, ClusterId> replaced;
  CycleSearch search = preset.cycle_search;
  search.start.reset();
  std::vector<std::vector<ClusterId>> pending{std::move(cycle)};
  while (!pending.empty()) {
    std::vector<ClusterId> cyc = std::move(pending.back());
    pending.pop_back();
    for (ClusterId& c : cyc) {
      for (auto it = replaced.find(c); it != replaced.end(); it = replaced.find(c)) {
        c = it->second;
      }
    }
    if (!IsSimpleCycle(graph, cyc)) {
      Scope rest = LiveScope(graph, Scope(cyc.begin(), cyc.end()), watermark);
      if (!IsSinglyConnected(graph, &rest)) pending.push_back(FindCycle(graph, rest, search, rng));
      continue;
    }
    if (preset.per_loop_free_variables) {
      Scope cycle_scope(cyc.begin(), cyc.end());
      if (FreeVariableElimination(graph, cycle_scope, &replaced) > 0) {
        pending.push_back(std::move(cyc));
        continue;
      }
    }
    Division div = ChooseDivision(graph, cyc, preset.division_policy, rng);
    auto pieces = ApplyDivision(graph, cyc, div);
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) pending.push_back(std::move(*it));
  }
}

void DivideLoops(ClusterGraph& graph, const Scope& scope, const AlgorithmPreset& preset,
                 Rng& rng) {
  const ClusterId watermark = graph.next_cluster_id();
  CycleSearch search = preset.cycle_search;
  search.start.reset();
  const int64_t budget = static_cast<int64_t>(graph.num_edges() + graph.num_clusters()) + 1;
  for (int64_t round = 0;; ++round) {
    Scope current = LiveScope(graph, scope, watermark);
    if (IsSinglyConnected(graph, &current)) return;
    if (round > budget) throw InvariantError("divide_loops: no progress");
    const ClusterId loop_mark = graph.next_cluster_id();
    std::vector<ClusterId> cycle = FindCycle(graph, current, search, rng);
    const Scope cycle_set(cycle.begin(), cycle.end());
    DivideALoop(graph, std::move(cycle), preset, rng);
    if (preset.per_loop_slide) {
      SlideBeneficiallyWithin(graph, LiveScope(graph, cycle_set, loop_mark));
    }
  }
}

Subroutine MakeSubroutine(const AlgorithmPreset& preset, Rng& rng) {
  if (preset.strategy == Strategy::kNodeElimination) {
    return [&rng](ClusterGraph& g, const Scope& s) { NodeElimination(g, s, MinWeightSelector(rng)); };
  }
  return [preset, &rng](ClusterGraph& g, const Scope& s) { DivideLoops(g, s, preset, rng); };
}

void PostProcess(ClusterGraph& graph, const AlgorithmPreset& preset) {
  if (preset.post_slide) SlideBeneficially(graph);
  if (preset.post_merge) MergeRedundantClusters(graph, MergeMode::kPost);
}

RunReport RunPreset(ClusterGraph& graph, const AlgorithmPreset& preset, uint64_t seed) {
  RunReport report;
  report.preset = preset.name;
  report.seed = seed;
  report.initial_cost = GraphCost(graph);
  Rng rng(seed);
  report.audits = TransformToTree(graph, MakeSubroutine(preset, rng));
  PostProcess(graph, preset);
  if (preset.final_merge) MergeRedundantClusters(graph, MergeMode::kPost);
  CheckReport check = CheckJunctionTree(graph);
  if (!check.pass) {
    std::string msg = "preset " + preset.name + " produced an invalid junction tree:";
    for (const std::string& w : check.witnesses) msg += "\n  " + w;
    throw InvariantError(msg);
  }
  report.cost = GraphCost(graph);
  report.trace_length = graph.trace().size();
  report.components = ConnectedComponentCount(graph);
  return report;
}

}  // namespace jtree
