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

#include "jtree/applicable.h"

#include <deque>
#include <map>

#include "jtree/incremental.h"
#include "jtree/transforms.h"

namespace jtree {
namespace {

// One cycle per non-tree edge of a breadth-first spanning forest.
std::vector<std::vector<ClusterId>> FundamentalCycles(const ClusterGraph& graph) {
  std::map<ClusterId, ClusterId> parent;
  std::map<ClusterId, size_t> depth;
  for (const auto& [root, _] : graph.clusters()) {
    if (parent.contains(root)) continue;
    parent[root] = root;
    depth[root] = 0;
    std::deque<ClusterId> queue{root};
    while (!queue.empty()) {
      ClusterId c = queue.front();
      queue.pop_front();
      for (const auto& [n, __] : graph.NeighborsOf(c)) {
        if (parent.contains(n)) continue;
        parent[n] = c;
        depth[n] = depth[c] + 1;
        queue.push_back(n);
      }
    }
  }
  std::vector<std::vector<ClusterId>> cycles;
  for (const ClusterEdge& e : graph.Edges()) {
    if (parent[e.a] == e.b || parent[e.b] == e.a) continue;
    std::vector<ClusterId> left{e.a}, right{e.b};
    ClusterId x = e.a, y = e.b;
    while (x != y) {
      if (depth[x] >= depth[y]) {
        x = parent[x];
        left.push_back(x);
      } else {
        y = parent[y];
        right.push_back(y);
      }
    }
    right.pop_back();  // the meeting point is already in `left`
    left.insert(left.end(), right.rbegin(), right.rend());
    if (IsSimpleCycle(graph, left)) cycles.push_back(std::move(left));
  }
  return cycles;
}

}  // namespace

std::vector<TraceEvent> ApplicableTransformations(const ClusterGraph& graph,
                                                  const ApplicableOptions& options) {
  std::vector<TraceEvent> out;
  std::map<TraceKind, size_t> per_kind;
  auto add = [&](TraceEvent e) {
    size_t& n = per_kind[e.kind];
    if (options.max_per_kind != 0 && n >= options.max_per_kind) return;
    ++n;
    out.push_back(std::move(e));
  };

  const std::vector<ClusterEdge> edges = graph.Edges();
  const std::vector<ClusterId> ids = graph.ClusterIds();
  for (const ClusterEdge& e : edges) {
    add({.kind = TraceKind::kMerge, .clusters = {e.a, e.b}});
  }
  for (const ClusterEdge& e : edges) {
    for (ClusterId d : ids) {
      if (d == e.a || d == e.b) continue;
      bool ad = graph.HasEdge(e.a, d), bd = graph.HasEdge(e.b, d);
      TraceKind kind = !ad && !bd ? TraceKind::kStealAnEdge
                       : ad && bd ? TraceKind::kDrop
                                  : TraceKind::kSlide;
      add({.kind = kind, .clusters = {e.a, e.b, d}});
    }
  }
  for (const auto& cycle : FundamentalCycles(graph)) {
    for (size_t v = 0; v < cycle.size(); ++v) {
      add({.kind = TraceKind::kCollapse, .clusters = cycle, .value = static_cast<int64_t>(v)});
    }
  }
  for (const ComponentView& block : BiconnectedComponents(graph)) {
    if (block.trivially_resolved) continue;
    VarSet vars;
    for (ClusterId c : block.clusters) vars |= graph.cluster(c).members;
    for (VarId x : vars) {
      add({.kind = TraceKind::kEliminate, .clusters = block.clusters, .vars = {x}});
    }
  }
  bool any_spurious = false;
  for (const auto& [id, cl] : graph.clusters()) {
    for (VarId v : cl.members) {
      if (IsSpurious(graph, v, id)) {
        any_spurious = true;
        break;
      }
    }
    if (any_spurious) break;
  }
  if (any_spurious) add({.kind = TraceKind::kDropSpurious, .value = 1});

  if (options.predict) {
    const Cost before = GraphCost(graph);
    for (TraceEvent& e : out) {
      ClusterGraph scratch = graph.ScratchCopy();
      ApplyTraceEvent(scratch, e);
      e.cost_delta = CostDelta(before, GraphCost(scratch));
    }
  }
  return out;
}

}  // namespace jtree
