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

#include "jtree/verify.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

// The checkers and oracles here deliberately use their own plain
// representations (index maps, dense adjacency) instead of the helpers the
// transformation engine uses, so that a bug there cannot hide itself.

namespace jtree {
namespace {

std::string C(ClusterId c) { return "c" + std::to_string(c.value); }

std::string V(const BeliefNetwork& net, VarId v) {
  return net.Contains(v) ? net.Name(v) : "#" + std::to_string(v.value);
}

std::string SetText(const BeliefNetwork& net, const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (VarId v : s) {
    if (!first) out += ",";
    first = false;
    out += V(net, v);
  }
  return out + "}";
}

// Clusters that contain x grouped into components connected by edges that
// carry x.
std::vector<std::vector<ClusterId>> CarrierComponents(const ClusterGraph& graph, VarId x) {
  std::vector<ClusterId> holders;
  for (const auto& [id, cl] : graph.clusters()) {
    if (cl.members.Contains(x)) holders.push_back(id);
  }
  std::map<ClusterId, int> label;
  for (ClusterId h : holders) label[h] = -1;
  std::vector<std::vector<ClusterId>> comps;
  for (ClusterId start : holders) {
    if (label[start] >= 0) continue;
    int id = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<ClusterId> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      ClusterId c = stack.back();
      stack.pop_back();
      comps[id].push_back(c);
      for (const auto& [n, sep] : graph.NeighborsOf(c)) {
        if (!sep.Contains(x)) continue;
        auto it = label.find(n);
        if (it == label.end() || it->second >= 0) continue;
        it->second = id;
        stack.push_back(n);
      }
    }
    std::sort(comps[id].begin(), comps[id].end());
  }
  return comps;
}

VarSet AllMentioned(const ClusterGraph& graph) {
  VarSet vars;
  for (const auto& [id, cl] : graph.clusters()) vars |= cl.members;
  return vars;
}

bool IsForest(const ClusterGraph& graph, std::vector<std::string>* witnesses) {
  std::map<ClusterId, ClusterId> parent;
  for (const auto& [id, _] : graph.clusters()) parent[id] = id;
  std::function<ClusterId(ClusterId)> find = [&](ClusterId c) {
    return parent[c] == c ? c : parent[c] = find(parent[c]);
  };
  bool ok = true;
  for (const ClusterEdge& e : graph.Edges()) {
    ClusterId ra = find(e.a), rb = find(e.b);
    if (ra == rb) {
      ok = false;
      if (witnesses) witnesses->push_back("edge " + C(e.a) + "-" + C(e.b) + " closes a cycle");
    } else {
      parent[ra] = rb;
    }
  }
  return ok;
}

Cost Potential(const std::vector<int>& clique, const std::vector<uint32_t>& card) {
  Cost c = 1;
  for (int v : clique) c = SaturatingMul(c, card[v]);
  return c;
}

}  // namespace

CheckReport CheckFamilyProperty(const ClusterGraph& graph) {
  CheckReport report{.property = "family"};
  const BeliefNetwork& net = graph.network();
  for (const auto& [id, cl] : graph.clusters()) {
    if (!cl.family_vars.IsSubsetOf(cl.members)) {
      report.Fail(C(id) + ": family markings " + SetText(net, cl.family_vars - cl.members) +
                  " are not members");
    }
  }
  for (const ClusterEdge& e : graph.Edges()) {
    const VarSet both = graph.cluster(e.a).members & graph.cluster(e.b).members;
    if (e.separator.Empty()) report.Fail("edge " + C(e.a) + "-" + C(e.b) + ": empty separator");
    if (!e.separator.IsSubsetOf(both)) {
      report.Fail("edge " + C(e.a) + "-" + C(e.b) + ": separator carries " +
                  SetText(net, e.separator - both) + " outside the endpoint intersection");
    }
  }
  for (VarId v : net.Variables()) {
    auto home = graph.FamilyHome(v);
    if (!home || !graph.HasCluster(*home)) {
      report.Fail("(" + V(net, v) + ", none): family not assigned");
      continue;
    }
    const Cluster& cl = graph.cluster(*home);
    VarSet family = net.Family(v);
    if (!family.IsSubsetOf(cl.members)) {
      report.Fail("(" + V(net, v) + ", " + C(*home) + "): missing " +
                  SetText(net, family - cl.members));
    } else if (!family.IsSubsetOf(cl.family_vars)) {
      report.Fail("(" + V(net, v) + ", " + C(*home) + "): unmarked " +
                  SetText(net, family - cl.family_vars));
    }
  }
  for (const auto& [v, home] : graph.family_homes()) {
    if (!net.Contains(v)) report.Fail("family of deleted variable #" + std::to_string(v.value));
  }
  return report;
}

CheckReport CheckPathProperty(const ClusterGraph& graph) {
  CheckReport report{.property = "path"};
  const BeliefNetwork& net = graph.network();
  for (VarId x : AllMentioned(graph)) {
    auto comps = CarrierComponents(graph, x);
    if (comps.size() <= 1) continue;
    std::string w = V(net, x) + ":";
    for (const auto& comp : comps) {
      w += " {";
      for (size_t i = 0; i < comp.size(); ++i) w += (i ? "," : "") + C(comp[i]);
      w += "}";
    }
    report.Fail(w);
  }
  return report;
}

CheckReport CheckPathPropertyPairwise(const ClusterGraph& graph) {
  CheckReport report{.property = "path (pairwise)"};
  const BeliefNetwork& net = graph.network();
  // Depth-first search for an explicit path, then validation of that path
  // against the literal definition.
  std::function<bool(ClusterId, ClusterId, VarId, std::set<ClusterId>&,
                     std::vector<ClusterId>&)>
      search = [&](ClusterId at, ClusterId goal, VarId x, std::set<ClusterId>& seen,
                   std::vector<ClusterId>& path) {
        path.push_back(at);
        if (at == goal) return true;
        seen.insert(at);
        for (const auto& [n, sep] : graph.NeighborsOf(at)) {
          if (seen.contains(n) || !sep.Contains(x)) continue;
          if (!graph.cluster(n).members.Contains(x)) continue;
          if (search(n, goal, x, seen, path)) return true;
        }
        path.pop_back();
        return false;
      };
  for (VarId x : AllMentioned(graph)) {
    std::vector<ClusterId> holders;
    for (const auto& [id, cl] : graph.clusters()) {
      if (cl.members.Contains(x)) holders.push_back(id);
    }
    for (size_t i = 0; i < holders.size(); ++i) {
      for (size_t j = i + 1; j < holders.size(); ++j) {
        std::set<ClusterId> seen;
        std::vector<ClusterId> path;
        bool found = search(holders[i], holders[j], x, seen, path);
        for (size_t k = 0; found && k + 1 < path.size(); ++k) {
          found = graph.cluster(path[k]).members.Contains(x) &&
                  graph.Separator(path[k], path[k + 1]).Contains(x);
        }
        if (!found) {
          report.Fail(V(net, x) + ": no carrying path " + C(holders[i]) + " .. " +
                      C(holders[j]));
        }
      }
    }
  }
  return report;
}

CheckReport CheckJunctionTree(const ClusterGraph& graph, bool normalize) {
  CheckReport report{.property = "junction_tree"};
  for (const CheckReport& sub : {CheckFamilyProperty(graph), CheckPathProperty(graph)}) {
    for (const std::string& w : sub.witnesses) report.Fail(sub.property + ": " + w);
  }
  std::vector<std::string> cycles;
  if (!IsForest(graph, &cycles)) {
    for (const std::string& w : cycles) report.Fail("singly-connected: " + w);
  }
  if (!normalize) {
    for (const ClusterEdge& e : graph.Edges()) {
      VarSet both = graph.cluster(e.a).members & graph.cluster(e.b).members;
      if (e.separator != both) {
        report.Fail("separator " + C(e.a) + "-" + C(e.b) + " is narrower than the intersection");
      }
    }
  }
  return report;
}

CheckReport CheckChordalEmbedding(const ClusterGraph& graph) {
  CheckReport report{.property = "chordal_embedding"};
  const BeliefNetwork& net = graph.network();
  if (!CheckJunctionTree(graph).pass) {
    report.Fail("precondition: graph is not a junction tree");
    return report;
  }
  for (const ClusterEdge& e : graph.Edges()) {
    const VarSet& a = graph.cluster(e.a).members;
    const VarSet& b = graph.cluster(e.b).members;
    if (a.IsSubsetOf(b) || b.IsSubsetOf(a)) {
      report.Fail("precondition: redundant clusters " + C(e.a) + ", " + C(e.b) +
                  " have not been merged");
      return report;
    }
  }

  std::vector<VarId> vars = net.Variables();
  const int n = static_cast<int>(vars.size());
  std::map<VarId, int> index;
  for (int i = 0; i < n; ++i) index[vars[i]] = i;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [id, cl] : graph.clusters()) {
    std::vector<int> m;
    for (VarId v : cl.members) m.push_back(index.at(v));
    for (int a : m) {
      for (int b : m) {
        if (a != b) adj[a][b] = 1;
      }
    }
  }

  // Moral graph containment.
  for (VarId v : vars) {
    std::vector<int> fam;
    for (VarId u : net.Family(v)) fam.push_back(index.at(u));
    for (int a : fam) {
      for (int b : fam) {
        if (a < b && !adj[a][b]) {
          report.Fail("moral edge " + net.Name(vars[a]) + "-" + net.Name(vars[b]) +
                      " is not covered");
        }
      }
    }
  }

  // Maximum cardinality search; visiting order reversed is a perfect
  // elimination order iff the graph is chordal.
  std::vector<int> weight(n, 0);
  std::vector<char> visited(n, 0);
  std::vector<int> visit_order;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!visited[v] && (pick < 0 || weight[v] > weight[pick])) pick = v;
    }
    visited[pick] = 1;
    visit_order.push_back(pick);
    for (int u = 0; u < n; ++u) {
      if (!visited[u] && adj[pick][u]) ++weight[u];
    }
  }
  std::vector<int> position(n);  // position in the elimination order
  for (int i = 0; i < n; ++i) position[visit_order[n - 1 - i]] = i;
  for (int v = 0; v < n; ++v) {
    std::vector<int> later;
    for (int u = 0; u < n; ++u) {
      if (adj[v][u] && position[u] > position[v]) later.push_back(u);
    }
    if (later.empty()) continue;
    int follower = *std::min_element(later.begin(), later.end(),
                                     [&](int a, int b) { return position[a] < position[b]; });
    for (int u : later) {
      if (u != follower && !adj[follower][u]) {
        report.Fail("not chordal: " + net.Name(vars[v]) + " has unjoined later neighbors " +
                    net.Name(vars[follower]) + ", " + net.Name(vars[u]));
      }
    }
  }

  // Maximality: nothing outside a cluster is adjacent to all of it.
  for (const auto& [id, cl] : graph.clusters()) {
    for (int u = 0; u < n; ++u) {
      if (cl.members.Contains(vars[u])) continue;
      bool all = true;
      for (VarId m : cl.members) all = all && adj[u][index.at(m)];
      if (all) {
        report.Fail(C(id) + " is not a maximal clique (extends by " + net.Name(vars[u]) + ")");
      }
    }
  }
  return report;
}

Cost ReferenceEliminationCost(const BeliefNetwork& network, std::span<const VarId> order) {
  std::vector<VarId> vars = network.Variables();
  const int n = static_cast<int>(vars.size());
  std::map<VarId, int> index;
  for (int i = 0; i < n; ++i) index[vars[i]] = i;
  if (static_cast<int>(order.size()) != n) {
    throw PreconditionError("elimination order is not a permutation of the variables");
  }
  std::vector<int> seq;
  std::vector<char> used(n, 0);
  for (VarId v : order) {
    auto it = index.find(v);
    if (it == index.end() || used[it->second]) {
      throw PreconditionError("elimination order is not a permutation of the variables");
    }
    used[it->second] = 1;
    seq.push_back(it->second);
  }

  std::vector<uint32_t> card(n);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    card[i] = network.Cardinality(vars[i]);
    // Moralize: connect each variable with its parents and the parents with
    // each other.
    std::vector<int> fam{i};
    for (VarId p : network.Parents(vars[i])) fam.push_back(index.at(p));
    for (int a : fam) {
      for (int b : fam) {
        if (a != b) adj[a][b] = 1;
      }
    }
  }

  std::vector<char> gone(n, 0);
  std::vector<std::vector<char>> cliques;
  Cost total = 0;
  for (int x : seq) {
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u) {
      if (!gone[u] && adj[x][u]) nbrs.push_back(u);
    }
    for (int a : nbrs) {
      for (int b : nbrs) {
        if (a != b) adj[a][b] = 1;
      }
    }
    gone[x] = 1;
    std::vector<char> clique(n, 0);
    std::vector<int> members = nbrs;
    members.push_back(x);
    for (int m : members) clique[m] = 1;
    bool subsumed = false;
    for (const auto& earlier : cliques) {
      bool inside = true;
      for (int m : members) inside = inside && earlier[m];
      if (inside) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) total = SaturatingAdd(total, Potential(members, card));
    cliques.push_back(std::move(clique));
  }
  return total;
}

namespace {

// Bitmask branch and bound over elimination orders. A clique can only be
// contained in a clique of a variable eliminated earlier, so the running sum
// never decreases along a prefix and can be pruned against the best order
// found so far.
class BruteForce {
 public:
  BruteForce(std::vector<uint32_t> adj, std::vector<uint32_t> card)
      : n_(static_cast<int>(adj.size())), card_(std::move(card)) {
    Search(std::move(adj), 0, 0);
  }
  Cost best() const { return best_; }

 private:
  Cost Potential(uint32_t mask) const {
    Cost c = 1;
    for (int v = 0; v < n_; ++v) {
      if (mask >> v & 1u) c = SaturatingMul(c, card_[v]);
    }
    return c;
  }

  void Search(const std::vector<uint32_t>& adj, uint32_t eliminated, Cost partial) {
    if (eliminated == (n_ == 32 ? ~0u : (1u << n_) - 1)) {
      best_ = std::min(best_, partial);
      return;
    }
    for (int x = 0; x < n_; ++x) {
      if (eliminated >> x & 1u) continue;
      uint32_t nbrs = adj[x] & ~eliminated;
      uint32_t clique = nbrs | (1u << x);
      bool subsumed = false;
      for (uint32_t earlier : cliques_) {
        if ((clique & ~earlier) == 0) {
          subsumed = true;
          break;
        }
      }
      Cost next = subsumed ? partial : SaturatingAdd(partial, Potential(clique));
      if (next >= best_) continue;
      std::vector<uint32_t> filled = adj;
      for (int u = 0; u < n_; ++u) {
        if (nbrs >> u & 1u) filled[u] |= nbrs & ~(1u << u);
      }
      cliques_.push_back(clique);
      Search(filled, eliminated | (1u << x), next);
      cliques_.pop_back();
    }
  }

  int n_;
  std::vector<uint32_t> card_;
  std::vector<uint32_t> cliques_;
  Cost best_ = kCostSaturated;
};

}  // namespace

Cost BruteForceOptimalCost(const BeliefNetwork& network) {
  std::vector<VarId> vars = network.Variables();
  if (vars.size() > kBruteForceMaxVariables) {
    throw PreconditionError("brute force is limited to " +
                            std::to_string(kBruteForceMaxVariables) + " variables");
  }
  if (vars.empty()) return 0;
  std::map<VarId, int> index;
  for (size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i);
  std::vector<uint32_t> adj(vars.size(), 0);
  std::vector<uint32_t> card(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) {
    card[i] = network.Cardinality(vars[i]);
    uint32_t fam = 1u << i;
    for (VarId p : network.Parents(vars[i])) fam |= 1u << index.at(p);
    for (size_t a = 0; a < vars.size(); ++a) {
      if (fam >> a & 1u) adj[a] |= fam & ~(1u << a);
    }
  }
  return BruteForce(std::move(adj), std::move(card)).best();
}

}  // namespace jtree
