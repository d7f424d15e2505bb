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

#include "fixtures.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "jtree/verify.h"

namespace jtree::testing {

std::shared_ptr<BeliefNetwork> MakeNetwork(const ArcList& arcs,
                                           const std::vector<std::string>& extra) {
  auto net = std::make_shared<BeliefNetwork>();
  auto ensure = [&](const std::string& name) {
    if (!net->Find(name)) net->AddVariable(name, 2);
  };
  for (const auto& [a, b] : arcs) {
    ensure(a);
    ensure(b);
  }
  for (const auto& name : extra) ensure(name);
  for (const auto& [a, b] : arcs) net->AddArc(a, b);
  return net;
}

std::shared_ptr<BeliefNetwork> Chain3() { return MakeNetwork({{"A", "B"}, {"B", "C"}}); }
std::shared_ptr<BeliefNetwork> Poly4() {
  return MakeNetwork({{"A", "C"}, {"B", "C"}, {"C", "D"}});
}
std::shared_ptr<BeliefNetwork> Diamond() {
  return MakeNetwork({{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}});
}

VarSet Vars(const BeliefNetwork& net, std::initializer_list<const char*> names) {
  VarSet out;
  for (const char* n : names) out.Insert(net.Require(n));
  return out;
}

ClusterGraph HandGraph(std::shared_ptr<const BeliefNetwork> net,
                       const std::vector<HandCluster>& clusters,
                       const std::vector<HandEdge>& edges, std::vector<ClusterId>* ids) {
  ClusterGraph g(net);
  ids->clear();
  auto names = [&](const std::vector<std::string>& list) {
    VarSet s;
    for (const auto& n : list) s.Insert(net->Require(n));
    return s;
  };
  for (const HandCluster& c : clusters) {
    ids->push_back(g.AddCluster(names(c.members), names(c.family)));
  }
  for (const HandEdge& e : edges) g.AddOrMergeEdge((*ids)[e.a], (*ids)[e.b], names(e.separator));
  for (VarId v : net->Variables()) {
    for (ClusterId c : *ids) {
      if (net->Family(v).IsSubsetOf(g.cluster(c).family_vars)) {
        g.SetFamilyHome(v, c);
        break;
      }
    }
  }
  return g;
}

ClusterId ClusterWith(const ClusterGraph& graph, std::initializer_list<const char*> names) {
  VarSet want = Vars(graph.network(), names);
  std::vector<ClusterId> hits;
  for (const auto& [id, c] : graph.clusters()) {
    if (c.members == want) hits.push_back(id);
  }
  EXPECT_EQ(hits.size(), 1u) << "clusters matching the requested member set";
  return hits.empty() ? ClusterId{~0u} : hits.front();
}

std::vector<std::string> ClusterStrings(const ClusterGraph& graph) {
  std::vector<std::string> out;
  for (const auto& [id, c] : graph.clusters()) {
    std::vector<std::string> names;
    for (VarId v : c.members) names.push_back(graph.network().Name(v));
    std::sort(names.begin(), names.end());
    std::string s = "{";
    for (size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
    out.push_back(s + "}");
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParanoidChecks::ParanoidChecks() {
  SetPostOperationHook([](const ClusterGraph& g, const TraceEvent& e) {
    for (const CheckReport& r : {CheckFamilyProperty(g), CheckPathProperty(g)}) {
      if (!r.pass) {
        ADD_FAILURE() << r.property << " broken after " << TraceKindName(e.kind) << ": "
                      << r.witnesses.front();
      }
    }
  });
}

ParanoidChecks::~ParanoidChecks() { SetPostOperationHook(nullptr); }

}  // namespace jtree::testing
