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

#ifndef JTREE_TESTS_FIXTURES_H_
#define JTREE_TESTS_FIXTURES_H_

#include <initializer_list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "jtree/cluster_graph.h"
#include "jtree/network.h"

namespace jtree::testing {

using ArcList = std::vector<std::pair<std::string, std::string>>;

// Binary variables named by the arcs (plus `extra`), added in first-seen order.
std::shared_ptr<BeliefNetwork> MakeNetwork(const ArcList& arcs,
                                           const std::vector<std::string>& extra = {});

std::shared_ptr<BeliefNetwork> Chain3();
std::shared_ptr<BeliefNetwork> Poly4();
std::shared_ptr<BeliefNetwork> Diamond();

VarSet Vars(const BeliefNetwork& net, std::initializer_list<const char*> names);
// The unique cluster whose members are exactly `names`; fails the test
// otherwise.
ClusterId ClusterWith(const ClusterGraph& graph, std::initializer_list<const char*> names);
struct HandCluster {
  std::vector<std::string> members;
  std::vector<std::string> family;  // marked family_vars
};
struct HandEdge {
  size_t a, b;
  std::vector<std::string> separator;
};
// A hand-built graph over `net`. Each variable's family is homed in the first
// cluster whose marking covers it. Returned ids follow `clusters` order.
ClusterGraph HandGraph(std::shared_ptr<const BeliefNetwork> net,
                       const std::vector<HandCluster>& clusters,
                       const std::vector<HandEdge>& edges, std::vector<ClusterId>* ids);

// Cluster members rendered as "{A,B}", sorted.
std::vector<std::string> ClusterStrings(const ClusterGraph& graph);

// While alive, every traced operation is followed by the family, path and
// separator checks.
class ParanoidChecks {
 public:
  ParanoidChecks();
  ~ParanoidChecks();
  ParanoidChecks(const ParanoidChecks&) = delete;
  ParanoidChecks& operator=(const ParanoidChecks&) = delete;
};

}  // namespace jtree::testing

#endif  // JTREE_TESTS_FIXTURES_H_
