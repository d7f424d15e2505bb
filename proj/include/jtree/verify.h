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

#ifndef JTREE_VERIFY_H_
#define JTREE_VERIFY_H_

#include <span>
#include <string>
#include <vector>

#include "jtree/cluster_graph.h"

namespace jtree {

struct CheckReport {
  std::string property;
  bool pass = true;
  // Offending variables / clusters / edges, human readable. Non-empty
  // whenever pass is false.
  std::vector<std::string> witnesses;

  void Fail(std::string witness) {
    pass = false;
    witnesses.push_back(std::move(witness));
  }
};

// Every family of the network lies inside its assigned cluster and is marked
// there; family markings are members; separators are subsets of the endpoint
// intersection.
CheckReport CheckFamilyProperty(const ClusterGraph& graph);

// For every variable, the clusters containing it are connected through edges
// carrying it.
CheckReport CheckPathProperty(const ClusterGraph& graph);

// The pairwise formulation: for every two clusters sharing X there is a path
// whose clusters contain X and whose edges carry X. Slow; cross-check only.
CheckReport CheckPathPropertyPairwise(const ClusterGraph& graph);

// Family + path properties, every connected component a tree, and each
// separator equal to the intersection of its endpoints. With `normalize`,
// narrow separators are treated as widened to the intersection first.
CheckReport CheckJunctionTree(const ClusterGraph& graph, bool normalize = true);

// The variable co-occurrence graph of the clusters is chordal, contains the
// moral graph, and has each cluster as a maximal clique. Requires a junction
// tree with redundant clusters merged away.
CheckReport CheckChordalEmbedding(const ClusterGraph& graph);

// Textbook node elimination on the moral graph: collect {X} + neighbors for
// each X in `order`, discard cliques contained in an earlier one, and sum
// potentials. `order` must be a permutation of the network's variables.
Cost ReferenceEliminationCost(const BeliefNetwork& network, std::span<const VarId> order);

// Minimum ReferenceEliminationCost over all orders (branch and bound).
// At most kBruteForceMaxVariables variables.
inline constexpr size_t kBruteForceMaxVariables = 9;
Cost BruteForceOptimalCost(const BeliefNetwork& network);

}  // namespace jtree

#endif  // JTREE_VERIFY_H_
