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

#ifndef JTREE_INCREMENTAL_H_
#define JTREE_INCREMENTAL_H_

#include <string>
#include <vector>

#include "jtree/algorithms.h"
#include "jtree/cluster_graph.h"

namespace jtree {

// How retraction reconnects the X-carrying neighbors of a cluster.
enum class RetractionShape { kChain, kStar };

struct EditPolicy {
  // Retract a still-carried variable after delete_arc; off leaves it as a
  // carrier.
  bool retract = true;
  RetractionShape shape = RetractionShape::kChain;

  int64_t Encode() const;
  static EditPolicy Decode(int64_t value);
};

// Network edits applied to a graph. Each keeps the family and path
// properties (the graph may become multiply connected) and records one
// TraceEvent; argument layouts are given per edit.

// New variable in its own singleton cluster.
// Trace: label = name, value = cardinality, vars = {v}, clusters = {c}.
ClusterId AddVariable(ClusterGraph& graph, const std::string& name, uint32_t cardinality);

// Adds x to the cluster P housing family(y) (and to that family), then joins
// P to the cluster housing family(x) by an edge carrying x.
// Trace: vars = {x, y}, clusters = {P, Q}.
void AddArc(ClusterGraph& graph, VarId x, VarId y);

// Removes x from family(y). If x is then spurious in P it is dropped,
// otherwise it is retracted from P (per policy).
// Trace: vars = {x, y}, value = policy.
void DeleteArc(ClusterGraph& graph, VarId x, VarId y, EditPolicy policy = {});

// Takes x out of p, joining p's x-carrying neighbors by new edges carrying x,
// and recurses into neighbors where x is only carried.
// Trace: clusters = {p}, vars = {x}, value = shape.
void RetractVariable(ClusterGraph& graph, ClusterId p, VarId x,
                     RetractionShape shape = RetractionShape::kChain);

// Deletes every arc of v, then v itself from all clusters and separators,
// dropping clusters and edges left empty.
// Trace: vars = {v}, label = name, value = policy.
void DeleteVariable(ClusterGraph& graph, VarId v, EditPolicy policy = {});

// Re-applies one recorded event (transformation or edit). Replaying a trace
// onto the graph it started from reproduces the final graph exactly.
void ApplyTraceEvent(ClusterGraph& graph, const TraceEvent& event);
void ReplayTrace(ClusterGraph& graph, const std::vector<TraceEvent>& events);

struct RestoreReport {
  std::vector<SubInvocationAudit> audits;
  Cost cost = 0;
  bool was_singly_connected = true;
};

// A maintained junction tree under network edits. Edits mark the clusters
// they touch; Restore re-trees only the components containing such clusters.
class EditSession {
 public:
  // Starts from an empty network.
  EditSession(AlgorithmPreset preset, uint64_t seed, EditPolicy policy = {});
  // Starts from an existing graph; every cluster counts as dirty.
  EditSession(ClusterGraph graph, AlgorithmPreset preset, uint64_t seed, EditPolicy policy = {});

  const ClusterGraph& graph() const { return graph_; }
  ClusterGraph& mutable_graph() { return graph_; }
  const BeliefNetwork& network() const { return graph_.network(); }
  const Scope& dirty() const { return dirty_; }
  const AlgorithmPreset& preset() const { return preset_; }
  const EditPolicy& policy() const { return policy_; }

  ClusterId AddVariable(const std::string& name, uint32_t cardinality);
  void AddArc(VarId x, VarId y);
  void AddArc(std::string_view x, std::string_view y);
  void DeleteArc(VarId x, VarId y);
  void RetractVariable(ClusterId p, VarId x);
  void DeleteVariable(VarId v);

  // Transforms the dirty multiply-connected components back into trees with
  // the preset, then runs the preset's whole-graph postprocessing. Throws
  // InvariantError if the result is not a junction tree.
  RestoreReport Restore();
  // Final redundant-cluster merge for presets that defer it (IE).
  void Finish();

 private:
  template <typename Fn>
  void Edit(Fn&& fn);

  ClusterGraph graph_;
  AlgorithmPreset preset_;
  Rng rng_;
  EditPolicy policy_;
  Scope dirty_;
};

}  // namespace jtree

#endif  // JTREE_INCREMENTAL_H_
