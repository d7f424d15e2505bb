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

#ifndef JTREE_BENCH_H_
#define JTREE_BENCH_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jtree/algorithms.h"
#include "jtree/incremental.h"
#include "jtree/network.h"

namespace jtree {

struct NetworkSpec {
  int variables = 0;
  int arcs = 0;
  uint32_t cardinality_low = 2;
  uint32_t cardinality_high = 2;
  uint64_t seed = 0;
};

// Throws PreconditionError unless the spec describes a feasible connected
// network: n - 1 <= arcs <= n(n-1)/2 and 2 <= low <= high.
void ValidateSpec(const NetworkSpec& spec);

// A connected DAG with exactly the requested counts. A random topological
// order is drawn; a random spanning tree oriented along it keeps the network
// connected and the remaining arcs are uniform among the other forward
// pairs. Variables are named V0, V1, ...
BeliefNetwork GenerateRandomNetwork(const NetworkSpec& spec);

// A random tree skeleton with random arc directions.
BeliefNetwork GenerateRandomPolytree(int variables, uint32_t cardinality_low,
                                     uint32_t cardinality_high, uint64_t seed);

struct RunRecord {
  std::string algorithm;
  std::string network;
  int run = 0;
  uint64_t seed = 0;
  Cost cost = 0;
  size_t trace_length = 0;
};

struct ExperimentResult {
  std::string algorithm;
  std::string network;
  std::vector<Cost> costs;  // by run index
  Cost min = 0;
  Cost median = 0;  // lower middle for even counts
  double mean = 0;
  Cost max = 0;
};

ExperimentResult Summarize(std::string algorithm, std::string network, std::vector<Cost> costs);

struct NamedNetwork {
  std::string name;
  std::shared_ptr<const BeliefNetwork> network;
};

// Presets flagged incremental (IE, ID) build each network arc by arc;
// the others run on the whole initial cluster graph.
bool IsIncrementalPreset(std::string_view name);

struct IncrementalOutcome {
  Cost cost = 0;
  int restores = 0;
  std::vector<std::pair<std::string, std::string>> arc_order;
  ClusterGraph graph;
};

// Called after every edit ("edit") and after every restore ("restore").
using IncrementalObserver = std::function<void(const EditSession&, std::string_view stage)>;

// Builds `network` one arc at a time, each arc touching the part already
// built, restoring whenever the graph becomes multiply connected.
IncrementalOutcome RunIncrementalExperiment(const BeliefNetwork& network,
                                            const AlgorithmPreset& preset, uint64_t seed,
                                            const IncrementalObserver& observer = {});

// Every (network, preset) pair `runs` times (at least 20) with seeds derived
// from `seed` and the run index. Any invalid output throws InvariantError.
std::vector<ExperimentResult> RunExperiment(const std::vector<NamedNetwork>& networks,
                                            const std::vector<std::string>& presets, int runs,
                                            uint64_t seed,
                                            std::vector<RunRecord>* records = nullptr);

inline constexpr int kMinimumRuns = 20;

}  // namespace jtree

#endif  // JTREE_BENCH_H_
