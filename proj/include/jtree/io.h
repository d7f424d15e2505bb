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

#ifndef JTREE_IO_H_
#define JTREE_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "jtree/bench.h"
#include "jtree/cluster_graph.h"
#include "jtree/network.h"
#include "json.hpp"

namespace jtree {

// Malformed input file. `line`/`column` are 1-based and zero when unknown;
// `field` is a path such as "arcs[3][1]".
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::string field = "", size_t line = 0,
              size_t column = 0);
  const std::string& field() const { return field_; }
  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  std::string field_;
  size_t line_, column_;
};

inline constexpr int kFormatVersion = 1;

// Network file:
//   {"format": "jtree-network", "version": 1,
//    "variables": [{"id": "A", "cardinality": 2}, ...],
//    "arcs": [["A", "B"], ...]}
// Variables are written in id order, one per line; arcs sorted by
// (parent, child) id. An empty (or all-whitespace) document is the empty
// network. Variable ids are renumbered densely in file order on parse.
std::string SerializeNetwork(const BeliefNetwork& network);
BeliefNetwork ParseNetwork(std::string_view text);
nlohmann::json NetworkToJson(const BeliefNetwork& network);
// `path` prefixes field names in diagnostics.
BeliefNetwork NetworkFromJson(const nlohmann::json& doc, const std::string& path = "");

// Graph file: the network plus clusters (id, members, family marks, housed
// families) and edges (a, b, separator), variables by name. Cluster ids are
// kept. Properties are not checked on parse; run the verify checks.
std::string SerializeGraph(const ClusterGraph& graph);
ClusterGraph ParseGraph(std::string_view text);
nlohmann::json GraphToJson(const ClusterGraph& graph);
ClusterGraph GraphFromJson(const nlohmann::json& doc);

// Trace: one event per line,
//   {"kind": "slide", "clusters": [3, 1, 4], "vars": [], "label": "",
//    "value": 0, "cost_delta": -2}
// Variables are numeric ids. When parsing events, `vars` entries may also be
// names, resolved against `network` if one is given.
nlohmann::json TraceEventToJson(const TraceEvent& event);
TraceEvent TraceEventFromJson(const nlohmann::json& doc, const BeliefNetwork* network = nullptr,
                              const std::string& path = "");
std::string SerializeTrace(const std::vector<TraceEvent>& events);
std::vector<TraceEvent> ParseTrace(std::string_view text);

// Undirected graph description: one node per cluster labeled with its
// members sorted by name (family-marked ones starred), one labeled edge per
// separator. Byte-identical for equal graphs.
std::string ExportDot(const ClusterGraph& graph);

// Bench spec file:
//   {"format": "jtree-bench", "version": 1, "seed": 1, "runs": 20,
//    "presets": ["E", "D"],
//    "networks": [{"name": "rand-25-45", "variables": 25, "arcs": 45,
//                  "cardinality": [2, 4], "seed": 7},
//                 {"name": "mine", "file": "mine.json"}]}
// Relative file paths resolve against `base_dir`.
struct BenchSpec {
  uint64_t seed = 0;
  int runs = kMinimumRuns;
  std::vector<std::string> presets;
  std::vector<NamedNetwork> networks;
};
BenchSpec ParseBenchSpec(std::string_view text, const std::string& base_dir = ".");

// algorithm,network,run,cost rows, then a "# summary" block
// (algorithm,network,runs,min,median,mean,max) and "# observation:" lines.
std::string FormatBenchTable(const std::vector<RunRecord>& records,
                             const std::vector<ExperimentResult>& results);
// Reported, never asserted: incremental vs whole-network means and the
// spread (max - min) of each preset.
std::vector<std::string> BenchObservations(const std::vector<ExperimentResult>& results);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view text);

}  // namespace jtree

#endif  // JTREE_IO_H_
