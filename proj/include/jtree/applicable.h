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

#ifndef JTREE_APPLICABLE_H_
#define JTREE_APPLICABLE_H_

#include <optional>
#include <vector>

#include "jtree/cluster_graph.h"

namespace jtree {

struct ApplicableOptions {
  // Trial-apply each candidate on a scratch copy to fill in cost_delta.
  bool predict = true;
  // Upper bound per transformation kind; 0 means unbounded.
  size_t max_per_kind = 0;
};

// Every legal transformation of the current graph, shaped as the TraceEvent
// applying it would record: adjacent merges, steals, slides, drops,
// collapses of short cycles, eliminations within each multiply-connected
// biconnected component, and a global spurious-variable sweep when one would
// remove something. Deterministic order.
std::vector<TraceEvent> ApplicableTransformations(const ClusterGraph& graph,
                                                  const ApplicableOptions& options = {});

}  // namespace jtree

#endif  // JTREE_APPLICABLE_H_
