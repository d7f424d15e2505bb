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

#ifndef JTREE_SESSION_H_
#define JTREE_SESSION_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jtree/incremental.h"
#include "json.hpp"

namespace jtree {

inline constexpr int kProtocolVersion = 1;

// Newline-delimited request/response protocol over one EditSession.
//
// Request:  {"id": <any>, "verb": "<verb>", "payload": {...}}
// Response: {"id": <same>, "ok": true, "result": {...}}
//       or  {"id": <same>, "ok": false, "error": {"type": ..., "message": ...}}
//
// Verbs: hello, load, state, applicable, apply, run-preset, edit, restore,
// undo, cost, check, trace. Mutating verbs answer with the new trace events,
// the graph delta and the cost delta; a failed request leaves the state as
// it was.
class Session {
 public:
  Session() = default;

  // One request line in, one response line out (no newline).
  std::string Handle(std::string_view line);
  nlohmann::json HandleJson(const nlohmann::json& request);

  bool loaded() const { return edit_.has_value(); }
  const ClusterGraph& graph() const;

  // Undo keeps a full copy of the graph every this many trace events and
  // replays the rest.
  static constexpr size_t kSnapshotInterval = 64;

 private:
  nlohmann::json Dispatch(const std::string& verb, const nlohmann::json& payload);
  nlohmann::json Load(const nlohmann::json& payload);
  nlohmann::json Apply(const nlohmann::json& payload);
  nlohmann::json RunPresetVerb(const nlohmann::json& payload);
  nlohmann::json EditVerb(const nlohmann::json& payload);
  nlohmann::json Undo(const nlohmann::json& payload);
  nlohmann::json State() const;
  nlohmann::json Check() const;
  nlohmann::json CostSummary() const;

  EditSession& Require();
  // Installs `next` as the current state and answers with what changed.
  nlohmann::json Commit(EditSession next);
  void Snapshot();

  std::optional<EditSession> edit_;
  // (trace length, graph at that length); the first is the loaded graph.
  std::vector<std::pair<size_t, ClusterGraph>> snapshots_;
  // Trace length before each mutating request, for undo.
  std::vector<size_t> marks_;
};

// What changed between two graphs: removed cluster ids, added or changed
// clusters, removed edges, added or changed edges.
nlohmann::json GraphDelta(const ClusterGraph& before, const ClusterGraph& after);

// Serves one session on a stream pair until end of input.
void ServeStream(std::istream& in, std::ostream& out);

// Serves on 127.0.0.1:`port` (0 picks a free port), one session and thread
// per connection, until `stop` becomes true. `on_ready` receives the bound
// port once listening.
void ServeTcp(uint16_t port, const std::function<void(uint16_t)>& on_ready = {},
              const std::atomic<bool>* stop = nullptr);

}  // namespace jtree

#endif  // JTREE_SESSION_H_
