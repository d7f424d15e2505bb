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

#include "jtree/session.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <memory>
#include <thread>

#include "jtree/applicable.h"
#include "jtree/io.h"
#include "jtree/verify.h"

namespace jtree {

using nlohmann::json;

namespace {

// A client mistake that is not one of the library's own errors.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

std::string ErrorType(const std::exception& e) {
  if (dynamic_cast<const ProtocolError*>(&e)) return "protocol";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "protocol";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const NetworkError*>(&e)) return "network";
  if (dynamic_cast<const InvariantError*>(&e)) return "invariant";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

const json& Field(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end()) throw ProtocolError(std::string("payload.") + key + ": missing");
  return *it;
}

std::string StringField(const json& payload, const char* key) {
  const json& v = Field(payload, key);
  if (!v.is_string()) throw ProtocolError(std::string("payload.") + key + ": expected a string");
  return v.get<std::string>();
}

uint64_t UnsignedField(const json& payload, const char* key, uint64_t fallback) {
  auto it = payload.find(key);
  if (it == payload.end()) return fallback;
  if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<int64_t>() < 0)) {
    throw ProtocolError(std::string("payload.") + key + ": expected a non-negative integer");
  }
  return it->get<uint64_t>();
}

VarId VariableField(const BeliefNetwork& net, const json& payload, const char* key) {
  const json& v = Field(payload, key);
  if (v.is_string()) {
    auto id = net.Find(v.get<std::string>());
    if (!id) throw PreconditionError("unknown variable '" + v.get<std::string>() + "'");
    return *id;
  }
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0)) {
    throw ProtocolError(std::string("payload.") + key + ": expected a name or id");
  }
  VarId id{static_cast<uint32_t>(v.get<uint64_t>())};
  if (!net.Contains(id)) throw PreconditionError("unknown variable id " + v.dump());
  return id;
}

EditPolicy PolicyFrom(const json& payload) {
  EditPolicy p;
  if (auto it = payload.find("policy"); it != payload.end()) {
    if (!it->is_object()) throw ProtocolError("payload.policy: expected an object");
    if (it->contains("retract")) p.retract = (*it)["retract"].get<bool>();
    if (it->contains("shape")) {
      std::string shape = (*it)["shape"].get<std::string>();
      if (shape == "chain") {
        p.shape = RetractionShape::kChain;
      } else if (shape == "star") {
        p.shape = RetractionShape::kStar;
      } else {
        throw ProtocolError("payload.policy.shape: expected \"chain\" or \"star\"");
      }
    }
  }
  return p;
}

json Events(const ClusterGraph& graph, size_t from) {
  json out = json::array();
  for (size_t i = from; i < graph.trace().size(); ++i) out.push_back(TraceEventToJson(graph.trace()[i]));
  return out;
}

json ReportJson(const CheckReport& r) {
  return {{"property", r.property}, {"pass", r.pass}, {"witnesses", r.witnesses}};
}

json ClusterJson(const ClusterGraph& g, ClusterId id) {
  const Cluster& c = g.cluster(id);
  json members = json::array(), family = json::array();
  for (VarId v : c.members) members.push_back(g.network().Name(v));
  for (VarId v : c.family_vars) family.push_back(g.network().Name(v));
  return {{"id", id.value}, {"members", members}, {"family", family}};
}

json SeparatorJson(const ClusterGraph& g, const VarSet& sep) {
  json out = json::array();
  for (VarId v : sep) out.push_back(g.network().Name(v));
  return out;
}

}  // namespace

json GraphDelta(const ClusterGraph& before, const ClusterGraph& after) {
  json removed = json::array(), clusters = json::array();
  for (const auto& [id, c] : before.clusters()) {
    if (!after.HasCluster(id)) removed.push_back(id.value);
  }
  for (const auto& [id, c] : after.clusters()) {
    if (!before.HasCluster(id) || !(before.cluster(id) == c)) clusters.push_back(ClusterJson(after, id));
  }
  std::map<std::pair<ClusterId, ClusterId>, VarSet> old_edges, new_edges;
  for (const ClusterEdge& e : before.Edges()) old_edges[{e.a, e.b}] = e.separator;
  for (const ClusterEdge& e : after.Edges()) new_edges[{e.a, e.b}] = e.separator;
  json removed_edges = json::array(), edges = json::array();
  for (const auto& [ab, sep] : old_edges) {
    if (!new_edges.contains(ab)) removed_edges.push_back({ab.first.value, ab.second.value});
  }
  for (const auto& [ab, sep] : new_edges) {
    auto it = old_edges.find(ab);
    if (it == old_edges.end() || !(it->second == sep)) {
      edges.push_back({{"a", ab.first.value}, {"b", ab.second.value}, {"separator", SeparatorJson(after, sep)}});
    }
  }
  return {{"removed_clusters", removed},
          {"clusters", clusters},
          {"removed_edges", removed_edges},
          {"edges", edges}};
}

const ClusterGraph& Session::graph() const {
  if (!edit_) throw ProtocolError("no graph loaded");
  return edit_->graph();
}

EditSession& Session::Require() {
  if (!edit_) throw ProtocolError("no graph loaded; send load first");
  return *edit_;
}

std::string Session::Handle(std::string_view line) {
  json request;
  try {
    request = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    return json{{"id", nullptr},
                {"ok", false},
                {"error", {{"type", "format"}, {"message", std::string("malformed request: ") + e.what()}}}}
        .dump();
  }
  return HandleJson(request).dump();
}

json Session::HandleJson(const json& request) {
  json id = request.is_object() && request.contains("id") ? request["id"] : json(nullptr);
  try {
    if (!request.is_object()) throw ProtocolError("request must be an object");
    auto verb = request.find("verb");
    if (verb == request.end() || !verb->is_string()) throw ProtocolError("request.verb: missing");
    json payload = request.contains("payload") ? request["payload"] : json::object();
    if (!payload.is_object()) throw ProtocolError("request.payload: expected an object");
    json result = Dispatch(verb->get<std::string>(), payload);
    return {{"id", id}, {"ok", true}, {"result", std::move(result)}};
  } catch (const std::exception& e) {
    return {{"id", id}, {"ok", false}, {"error", {{"type", ErrorType(e)}, {"message", e.what()}}}};
  }
}

json Session::Dispatch(const std::string& verb, const json& payload) {
  if (verb == "hello") {
    if (payload.contains("version") && payload["version"] != kProtocolVersion) {
      throw ProtocolError("protocol version mismatch: server speaks " +
                          std::to_string(kProtocolVersion) + ", client sent " +
                          payload["version"].dump());
    }
    return {{"protocol", "jtree-session"},
            {"version", kProtocolVersion},
            {"presets", PresetNames()},
            {"verbs", {"hello", "load", "state", "applicable", "apply", "run-preset", "edit",
                       "restore", "undo", "cost", "check", "trace"}}};
  }
  if (verb == "load") return Load(payload);
  if (verb == "state") {
    Require();
    return State();
  }
  if (verb == "applicable") {
    ApplicableOptions options;
    if (payload.contains("predict")) options.predict = payload["predict"].get<bool>();
    options.max_per_kind = UnsignedField(payload, "max_per_kind", 0);
    json list = json::array();
    for (const TraceEvent& e : ApplicableTransformations(Require().graph(), options)) {
      list.push_back(TraceEventToJson(e));
    }
    return {{"transformations", std::move(list)}, {"cost", GraphCost(graph())}};
  }
  if (verb == "apply") return Apply(payload);
  if (verb == "run-preset") return RunPresetVerb(payload);
  if (verb == "edit") return EditVerb(payload);
  if (verb == "restore") {
    EditSession next = Require();
    RestoreReport r = next.Restore();
    json out = Commit(std::move(next));
    out["invocations"] = r.audits.size();
    return out;
  }
  if (verb == "undo") return Undo(payload);
  if (verb == "cost") {
    Require();
    return CostSummary();
  }
  if (verb == "check") {
    Require();
    return Check();
  }
  if (verb == "trace") {
    return {{"events", Events(Require().graph(), UnsignedField(payload, "from", 0))}};
  }
  throw ProtocolError("unknown verb '" + verb + "'");
}

json Session::Load(const json& payload) {
  const AlgorithmPreset preset =
      PresetByName(payload.contains("preset") ? payload["preset"].get<std::string>() : "E");
  const uint64_t seed = UnsignedField(payload, "seed", 0);
  const EditPolicy policy = PolicyFrom(payload);
  ClusterGraph graph;
  if (payload.contains("graph")) {
    graph = GraphFromJson(payload["graph"]);
  } else if (payload.contains("network")) {
    graph = BuildInitialClusterGraph(
        std::make_shared<BeliefNetwork>(NetworkFromJson(payload["network"], "payload.network")));
  } else {
    graph = ClusterGraph(std::make_shared<BeliefNetwork>());
  }
  edit_.emplace(std::move(graph), preset, seed, policy);
  snapshots_.clear();
  snapshots_.emplace_back(edit_->graph().trace().size(), edit_->graph());
  marks_.clear();
  return State();
}

json Session::Commit(EditSession next) {
  const ClusterGraph before = edit_->graph();
  const size_t from = before.trace().size();
  edit_.emplace(std::move(next));
  const ClusterGraph& after = edit_->graph();
  if (after.trace().size() > from) {
    marks_.push_back(from);
    Snapshot();
  }
  const Cost cost = GraphCost(after);
  return {{"events", Events(after, from)},
          {"delta", GraphDelta(before, after)},
          {"cost", cost},
          {"cost_delta", CostDelta(GraphCost(before), cost)}};
}

void Session::Snapshot() {
  const size_t n = edit_->graph().trace().size();
  if (n >= snapshots_.back().first + kSnapshotInterval) snapshots_.emplace_back(n, edit_->graph());
}

json Session::Apply(const json& payload) {
  EditSession next = Require();
  const json& doc = payload.contains("event") ? payload["event"] : payload;
  TraceEvent ev = TraceEventFromJson(doc, &next.graph().network(), "payload");
  ClusterGraph g = next.graph();
  ApplyTraceEvent(g, ev);
  // A fresh EditSession counts every cluster as dirty; restore after a
  // manual step then re-examines everything still cyclic.
  const uint64_t seed = DeriveSeed(0, g.trace().size());
  return Commit(EditSession(std::move(g), next.preset(), seed, next.policy()));
}

json Session::RunPresetVerb(const json& payload) {
  EditSession& cur = Require();
  const AlgorithmPreset preset = payload.contains("preset")
                                     ? PresetByName(payload["preset"].get<std::string>())
                                     : cur.preset();
  const uint64_t seed = UnsignedField(payload, "seed", 0);
  ClusterGraph g = cur.graph();
  RunReport r = RunPreset(g, preset, seed);
  json out = Commit(EditSession(std::move(g), cur.preset(), seed, cur.policy()));
  out["report"] = {{"preset", r.preset},
                   {"seed", r.seed},
                   {"initial_cost", r.initial_cost},
                   {"invocations", r.audits.size()},
                   {"components", r.components}};
  return out;
}

json Session::EditVerb(const json& payload) {
  EditSession next = Require();
  const BeliefNetwork& net = next.network();
  const std::string op = StringField(payload, "op");
  if (op == "add_variable") {
    next.AddVariable(StringField(payload, "name"),
                     static_cast<uint32_t>(UnsignedField(payload, "cardinality", 2)));
  } else if (op == "add_arc") {
    next.AddArc(VariableField(net, payload, "parent"), VariableField(net, payload, "child"));
  } else if (op == "delete_arc") {
    next.DeleteArc(VariableField(net, payload, "parent"), VariableField(net, payload, "child"));
  } else if (op == "delete_variable") {
    next.DeleteVariable(VariableField(net, payload, "name"));
  } else if (op == "retract") {
    ClusterId c{static_cast<uint32_t>(UnsignedField(payload, "cluster", UINT32_MAX))};
    next.RetractVariable(c, VariableField(net, payload, "variable"));
  } else {
    throw ProtocolError("payload.op: unknown edit '" + op + "'");
  }
  return Commit(std::move(next));
}

json Session::Undo(const json& payload) {
  EditSession& cur = Require();
  const size_t length = cur.graph().trace().size();
  size_t target;
  if (payload.contains("events")) {
    const uint64_t n = UnsignedField(payload, "events", 0);
    if (n > length - snapshots_.front().first) throw PreconditionError("undo: not that many events");
    target = length - n;
  } else {
    if (marks_.empty()) throw PreconditionError("undo: nothing to undo");
    target = marks_.back();
  }
  while (!marks_.empty() && marks_.back() >= target) marks_.pop_back();
  while (snapshots_.size() > 1 && snapshots_.back().first > target) snapshots_.pop_back();
  ClusterGraph g = snapshots_.back().second;
  const std::vector<TraceEvent> trace = cur.graph().trace();
  for (size_t i = snapshots_.back().first; i < target; ++i) ApplyTraceEvent(g, trace[i]);
  const ClusterGraph before = cur.graph();
  AlgorithmPreset preset = cur.preset();
  const EditPolicy policy = cur.policy();
  edit_.emplace(std::move(g), std::move(preset), DeriveSeed(0, target), policy);
  const Cost cost = GraphCost(edit_->graph());
  return {{"undone", length - target},
          {"delta", GraphDelta(before, edit_->graph())},
          {"cost", cost},
          {"cost_delta", CostDelta(GraphCost(before), cost)}};
}

json Session::State() const {
  const ClusterGraph& g = edit_->graph();
  json dirty = json::array();
  for (ClusterId c : edit_->dirty()) dirty.push_back(c.value);
  return {{"graph", GraphToJson(g)},
          {"cost", GraphCost(g)},
          {"trace_length", g.trace().size()},
          {"singly_connected", IsSinglyConnected(g)},
          {"preset", edit_->preset().name},
          {"dirty", dirty}};
}

json Session::CostSummary() const {
  const ClusterGraph& g = edit_->graph();
  return {{"cost", GraphCost(g)},
          {"edges_minus_clusters", EdgesMinusClusters(g)},
          {"components", ConnectedComponentCount(g)},
          {"clusters", g.num_clusters()},
          {"edges", g.num_edges()}};
}

json Session::Check() const {
  const ClusterGraph& g = edit_->graph();
  json out = {{"family", ReportJson(CheckFamilyProperty(g))},
              {"path", ReportJson(CheckPathProperty(g))},
              {"junction_tree", ReportJson(CheckJunctionTree(g))}};
  if (IsSinglyConnected(g)) out["chordal"] = ReportJson(CheckChordalEmbedding(g));
  return out;
}

void ServeStream(std::istream& in, std::ostream& out) {
  Session session;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << session.Handle(line) << "\n" << std::flush;
  }
}

namespace {

bool WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<size_t>(n));
  }
  return true;
}

void ServeConnection(int fd, const std::atomic<bool>* stop) {
  Session session;
  std::string buffer;
  char chunk[4096];
  while (!(stop && stop->load())) {
    pollfd p{fd, POLLIN, 0};
    int ready = ::poll(&p, 1, 200);
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) break;
    if (ready == 0) continue;
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t nl;
    bool ok = true;
    while (ok && (nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ok = WriteAll(fd, session.Handle(line) + "\n");
    }
    if (!ok) break;
  }
  ::close(fd);
}

}  // namespace

void ServeTcp(uint16_t port, const std::function<void(uint16_t)>& on_ready,
              const std::atomic<bool>* stop) {
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listener, 16) < 0) {
    std::string msg = std::strerror(errno);
    ::close(listener);
    throw Error("cannot listen on port " + std::to_string(port) + ": " + msg);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_ready) on_ready(ntohs(addr.sin_port));

  std::vector<std::thread> workers;
  while (!(stop && stop->load())) {
    pollfd p{listener, POLLIN, 0};
    int ready = ::poll(&p, 1, 200);
    if (ready <= 0) continue;
    int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back(ServeConnection, fd, stop);
  }
  ::close(listener);
  for (std::thread& t : workers) t.join();
}

}  // namespace jtree
