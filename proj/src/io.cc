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

#include "jtree/io.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "jtree/algorithms.h"

namespace jtree {

using nlohmann::json;

namespace {

std::string At(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}
std::string At(const std::string& path, size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

[[noreturn]] void Fail(const std::string& field, const std::string& message) {
  throw FormatError(field.empty() ? message : field + ": " + message, field);
}

// json::parse with 1-based line/column on syntax errors.
json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    size_t line = 1, column = 1;
    const size_t end = std::min<size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] parse error at
    // line 1, column 2: " preamble.
    if (auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw FormatError("syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + what,
                      "", line, column);
  }
}

bool Blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

const json& Member(const json& obj, const std::string& path, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(At(path, key), "missing");
  return *it;
}

const json& ArrayMember(const json& obj, const std::string& path, std::string_view key) {
  const json& v = Member(obj, path, key);
  if (!v.is_array()) Fail(At(path, key), "expected an array");
  return v;
}

std::string String(const json& v, const std::string& field) {
  if (!v.is_string()) Fail(field, "expected a string");
  return v.get<std::string>();
}

uint64_t Unsigned(const json& v, const std::string& field) {
  // Documents built in memory hold signed integers; parsed ones unsigned.
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0)) {
    Fail(field, "expected a non-negative integer");
  }
  return v.get<uint64_t>();
}

void CheckHeader(const json& doc, const std::string& path, std::string_view format) {
  if (!doc.is_object()) Fail(path, "expected an object");
  if (String(Member(doc, path, "format"), At(path, "format")) != format) {
    Fail(At(path, "format"), "expected \"" + std::string(format) + "\"");
  }
  if (Unsigned(Member(doc, path, "version"), At(path, "version")) != kFormatVersion) {
    Fail(At(path, "version"), "unsupported version (this build reads " +
                                  std::to_string(kFormatVersion) + ")");
  }
}

std::vector<std::string> SortedNames(const BeliefNetwork& net, const VarSet& vars) {
  std::vector<std::string> out;
  for (VarId v : vars) out.push_back(net.Name(v));
  std::sort(out.begin(), out.end());
  return out;
}

VarSet NameSet(const BeliefNetwork& net, const json& list, const std::string& field) {
  if (!list.is_array()) Fail(field, "expected an array of variable names");
  VarSet out;
  for (size_t i = 0; i < list.size(); ++i) {
    std::string name = String(list[i], At(field, i));
    auto v = net.Find(name);
    if (!v) Fail(At(field, i), "unknown variable '" + name + "'");
    out.Insert(*v);
  }
  return out;
}

std::string FormatMean(double mean) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", mean);
  return buf;
}

}  // namespace

FormatError::FormatError(const std::string& message, std::string field, size_t line,
                         size_t column)
    : Error(message), field_(std::move(field)), line_(line), column_(column) {}

// ---- networks

json NetworkToJson(const BeliefNetwork& network) {
  json vars = json::array();
  for (VarId v : network.Variables()) {
    vars.push_back({{"id", network.Name(v)}, {"cardinality", network.Cardinality(v)}});
  }
  json arcs = json::array();
  for (const Arc& a : network.Arcs()) {
    arcs.push_back({network.Name(a.parent), network.Name(a.child)});
  }
  return {{"format", "jtree-network"},
          {"version", kFormatVersion},
          {"variables", std::move(vars)},
          {"arcs", std::move(arcs)}};
}

std::string SerializeNetwork(const BeliefNetwork& network) {
  json doc = NetworkToJson(network);
  std::string out = "{\n  \"format\": \"jtree-network\",\n  \"version\": " +
                    std::to_string(kFormatVersion) + ",\n  \"variables\": [";
  const json& vars = doc["variables"];
  for (size_t i = 0; i < vars.size(); ++i) {
    out += (i ? ",\n    " : "\n    ");
    out += "{\"id\": " + vars[i]["id"].dump() + ", \"cardinality\": " +
           vars[i]["cardinality"].dump() + "}";
  }
  out += vars.empty() ? "],\n  \"arcs\": [" : "\n  ],\n  \"arcs\": [";
  const json& arcs = doc["arcs"];
  for (size_t i = 0; i < arcs.size(); ++i) {
    out += (i ? ",\n    " : "\n    ") + arcs[i].dump();
  }
  out += arcs.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

BeliefNetwork NetworkFromJson(const json& doc, const std::string& path) {
  CheckHeader(doc, path, "jtree-network");
  BeliefNetwork net;
  const json& vars = ArrayMember(doc, path, "variables");
  for (size_t i = 0; i < vars.size(); ++i) {
    const std::string field = At(At(path, "variables"), i);
    if (!vars[i].is_object()) Fail(field, "expected an object");
    std::string name = String(Member(vars[i], field, "id"), At(field, "id"));
    uint64_t card = Unsigned(Member(vars[i], field, "cardinality"), At(field, "cardinality"));
    if (card < 1 || card > UINT32_MAX) Fail(At(field, "cardinality"), "out of range");
    try {
      net.AddVariable(name, static_cast<uint32_t>(card));
    } catch (const NetworkError& e) {
      Fail(field, e.what());
    }
  }
  const json& arcs = ArrayMember(doc, path, "arcs");
  for (size_t i = 0; i < arcs.size(); ++i) {
    const std::string field = At(At(path, "arcs"), i);
    if (!arcs[i].is_array() || arcs[i].size() != 2) Fail(field, "expected [parent, child]");
    std::string parent = String(arcs[i][0], At(field, 0));
    std::string child = String(arcs[i][1], At(field, 1));
    for (const std::string& n : {parent, child}) {
      if (!net.Find(n)) {
        Fail(field, "arc " + parent + " -> " + child + " names unknown variable '" + n + "'");
      }
    }
    try {
      net.AddArc(parent, child);
    } catch (const NetworkError& e) {
      Fail(field, e.what());
    }
  }
  return net;
}

BeliefNetwork ParseNetwork(std::string_view text) {
  if (Blank(text)) return BeliefNetwork{};
  return NetworkFromJson(ParseJson(text));
}

// ---- graphs

json GraphToJson(const ClusterGraph& graph) {
  const BeliefNetwork& net = graph.network();
  json clusters = json::array();
  for (const auto& [id, c] : graph.clusters()) {
    VarSet homes;
    for (VarId v : graph.FamiliesHousedIn(id)) homes.Insert(v);
    clusters.push_back({{"id", id.value},
                        {"members", SortedNames(net, c.members)},
                        {"family", SortedNames(net, c.family_vars)},
                        {"homes", SortedNames(net, homes)}});
  }
  json edges = json::array();
  for (const ClusterEdge& e : graph.Edges()) {
    edges.push_back({{"a", e.a.value}, {"b", e.b.value}, {"separator", SortedNames(net, e.separator)}});
  }
  return {{"format", "jtree-graph"},
          {"version", kFormatVersion},
          {"network", NetworkToJson(net)},
          {"next_cluster_id", graph.next_cluster_id().value},
          {"clusters", std::move(clusters)},
          {"edges", std::move(edges)}};
}

std::string SerializeGraph(const ClusterGraph& graph) { return GraphToJson(graph).dump(1) + "\n"; }

ClusterGraph GraphFromJson(const json& doc) {
  CheckHeader(doc, "", "jtree-graph");
  auto net = std::make_shared<BeliefNetwork>(NetworkFromJson(Member(doc, "", "network"), "network"));
  ClusterGraph g(net);
  const json& clusters = ArrayMember(doc, "", "clusters");
  std::vector<std::pair<ClusterId, size_t>> order;
  for (size_t i = 0; i < clusters.size(); ++i) {
    const std::string field = At("clusters", i);
    if (!clusters[i].is_object()) Fail(field, "expected an object");
    uint64_t id = Unsigned(Member(clusters[i], field, "id"), At(field, "id"));
    if (id >= UINT32_MAX) Fail(At(field, "id"), "out of range");
    order.emplace_back(ClusterId{static_cast<uint32_t>(id)}, i);
  }
  std::sort(order.begin(), order.end());
  for (size_t k = 0; k < order.size(); ++k) {
    const auto [id, i] = order[k];
    const std::string field = At("clusters", i);
    if (k > 0 && order[k - 1].first == id) Fail(At(field, "id"), "duplicate cluster id");
    const json& c = clusters[i];
    VarSet members = NameSet(*net, Member(c, field, "members"), At(field, "members"));
    VarSet family = NameSet(*net, Member(c, field, "family"), At(field, "family"));
    if (!family.IsSubsetOf(members)) Fail(At(field, "family"), "not a subset of members");
    g.SkipClusterIds(id);
    g.AddCluster(members, family);
    if (c.contains("homes")) {
      VarSet homes = NameSet(*net, c["homes"], At(field, "homes"));
      for (VarId v : homes) {
        if (g.FamilyHome(v)) Fail(At(field, "homes"), "family of " + net->Name(v) + " housed twice");
        g.SetFamilyHome(v, id);
      }
    }
  }
  const json& edges = ArrayMember(doc, "", "edges");
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string field = At("edges", i);
    if (!edges[i].is_object()) Fail(field, "expected an object");
    ClusterId a{static_cast<uint32_t>(Unsigned(Member(edges[i], field, "a"), At(field, "a")))};
    ClusterId b{static_cast<uint32_t>(Unsigned(Member(edges[i], field, "b"), At(field, "b")))};
    if (!g.HasCluster(a) || !g.HasCluster(b) || a == b) Fail(field, "bad endpoints");
    if (g.HasEdge(a, b)) Fail(field, "duplicate edge");
    VarSet sep = NameSet(*net, Member(edges[i], field, "separator"), At(field, "separator"));
    if (sep.Empty()) Fail(At(field, "separator"), "empty separator");
    g.AddOrMergeEdge(a, b, sep);
  }
  if (doc.contains("next_cluster_id")) {
    uint64_t next = Unsigned(doc["next_cluster_id"], "next_cluster_id");
    g.SkipClusterIds(ClusterId{static_cast<uint32_t>(std::min<uint64_t>(next, UINT32_MAX))});
  }
  return g;
}

ClusterGraph ParseGraph(std::string_view text) { return GraphFromJson(ParseJson(text)); }

// ---- traces

json TraceEventToJson(const TraceEvent& event) {
  json clusters = json::array(), vars = json::array();
  for (ClusterId c : event.clusters) clusters.push_back(c.value);
  for (VarId v : event.vars) vars.push_back(v.value);
  return {{"kind", TraceKindName(event.kind)}, {"clusters", std::move(clusters)},
          {"vars", std::move(vars)},           {"label", event.label},
          {"value", event.value},              {"cost_delta", event.cost_delta}};
}

TraceEvent TraceEventFromJson(const json& doc, const BeliefNetwork* network,
                              const std::string& path) {
  if (!doc.is_object()) Fail(path, "expected an object");
  TraceEvent ev;
  std::string kind = String(Member(doc, path, "kind"), At(path, "kind"));
  auto k = ParseTraceKind(kind);
  if (!k) Fail(At(path, "kind"), "unknown kind '" + kind + "'");
  ev.kind = *k;
  if (doc.contains("clusters")) {
    const json& list = doc["clusters"];
    if (!list.is_array()) Fail(At(path, "clusters"), "expected an array");
    for (size_t i = 0; i < list.size(); ++i) {
      ev.clusters.push_back(
          ClusterId{static_cast<uint32_t>(Unsigned(list[i], At(At(path, "clusters"), i)))});
    }
  }
  if (doc.contains("vars")) {
    const json& list = doc["vars"];
    if (!list.is_array()) Fail(At(path, "vars"), "expected an array");
    for (size_t i = 0; i < list.size(); ++i) {
      const std::string field = At(At(path, "vars"), i);
      if (list[i].is_string()) {
        if (!network) Fail(field, "variable names need a network");
        auto v = network->Find(list[i].get<std::string>());
        if (!v) Fail(field, "unknown variable '" + list[i].get<std::string>() + "'");
        ev.vars.push_back(*v);
      } else {
        ev.vars.push_back(VarId{static_cast<uint32_t>(Unsigned(list[i], field))});
      }
    }
  }
  if (doc.contains("label")) ev.label = String(doc["label"], At(path, "label"));
  auto integer = [&](std::string_view key) -> int64_t {
    const json& v = doc[std::string(key)];
    if (!v.is_number_integer()) Fail(At(path, key), "expected an integer");
    return v.get<int64_t>();
  };
  if (doc.contains("value")) ev.value = integer("value");
  if (doc.contains("cost_delta")) ev.cost_delta = integer("cost_delta");
  return ev;
}

std::string SerializeTrace(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const TraceEvent& e : events) out += TraceEventToJson(e).dump() + "\n";
  return out;
}

std::vector<TraceEvent> ParseTrace(std::string_view text) {
  std::vector<TraceEvent> out;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (Blank(line)) continue;
    try {
      out.push_back(TraceEventFromJson(ParseJson(line)));
    } catch (const FormatError& e) {
      throw FormatError("trace line " + std::to_string(line_no) + ": " + e.what(), e.field(),
                        line_no, e.column());
    }
  }
  return out;
}

// ---- dot

std::string ExportDot(const ClusterGraph& graph) {
  const BeliefNetwork& net = graph.network();
  auto quote = [](const std::string& s) { return json(s).dump(); };
  std::ostringstream out;
  out << "graph jtree {\n  node [shape=box];\n";
  for (const auto& [id, c] : graph.clusters()) {
    std::vector<std::string> names;
    for (VarId v : c.members) names.push_back(net.Name(v) + (c.family_vars.Contains(v) ? "*" : ""));
    std::sort(names.begin(), names.end());
    std::string label;
    for (const std::string& n : names) label += (label.empty() ? "" : " ") + n;
    out << "  c" << id.value << " [label=" << quote(label) << "];\n";
  }
  for (const ClusterEdge& e : graph.Edges()) {
    std::string label;
    for (const std::string& n : SortedNames(net, e.separator)) label += (label.empty() ? "" : " ") + n;
    out << "  c" << e.a.value << " -- c" << e.b.value << " [label=" << quote(label) << "];\n";
  }
  out << "}\n";
  return out.str();
}

// ---- bench

BenchSpec ParseBenchSpec(std::string_view text, const std::string& base_dir) {
  json doc = ParseJson(text);
  CheckHeader(doc, "", "jtree-bench");
  BenchSpec spec;
  if (doc.contains("seed")) spec.seed = Unsigned(doc["seed"], "seed");
  if (doc.contains("runs")) {
    uint64_t runs = Unsigned(doc["runs"], "runs");
    if (runs < kMinimumRuns || runs > 1000000) {
      Fail("runs", "must be at least " + std::to_string(kMinimumRuns));
    }
    spec.runs = static_cast<int>(runs);
  }
  const json& presets = ArrayMember(doc, "", "presets");
  for (size_t i = 0; i < presets.size(); ++i) {
    std::string name = String(presets[i], At("presets", i));
    try {
      PresetByName(name);
    } catch (const PreconditionError& e) {
      Fail(At("presets", i), e.what());
    }
    spec.presets.push_back(name);
  }
  const json& nets = ArrayMember(doc, "", "networks");
  for (size_t i = 0; i < nets.size(); ++i) {
    const std::string field = At("networks", i);
    const json& n = nets[i];
    if (!n.is_object()) Fail(field, "expected an object");
    NamedNetwork named;
    named.name = String(Member(n, field, "name"), At(field, "name"));
    if (n.contains("file")) {
      std::filesystem::path p = String(n["file"], At(field, "file"));
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      try {
        named.network = std::make_shared<BeliefNetwork>(ParseNetwork(ReadFile(p.string())));
      } catch (const Error& e) {
        Fail(At(field, "file"), e.what());
      }
    } else {
      NetworkSpec ns;
      ns.variables = static_cast<int>(
          std::min<uint64_t>(Unsigned(Member(n, field, "variables"), At(field, "variables")), 1 << 20));
      ns.arcs = static_cast<int>(
          std::min<uint64_t>(Unsigned(Member(n, field, "arcs"), At(field, "arcs")), 1 << 30));
      if (n.contains("cardinality")) {
        const json& c = n["cardinality"];
        if (!c.is_array() || c.size() != 2) Fail(At(field, "cardinality"), "expected [low, high]");
        ns.cardinality_low = static_cast<uint32_t>(Unsigned(c[0], At(At(field, "cardinality"), 0)));
        ns.cardinality_high = static_cast<uint32_t>(Unsigned(c[1], At(At(field, "cardinality"), 1)));
      }
      if (n.contains("seed")) ns.seed = Unsigned(n["seed"], At(field, "seed"));
      try {
        named.network = std::make_shared<BeliefNetwork>(GenerateRandomNetwork(ns));
      } catch (const PreconditionError& e) {
        Fail(field, e.what());
      }
    }
    spec.networks.push_back(std::move(named));
  }
  return spec;
}

std::vector<std::string> BenchObservations(const std::vector<ExperimentResult>& results) {
  std::map<std::string, std::map<std::string, const ExperimentResult*>> by_net;
  std::vector<std::string> net_order;
  for (const ExperimentResult& r : results) {
    if (!by_net.contains(r.network)) net_order.push_back(r.network);
    by_net[r.network][r.algorithm] = &r;
  }
  std::vector<std::string> out;
  for (const std::string& net : net_order) {
    const auto& algs = by_net[net];
    for (auto [inc, whole] : {std::pair{"IE", "E"}, std::pair{"ID", "D"}}) {
      if (algs.contains(inc) && algs.contains(whole)) {
        const double a = algs.at(inc)->mean, b = algs.at(whole)->mean;
        out.push_back(net + ": mean " + inc + " / mean " + whole + " = " +
                      FormatMean(b > 0 ? a / b : 0) + (a > b ? " (incremental worse)" : ""));
      }
    }
    std::string spread = net + ": spread (max - min)";
    for (const auto& [alg, r] : algs) spread += " " + alg + "=" + std::to_string(r->max - r->min);
    out.push_back(spread);
  }
  return out;
}

std::string FormatBenchTable(const std::vector<RunRecord>& records,
                             const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "algorithm,network,run,cost\n";
  for (const RunRecord& r : records) {
    out << r.algorithm << "," << r.network << "," << r.run << "," << r.cost << "\n";
  }
  out << "# summary\nalgorithm,network,runs,min,median,mean,max\n";
  for (const ExperimentResult& r : results) {
    out << r.algorithm << "," << r.network << "," << r.costs.size() << "," << r.min << ","
        << r.median << "," << FormatMean(r.mean) << "," << r.max << "\n";
  }
  for (const std::string& o : BenchObservations(results)) out << "# observation: " << o << "\n";
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace jtree
