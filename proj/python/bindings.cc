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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jtree/algorithms.h"
#include "jtree/applicable.h"
#include "jtree/bench.h"
#include "jtree/incremental.h"
#include "jtree/io.h"
#include "jtree/session.h"
#include "jtree/verify.h"

namespace py = pybind11;
using namespace jtree;

namespace {

std::vector<std::string> Names(const BeliefNetwork& net, const VarSet& vars) {
  std::vector<std::string> out;
  for (VarId v : vars) out.push_back(net.Name(v));
  return out;
}

py::dict ReportDict(const CheckReport& r) {
  py::dict d;
  d["property"] = r.property;
  d["pass"] = r.pass;
  d["witnesses"] = r.witnesses;
  return d;
}

// Events cross the boundary as JSON text so that Python sees plain dicts.
py::object ToPython(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}
nlohmann::json FromPython(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_jtree, m) {
  m.doc() = "Junction trees built by cluster-graph transformations";

  // Translators run newest first, so the base goes in first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NetworkError>(m, "NetworkError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());

  py::class_<BeliefNetwork, std::shared_ptr<BeliefNetwork>>(m, "Network")
      .def(py::init<>())
      .def("add_variable",
           [](BeliefNetwork& n, const std::string& name, uint32_t card) {
             return n.AddVariable(name, card).value;
           },
           py::arg("name"), py::arg("cardinality") = 2)
      .def("add_arc",
           [](BeliefNetwork& n, const std::string& p, const std::string& c) { n.AddArc(p, c); })
      .def("remove_arc", [](BeliefNetwork& n, const std::string& p, const std::string& c) {
        n.RemoveArc(n.Require(p), n.Require(c));
      })
      .def_property_readonly("variables",
                             [](const BeliefNetwork& n) {
                               std::vector<std::string> out;
                               for (VarId v : n.Variables()) out.push_back(n.Name(v));
                               return out;
                             })
      .def_property_readonly("arcs",
                             [](const BeliefNetwork& n) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const Arc& a : n.Arcs()) out.emplace_back(n.Name(a.parent), n.Name(a.child));
                               return out;
                             })
      .def("cardinality", [](const BeliefNetwork& n, const std::string& v) { return n.Cardinality(n.Require(v)); })
      .def("is_polytree", &BeliefNetwork::IsPolytree)
      .def("to_json", [](const BeliefNetwork& n) { return SerializeNetwork(n); })
      .def_static("from_json", [](const std::string& text) {
        return std::make_shared<BeliefNetwork>(ParseNetwork(text));
      })
      .def("__len__", &BeliefNetwork::num_variables)
      .def("__eq__", [](const BeliefNetwork& a, const BeliefNetwork& b) { return a == b; });

  py::class_<ClusterGraph>(m, "ClusterGraph")
      .def(py::init([](const std::shared_ptr<BeliefNetwork>& net) {
             // The graph keeps its own copy; later edits to `net` do not leak in.
             return BuildInitialClusterGraph(std::make_shared<BeliefNetwork>(*net));
           }),
           py::arg("network"), "The initial cluster graph: one cluster per family.")
      .def_property_readonly("cost", [](const ClusterGraph& g) { return GraphCost(g); })
      .def_property_readonly("clusters",
                             [](const ClusterGraph& g) {
                               py::list out;
                               for (const auto& [id, c] : g.clusters()) {
                                 py::dict d;
                                 d["id"] = id.value;
                                 d["members"] = Names(g.network(), c.members);
                                 d["family"] = Names(g.network(), c.family_vars);
                                 out.append(d);
                               }
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const ClusterGraph& g) {
                               py::list out;
                               for (const ClusterEdge& e : g.Edges()) {
                                 out.append(py::make_tuple(e.a.value, e.b.value, Names(g.network(), e.separator)));
                               }
                               return out;
                             })
      .def_property_readonly("edges_minus_clusters", &EdgesMinusClusters)
      .def("is_singly_connected", [](const ClusterGraph& g) { return IsSinglyConnected(g); })
      .def("check_family", [](const ClusterGraph& g) { return ReportDict(CheckFamilyProperty(g)); })
      .def("check_path", [](const ClusterGraph& g) { return ReportDict(CheckPathProperty(g)); })
      .def("check_junction_tree",
           [](const ClusterGraph& g, bool normalize) { return ReportDict(CheckJunctionTree(g, normalize)); },
           py::arg("normalize") = true)
      .def("check_chordal", [](const ClusterGraph& g) { return ReportDict(CheckChordalEmbedding(g)); })
      .def("applicable",
           [](const ClusterGraph& g, bool predict) {
             py::list out;
             for (const TraceEvent& e : ApplicableTransformations(g, {.predict = predict})) {
               out.append(ToPython(TraceEventToJson(e)));
             }
             return out;
           },
           py::arg("predict") = true)
      .def("apply",
           [](ClusterGraph& g, const py::object& event) {
             ApplyTraceEvent(g, TraceEventFromJson(FromPython(event), &g.network()));
             return ToPython(TraceEventToJson(g.trace().back()));
           },
           py::arg("event"), "Applies one transformation given as a trace-event dict.")
      .def_property_readonly("trace",
                             [](const ClusterGraph& g) {
                               py::list out;
                               for (const TraceEvent& e : g.trace()) out.append(ToPython(TraceEventToJson(e)));
                               return out;
                             })
      .def("to_json", [](const ClusterGraph& g) { return SerializeGraph(g); })
      .def_static("from_json", [](const std::string& text) { return ParseGraph(text); })
      .def("to_dot", [](const ClusterGraph& g) { return ExportDot(g); })
      .def("copy", [](const ClusterGraph& g) { return ClusterGraph(g); });

  m.def("preset_names", &PresetNames);
  m.def(
      "run_preset",
      [](ClusterGraph& g, const std::string& preset, uint64_t seed) {
        RunReport r = RunPreset(g, PresetByName(preset), seed);
        py::dict d;
        d["preset"] = r.preset;
        d["seed"] = r.seed;
        d["initial_cost"] = r.initial_cost;
        d["cost"] = r.cost;
        d["invocations"] = r.audits.size();
        d["components"] = r.components;
        py::list drops;
        for (const SubInvocationAudit& a : r.audits) drops.append(py::make_tuple(a.metric_drop, a.measured_drop));
        d["audits"] = drops;
        return d;
      },
      py::arg("graph"), py::arg("preset") = "E", py::arg("seed") = 0,
      "Turns the graph into a junction tree in place.");
  m.def(
      "build",
      [](const std::shared_ptr<BeliefNetwork>& net, const std::string& preset, uint64_t seed) {
        if (IsIncrementalPreset(preset)) return RunIncrementalExperiment(*net, PresetByName(preset), seed).graph;
        ClusterGraph g = BuildInitialClusterGraph(std::make_shared<BeliefNetwork>(*net));
        RunPreset(g, PresetByName(preset), seed);
        return g;
      },
      py::arg("network"), py::arg("preset") = "E", py::arg("seed") = 0,
      "A junction tree for the network; IE and ID build it arc by arc.");
  m.def(
      "generate_network",
      [](int variables, int arcs, uint32_t low, uint32_t high, uint64_t seed) {
        return std::make_shared<BeliefNetwork>(GenerateRandomNetwork(
            {.variables = variables, .arcs = arcs, .cardinality_low = low, .cardinality_high = high, .seed = seed}));
      },
      py::arg("variables"), py::arg("arcs"), py::arg("cardinality_low") = 2,
      py::arg("cardinality_high") = 2, py::arg("seed") = 0);
  m.def(
      "generate_polytree",
      [](int variables, uint32_t low, uint32_t high, uint64_t seed) {
        return std::make_shared<BeliefNetwork>(GenerateRandomPolytree(variables, low, high, seed));
      },
      py::arg("variables"), py::arg("cardinality_low") = 2, py::arg("cardinality_high") = 2,
      py::arg("seed") = 0);
  m.def(
      "reference_elimination_cost",
      [](const BeliefNetwork& net, const std::vector<std::string>& order) {
        std::vector<VarId> ids;
        for (const std::string& n : order) ids.push_back(net.Require(n));
        return ReferenceEliminationCost(net, ids);
      },
      py::arg("network"), py::arg("order"));
  m.def("brute_force_optimal_cost", &BruteForceOptimalCost, py::arg("network"));

  py::class_<Session>(m, "Session")
      .def(py::init<>())
      .def("handle", [](Session& s, const std::string& line) { return s.Handle(line); },
           "One protocol request line in, one response line out.")
      .def("request",
           [](Session& s, const std::string& verb, const py::object& payload) {
             nlohmann::json req = {{"id", 0}, {"verb", verb},
                                   {"payload", payload.is_none() ? nlohmann::json::object() : FromPython(payload)}};
             return ToPython(s.HandleJson(req));
           },
           py::arg("verb"), py::arg("payload") = py::none());
}
