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

// Command-line front end: build, check, bench, gen, serve.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "jtree/algorithms.h"
#include "jtree/bench.h"
#include "jtree/io.h"
#include "jtree/session.h"
#include "jtree/verify.h"

namespace {

using namespace jtree;

struct BuildArgs {
  std::string network;
  std::string preset = "E";
  uint64_t seed = 0;
  std::string trace, out, dot;
};

int Build(const BuildArgs& a) {
  auto net = std::make_shared<BeliefNetwork>(ParseNetwork(ReadFile(a.network)));
  const AlgorithmPreset preset = PresetByName(a.preset);
  ClusterGraph graph;
  size_t invocations = 0;
  if (IsIncrementalPreset(a.preset)) {
    IncrementalOutcome o = RunIncrementalExperiment(*net, preset, a.seed);
    graph = std::move(o.graph);
    invocations = static_cast<size_t>(o.restores);
  } else {
    graph = BuildInitialClusterGraph(net);
    invocations = RunPreset(graph, preset, a.seed).audits.size();
  }
  // RunPreset and the incremental driver already throw on an invalid
  // result; check again so the exit status never depends on that.
  CheckReport check = CheckJunctionTree(graph);
  if (!check.pass) {
    for (const std::string& w : check.witnesses) std::cerr << "witness: " << w << "\n";
    throw InvariantError("result is not a junction tree");
  }
  if (!a.trace.empty()) WriteFile(a.trace, SerializeTrace(graph.trace()));
  if (!a.out.empty()) WriteFile(a.out, SerializeGraph(graph));
  if (!a.dot.empty()) WriteFile(a.dot, ExportDot(graph));
  std::cout << "preset " << a.preset << " seed " << a.seed << "\n"
            << "clusters " << graph.num_clusters() << " edges " << graph.num_edges()
            << " components " << ConnectedComponentCount(graph) << "\n"
            << "invocations " << invocations << " trace " << graph.trace().size() << "\n"
            << "cost " << GraphCost(graph) << "\n";
  return 0;
}

int Check(const std::string& path, bool normalize) {
  ClusterGraph graph = ParseGraph(ReadFile(path));
  std::vector<CheckReport> reports = {CheckFamilyProperty(graph), CheckPathProperty(graph),
                                      CheckJunctionTree(graph, normalize)};
  if (IsSinglyConnected(graph)) reports.push_back(CheckChordalEmbedding(graph));
  bool pass = true;
  for (const CheckReport& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.property << "\n";
    for (const std::string& w : r.witnesses) std::cout << "  " << w << "\n";
    pass = pass && r.pass;
  }
  std::cout << "cost " << GraphCost(graph) << "\n";
  return pass ? 0 : 1;
}

int Bench(const std::string& spec_path, const std::string& out) {
  std::string dir = std::filesystem::path(spec_path).parent_path().string();
  BenchSpec spec = ParseBenchSpec(ReadFile(spec_path), dir.empty() ? "." : dir);
  std::vector<RunRecord> records;
  auto results = RunExperiment(spec.networks, spec.presets, spec.runs, spec.seed, &records);
  std::string table = FormatBenchTable(records, results);
  if (out.empty()) {
    std::cout << table;
  } else {
    WriteFile(out, table);
  }
  return 0;
}

int Gen(const NetworkSpec& spec, const std::string& out) {
  std::string text = SerializeNetwork(GenerateRandomNetwork(spec));
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFile(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Junction trees by cluster-graph transformations"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a junction tree for a network file");
  b->add_option("network", build.network, "network file")->required()->check(CLI::ExistingFile);
  b->add_option("--preset", build.preset, "E, D, D2, ID or IE")
      ->check(CLI::IsMember(PresetNames()));
  b->add_option("--seed", build.seed, "tie-breaking seed");
  b->add_option("--trace", build.trace, "write the transformation trace here");
  b->add_option("--out", build.out, "write the junction tree (graph file) here");
  b->add_option("--dot", build.dot, "write a graph description here");

  std::string check_path;
  bool no_normalize = false;
  auto* c = app.add_subcommand("check", "Check the properties of a graph file");
  c->add_option("graph", check_path, "graph file")->required()->check(CLI::ExistingFile);
  c->add_flag("--no-normalize", no_normalize, "compare narrow separators as they are");

  std::string bench_spec, bench_out;
  auto* be = app.add_subcommand("bench", "Run a benchmark spec");
  be->add_option("spec", bench_spec, "bench spec file")->required()->check(CLI::ExistingFile);
  be->add_option("--out", bench_out, "result table file (default stdout)");

  NetworkSpec gen;
  std::string gen_out;
  auto* g = app.add_subcommand("gen", "Generate a random network file");
  g->add_option("--variables", gen.variables)->required();
  g->add_option("--arcs", gen.arcs)->required();
  g->add_option("--card-low", gen.cardinality_low);
  g->add_option("--card-high", gen.cardinality_high);
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen_out, "network file (default stdout)");

  int port = -1;
  auto* s = app.add_subcommand("serve", "Run the session protocol on stdio or a local port");
  s->add_option("--port", port, "listen on 127.0.0.1:PORT (0 picks one)")->check(CLI::Range(0, 65535));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*b) return Build(build);
    if (*c) return Check(check_path, !no_normalize);
    if (*be) return Bench(bench_spec, bench_out);
    if (*g) {
      // --card-low alone means a fixed cardinality.
      if (g->count("--card-high") == 0) gen.cardinality_high = std::max(gen.cardinality_high, gen.cardinality_low);
      return Gen(gen, gen_out);
    }
    if (*s) {
      if (port < 0) {
        ServeStream(std::cin, std::cout);
      } else {
        ServeTcp(static_cast<uint16_t>(port), [](uint16_t p) {
          std::cerr << "listening on 127.0.0.1:" << p << std::endl;
        });
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
