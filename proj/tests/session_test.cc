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

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <sstream>
#include <thread>

#include "fixtures.h"
#include "jtree/io.h"
#include "jtree/session.h"
#include "jtree/verify.h"

namespace jtree {
namespace {

using nlohmann::json;

class SessionTest : public ::testing::Test {
 protected:
  json Send(const std::string& verb, json payload = json::object()) {
    json response = session_.HandleJson({{"id", ++id_}, {"verb", verb}, {"payload", payload}});
    EXPECT_EQ(response["id"], id_);
    return response;
  }
  json Ok(const std::string& verb, json payload = json::object()) {
    json r = Send(verb, std::move(payload));
    EXPECT_TRUE(r["ok"].get<bool>()) << verb << ": " << r.dump();
    return r["result"];
  }
  std::string ErrorOf(const std::string& verb, json payload = json::object()) {
    json r = Send(verb, std::move(payload));
    EXPECT_FALSE(r["ok"].get<bool>()) << verb << " unexpectedly succeeded";
    return r["error"]["type"].get<std::string>();
  }
  void LoadDiamond() { Ok("load", {{"network", NetworkToJson(*testing::Diamond())}}); }

  Session session_;
  int id_ = 0;
};

TEST_F(SessionTest, Hello) {
  json r = Ok("hello", {{"version", kProtocolVersion}});
  EXPECT_EQ(r["protocol"], "jtree-session");
  EXPECT_EQ(ErrorOf("hello", {{"version", 2}}), "protocol");
}

TEST_F(SessionTest, NothingLoaded) {
  EXPECT_EQ(ErrorOf("state"), "protocol");
  EXPECT_EQ(ErrorOf("apply", {{"kind", "merge"}, {"clusters", {0, 1}}}), "protocol");
}

TEST_F(SessionTest, MalformedMessagesDoNotEndTheSession) {
  json r = json::parse(session_.Handle("{not json"));
  EXPECT_FALSE(r["ok"].get<bool>());
  EXPECT_EQ(r["error"]["type"], "format");
  EXPECT_TRUE(r["id"].is_null());
  r = json::parse(session_.Handle("[1, 2]"));
  EXPECT_EQ(r["error"]["type"], "protocol");
  r = json::parse(session_.Handle(R"({"id": "x", "verb": "fly"})"));
  EXPECT_EQ(r["id"], "x");
  EXPECT_EQ(r["error"]["type"], "protocol");
  LoadDiamond();
  EXPECT_EQ(Ok("cost")["cost"], 2 + 4 + 4 + 8);
}

TEST_F(SessionTest, LoadReportsState) {
  LoadDiamond();
  json s = Ok("state");
  EXPECT_EQ(s["cost"], 18);
  EXPECT_EQ(s["trace_length"], 0);
  EXPECT_FALSE(s["singly_connected"].get<bool>());
  EXPECT_EQ(s["graph"]["clusters"].size(), 4u);
  EXPECT_EQ(ErrorOf("load", {{"network", {{"format", "jtree-network"}}}}), "format");
}

TEST_F(SessionTest, ApplicableOnDiamond) {
  LoadDiamond();
  json list = Ok("applicable")["transformations"];
  std::set<std::string> kinds;
  for (const json& t : list) {
    kinds.insert(t["kind"].get<std::string>());
    EXPECT_TRUE(t.contains("cost_delta"));
  }
  for (const char* k : {"merge", "slide", "collapse", "eliminate"}) {
    EXPECT_TRUE(kinds.contains(k)) << k;
  }
  // No triangle, and on a 4-cycle every other cluster touches an endpoint.
  EXPECT_FALSE(kinds.contains("drop"));
  EXPECT_FALSE(kinds.contains("steal_an_edge"));
  for (const json& t : list) {
    json r = Send("apply", {{"event", t}});
    ASSERT_TRUE(r["ok"].get<bool>()) << t.dump();
    EXPECT_EQ(r["result"]["cost_delta"], t["cost_delta"]) << t.dump();
    Ok("undo");
  }
}

TEST_F(SessionTest, BadApplyLeavesStateUnchanged) {
  LoadDiamond();
  json before = Ok("state");
  ClusterGraph g = session_.graph();
  ClusterId a = testing::ClusterWith(g, {"A"});
  ClusterId ab = testing::ClusterWith(g, {"A", "B"});
  ClusterId bcd = testing::ClusterWith(g, {"B", "C", "D"});
  std::string type = ErrorOf("apply", {{"kind", "drop"}, {"clusters", {a.value, ab.value, bcd.value}}});
  EXPECT_EQ(type, "precondition");
  EXPECT_EQ(ErrorOf("apply", {{"kind", "merge"}, {"clusters", {a.value, 77}}}), "precondition");
  EXPECT_EQ(ErrorOf("apply", {{"kind", "teleport"}}), "format");
  EXPECT_EQ(Ok("state"), before);
}

TEST_F(SessionTest, SlideUndoRestoresCost) {
  LoadDiamond();
  const ClusterGraph g = session_.graph();
  ClusterId a = testing::ClusterWith(g, {"A"});
  ClusterId ab = testing::ClusterWith(g, {"A", "B"});
  ClusterId ac = testing::ClusterWith(g, {"A", "C"});
  json r = Ok("apply", {{"kind", "slide"}, {"clusters", {a.value, ab.value, ac.value}}});
  ASSERT_EQ(r["events"].size(), 1u);
  EXPECT_EQ(r["events"][0]["kind"], "slide");
  EXPECT_EQ(r["delta"]["removed_edges"].size(), 1u);
  Ok("undo");
  EXPECT_EQ(Ok("cost")["cost"], 18);
  EXPECT_TRUE(session_.graph().SameStructure(g));
  EXPECT_EQ(ErrorOf("undo"), "precondition");
}

TEST_F(SessionTest, RunPresetAndCheck) {
  LoadDiamond();
  json r = Ok("run-preset", {{"preset", "E"}, {"seed", 3}});
  EXPECT_EQ(r["cost"], 16);
  EXPECT_EQ(r["cost_delta"], -2);
  EXPECT_EQ(r["report"]["invocations"], 1);
  json c = Ok("check");
  for (const char* k : {"family", "path", "junction_tree", "chordal"}) {
    EXPECT_TRUE(c[k]["pass"].get<bool>()) << k;
  }
  EXPECT_EQ(ErrorOf("run-preset", {{"preset", "Q"}}), "precondition");
}

TEST_F(SessionTest, EditsAndRestore) {
  Ok("load");
  for (const char* n : {"A", "B", "C", "D"}) Ok("edit", {{"op", "add_variable"}, {"name", n}});
  for (auto [p, c] : testing::ArcList{{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}}) {
    Ok("edit", {{"op", "add_arc"}, {"parent", p}, {"child", c}});
  }
  EXPECT_FALSE(Ok("state")["singly_connected"].get<bool>());
  EXPECT_EQ(ErrorOf("edit", {{"op", "add_arc"}, {"parent", "D"}, {"child", "A"}}), "network");
  EXPECT_EQ(ErrorOf("edit", {{"op", "add_arc"}, {"parent", "D"}, {"child", "Q"}}), "precondition");
  EXPECT_EQ(ErrorOf("edit", {{"op", "dance"}}), "protocol");
  json r = Ok("restore");
  EXPECT_EQ(r["cost"], 16);
  EXPECT_EQ(r["invocations"], 1);
  Ok("edit", {{"op", "delete_arc"}, {"parent", "C"}, {"child", "D"}});
  Ok("edit", {{"op", "delete_variable"}, {"name", "B"}});
  EXPECT_TRUE(Ok("check")["junction_tree"]["pass"].get<bool>());
}

TEST_F(SessionTest, UndoAcrossSnapshots) {
  auto net = std::make_shared<BeliefNetwork>(GenerateRandomNetwork(
      {.variables = 18, .arcs = 34, .cardinality_low = 2, .cardinality_high = 3, .seed = 12}));
  Ok("load", {{"network", NetworkToJson(*net)}});
  Ok("run-preset", {{"preset", "D"}, {"seed", 1}});
  const std::vector<TraceEvent> trace = session_.graph().trace();
  ASSERT_GT(trace.size(), 2 * Session::kSnapshotInterval);
  // Step back in uneven strides; each state must equal a replay of the
  // corresponding trace prefix.
  size_t length = trace.size();
  for (size_t stride : {1u, 40u, 7u, 64u, 65u}) {
    Ok("undo", {{"events", stride}});
    length -= stride;
    ClusterGraph expect = BuildInitialClusterGraph(net);
    ReplayTrace(expect, std::vector<TraceEvent>(trace.begin(), trace.begin() + static_cast<long>(length)));
    ASSERT_TRUE(session_.graph().SameStructure(expect)) << "length " << length;
    ASSERT_EQ(session_.graph().trace().size(), length);
  }
  Ok("undo", {{"events", length}});
  EXPECT_EQ(Ok("cost")["cost"], GraphCost(BuildInitialClusterGraph(net)));
  EXPECT_EQ(ErrorOf("undo", {{"events", 1}}), "precondition");
}

TEST_F(SessionTest, BuildTraceReplaysThroughApply) {
  auto net = std::make_shared<BeliefNetwork>(GenerateRandomNetwork(
      {.variables = 12, .arcs = 20, .cardinality_low = 2, .cardinality_high = 4, .seed = 5}));
  ClusterGraph built = BuildInitialClusterGraph(net);
  RunPreset(built, PresetByName("D2"), 8);
  Ok("load", {{"network", NetworkToJson(*net)}});
  for (const TraceEvent& e : ParseTrace(SerializeTrace(built.trace()))) {
    Ok("apply", {{"event", TraceEventToJson(e)}});
  }
  EXPECT_TRUE(session_.graph().SameStructure(built));
  EXPECT_EQ(Ok("trace")["events"].size(), built.trace().size());
}

// Random mixes of valid and invalid messages never leave a broken graph.
TEST_F(SessionTest, ProtocolFuzz) {
  Rng rng(31);
  auto net = std::make_shared<BeliefNetwork>(GenerateRandomNetwork(
      {.variables = 9, .arcs = 14, .cardinality_low = 2, .cardinality_high = 3, .seed = 2}));
  Ok("load", {{"network", NetworkToJson(*net)}, {"preset", "ID"}});
  int applied = 0, refused = 0;
  for (int step = 0; step < 400; ++step) {
    json r;
    switch (rng.Index(9)) {
      case 0:
      case 1: {
        json list = Ok("applicable", {{"predict", false}})["transformations"];
        if (list.empty()) continue;
        r = Send("apply", {{"event", list[rng.Index(list.size())]}});
        break;
      }
      case 2: {  // a random, usually illegal, event
        static const char* kinds[] = {"merge", "slide", "drop", "steal_an_edge", "collapse"};
        json clusters = json::array();
        for (int i = 0; i < 3; ++i) clusters.push_back(rng.Index(session_.graph().next_cluster_id().value + 2));
        r = Send("apply", {{"kind", kinds[rng.Index(5)]}, {"clusters", clusters}, {"value", 1}});
        break;
      }
      case 3:
        r = Send("undo", {{"events", rng.Index(5)}});
        break;
      case 4: {
        std::vector<VarId> vars = session_.graph().network().Variables();
        if (vars.size() < 2) continue;
        r = Send("edit", {{"op", rng.Index(2) ? "add_arc" : "delete_arc"},
                          {"parent", vars[rng.Index(vars.size())].value},
                          {"child", vars[rng.Index(vars.size())].value}});
        break;
      }
      case 5:
        r = Send("restore");
        break;
      case 6:
        r = json::parse(session_.Handle(rng.Index(2) ? "{\"verb\": 5}" : "}{"));
        break;
      case 7:
        r = Send("edit", {{"op", "add_variable"}, {"name", "N" + std::to_string(step)}});
        break;
      default:
        r = Send("run-preset", {{"preset", rng.Index(2) ? "E" : "D"}, {"seed", step}});
    }
    (r["ok"].get<bool>() ? applied : refused) += 1;
    ASSERT_TRUE(CheckFamilyProperty(session_.graph()).pass) << r.dump();
    ASSERT_TRUE(CheckPathProperty(session_.graph()).pass) << r.dump();
  }
  EXPECT_GT(applied, 50);
  EXPECT_GT(refused, 50);
}

TEST(ServeTest, Stream) {
  std::istringstream in(
      "{\"id\": 1, \"verb\": \"hello\"}\n\n"
      "garbage\n"
      "{\"id\": 2, \"verb\": \"load\", \"payload\": {\"network\": " +
      NetworkToJson(*testing::Chain3()).dump() +
      "}}\n"
      "{\"id\": 3, \"verb\": \"cost\"}\n");
  std::ostringstream out;
  ServeStream(in, out);
  std::istringstream lines(out.str());
  std::vector<json> responses;
  for (std::string line; std::getline(lines, line);) responses.push_back(json::parse(line));
  ASSERT_EQ(responses.size(), 4u);
  EXPECT_TRUE(responses[0]["ok"].get<bool>());
  EXPECT_FALSE(responses[1]["ok"].get<bool>());
  EXPECT_EQ(responses[3]["result"]["cost"], 2 + 4 + 4);
}

TEST(ServeTest, TcpSessionsAreIsolated) {
  std::atomic<bool> stop{false};
  std::atomic<uint16_t> port{0};
  std::thread server([&] { ServeTcp(0, [&](uint16_t p) { port = p; }, &stop); });
  while (port == 0) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  auto connect_client = [&] {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    EXPECT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
    return fd;
  };
  auto roundtrip = [](int fd, const std::string& line) {
    std::string msg = line + "\n";
    EXPECT_EQ(::send(fd, msg.data(), msg.size(), 0), static_cast<ssize_t>(msg.size()));
    std::string got;
    char c;
    while (::recv(fd, &c, 1, 0) == 1 && c != '\n') got += c;
    return json::parse(got);
  };
  int a = connect_client(), b = connect_client();
  json load = {{"id", 1}, {"verb", "load"}, {"payload", {{"network", NetworkToJson(*testing::Diamond())}}}};
  EXPECT_TRUE(roundtrip(a, load.dump())["ok"].get<bool>());
  EXPECT_EQ(roundtrip(b, R"({"id": 1, "verb": "cost"})")["error"]["type"], "protocol");
  EXPECT_EQ(roundtrip(a, R"({"id": 2, "verb": "cost"})")["result"]["cost"], 18);
  ::close(a);
  ::close(b);
  stop = true;
  server.join();
}

}  // namespace
}  // namespace jtree
