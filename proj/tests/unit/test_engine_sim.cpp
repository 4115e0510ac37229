// Copyright 2026 The SETC Authors
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

#include "setc/engine/simulated_engine.hpp"
#include "setc/errors.hpp"
#include "support/paths.hpp"

namespace {

using namespace setc;
using namespace setc::engine;
using namespace std::chrono_literals;

NetworkSpec net(const std::string& entry) {
  return {"net_" + entry, true, {{"setc.session", "s"}, {"setc.entry", entry}}};
}

ContainerSpec ctr(const std::string& name, Role role, const NetworkId& network, const std::string& entry) {
  ContainerSpec c;
  c.name = name;
  c.image = "img";
  c.role = role;
  c.network = network.value;
  c.labels = {{"setc.session", "s"}, {"setc.entry", entry}, {"setc.role", std::string(to_string(role))}};
  return c;
}

TEST(SimEngine, AttackerExitsAfterRunDuration) {
  SimulatedEngine eng;
  auto n = eng.create_network(net("e"));
  auto a = eng.create_container(ctr("attacker", Role::Attacker, n, "e"));
  eng.start_container(a);
  auto s = eng.wait_container(a, 500ms);
  EXPECT_EQ(s.phase, Phase::Running);
  EXPECT_FALSE(s.exit_code.has_value());
  s = eng.wait_container(a, 500ms);
  EXPECT_EQ(s.phase, Phase::Exited);
  EXPECT_EQ(s.exit_code, 0);
  // Waiting again reports the same exit.
  EXPECT_EQ(eng.wait_container(a, 1s), s);
}

TEST(SimEngine, StartupDelayKeepsContainerCreated) {
  SimScenario sc;
  sc.defaults[Role::Vulnerable].startup_delay = 2000ms;
  SimulatedEngine eng(sc);
  auto n = eng.create_network(net("e"));
  auto t = eng.create_container(ctr("target", Role::Vulnerable, n, "e"));
  eng.start_container(t);
  EXPECT_EQ(eng.wait_container(t, 1000ms).phase, Phase::Created);
  EXPECT_EQ(eng.wait_container(t, 1000ms).phase, Phase::Running);
  EXPECT_EQ(eng.wait_container(t, 1h).phase, Phase::Running);
}

TEST(SimEngine, ExitCodesPerInstanceAndNeverExiting) {
  SimScenario sc;
  auto& b = sc.entries["e"][Role::Attacker];
  b = builtin_behavior(Role::Attacker);
  b.exit_codes = {1, std::nullopt, 0};
  SimulatedEngine eng(sc);
  auto n = eng.create_network(net("e"));
  std::vector<ContainerStatus> seen;
  for (int i = 0; i < 4; ++i) {
    auto a = eng.create_container(ctr("attacker", Role::Attacker, n, "e"));
    eng.start_container(a);
    seen.push_back(eng.wait_container(a, 5s));
    eng.remove_container(a);
  }
  EXPECT_EQ(seen[0].exit_code, 1);
  EXPECT_EQ(seen[1].phase, Phase::Running);
  EXPECT_EQ(seen[2].exit_code, 0);
  EXPECT_EQ(seen[3].exit_code, 0);
}

TEST(SimEngine, LogsAppearByLogicalTime) {
  SimScenario sc;
  auto& b = sc.entries["e"][Role::Attacker];
  b = builtin_behavior(Role::Attacker);
  b.run_duration = 10s;
  b.logs = {{100ms, "early"}, {3s, "late"}};
  SimulatedEngine eng(sc);
  auto n = eng.create_network(net("e"));
  auto a = eng.create_container(ctr("attacker", Role::Attacker, n, "e"));
  EXPECT_TRUE(eng.stream_logs(a).empty());
  eng.start_container(a);
  eng.wait_container(a, 1s);
  EXPECT_EQ(eng.stream_logs(a), std::vector<std::string>{"early"});
  eng.wait_container(a, 1min);
  EXPECT_EQ(eng.stream_logs(a), (std::vector<std::string>{"early", "late"}));
}

TEST(SimEngine, TrafficReachesRunningProxyOnSameNetwork) {
  telemetry::Capture cap;
  cap.transaction.http_method = "GET";
  cap.transaction.uri_path = "/";
  cap.transaction.url = "/";
  cap.transaction.status = 200;
  SimScenario sc;
  auto& b = sc.entries["e"][Role::Attacker];
  b = builtin_behavior(Role::Attacker);
  b.traffic = {cap, cap};
  SimulatedEngine eng(sc);
  auto n = eng.create_network(net("e"));
  auto other = eng.create_network(net("f"));
  auto proxy_spec = ctr("proxy", Role::Auxiliary, n, "e");
  proxy_spec.labels["setc.sidecar"] = "telemetry-proxy";
  auto proxy = eng.create_container(proxy_spec);
  auto far_spec = ctr("proxy", Role::Auxiliary, other, "f");
  far_spec.labels["setc.sidecar"] = "telemetry-proxy";
  auto far = eng.create_container(far_spec);
  eng.start_container(proxy);
  eng.start_container(far);
  auto a = eng.create_container(ctr("attacker", Role::Attacker, n, "e"));
  eng.start_container(a);
  auto lines = eng.stream_logs(proxy);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(telemetry::parse_proxy_log(lines)[0], cap);
  EXPECT_TRUE(eng.stream_logs(far).empty());
}

TEST(SimEngine, LedgerAndLabels) {
  SimulatedEngine eng;
  auto n = eng.create_network(net("e"));
  auto t = eng.create_container(ctr("target", Role::Vulnerable, n, "e"));
  EXPECT_EQ(eng.outstanding().size(), 2u);
  EXPECT_EQ(eng.list_labeled({{"setc.entry", "e"}}).size(), 2u);
  EXPECT_EQ(eng.list_labeled({{"setc.role", "vulnerable"}}), std::vector<std::string>{t.value});
  EXPECT_TRUE(eng.list_labeled({{"setc.entry", "x"}}).empty());
  EXPECT_THROW(eng.remove_network(n), EngineError);
  eng.remove_container(t);
  eng.remove_container(t);
  eng.remove_network(n);
  eng.remove_network(n);
  EXPECT_TRUE(eng.outstanding().empty());
  EXPECT_EQ(eng.created_count(), 2u);
  EXPECT_EQ(eng.removed_count(), 2u);
}

TEST(SimEngine, ErrorsForUnknownAndConflicts) {
  SimulatedEngine eng;
  EXPECT_THROW(eng.start_container(ContainerId{"nope"}), EngineError);
  EXPECT_THROW(eng.wait_container(ContainerId{"nope"}, 1s), EngineError);
  EXPECT_THROW(eng.stream_logs(ContainerId{"nope"}), EngineError);
  auto n = eng.create_network(net("e"));
  try {
    eng.create_network(net("e"));
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineErrorKind::Conflict);
  }
  auto spec = ctr("t", Role::Vulnerable, NetworkId{"missing"}, "e");
  try {
    eng.create_container(spec);
    FAIL();
  } catch (const EngineError& e) {
    EXPECT_EQ(e.kind(), EngineErrorKind::NotFound);
  }
  eng.remove_network(n);
}

TEST(SimEngine, FaultsFireThenDisarm) {
  SimulatedEngine eng;
  eng.inject({"create_container", "e", Role::Attacker, EngineErrorKind::Timeout, 2});
  auto n = eng.create_network(net("e"));
  EXPECT_NO_THROW(eng.remove_container(ContainerId{"x"}));
  auto t = eng.create_container(ctr("target", Role::Vulnerable, n, "e"));
  for (int i = 0; i < 2; ++i) {
    try {
      eng.create_container(ctr("a", Role::Attacker, n, "e"));
      FAIL();
    } catch (const EngineError& e) {
      EXPECT_EQ(e.kind(), EngineErrorKind::Timeout);
    }
  }
  auto a = eng.create_container(ctr("a", Role::Attacker, n, "e"));
  eng.remove_container(a);
  eng.remove_container(t);
  eng.remove_network(n);
  EXPECT_TRUE(eng.outstanding().empty());
}

TEST(SimEngine, ScenarioParsing) {
  auto sc = SimScenario::parse(R"({
    "defaults": {"attacker": {"run_duration_s": 2, "exit_codes": [1, null]}},
    "entries": {"e": {"vulnerable": {"startup_delay_s": 0.5, "logs": ["up", {"t": 1, "line": "ready"}]}}},
    "faults": [{"op": "start_container", "entry": "e", "role": "vulnerable", "kind": "conflict", "times": 3}]
  })", ".");
  auto a = sc.behavior_for("zzz", Role::Attacker);
  EXPECT_EQ(a.run_duration, 2000ms);
  EXPECT_EQ(a.exit_code_for(0), 1);
  EXPECT_EQ(a.exit_code_for(7), std::nullopt);
  auto v = sc.behavior_for("e", Role::Vulnerable);
  EXPECT_EQ(v.startup_delay, 500ms);
  ASSERT_EQ(v.logs.size(), 2u);
  EXPECT_EQ(v.logs[1].at, 1000ms);
  ASSERT_EQ(sc.faults.size(), 1u);
  EXPECT_EQ(sc.faults[0].kind, EngineErrorKind::Conflict);
  EXPECT_EQ(sc.faults[0].times, 3);
  EXPECT_EQ(sc.behavior_for("e", Role::Auxiliary), builtin_behavior(Role::Auxiliary));

  EXPECT_THROW(SimScenario::parse(R"({"bogus": 1})", "."), FixtureError);
  EXPECT_THROW(SimScenario::parse(R"({"defaults": {"wizard": {}}})", "."), FixtureError);
  EXPECT_THROW(SimScenario::parse(R"({"entries": {"e": {"attacker": {"traffic": "nope.ndjson"}}}})", "."),
               FixtureError);
}

TEST(SimEngine, ShippedScenariosLoad) {
  auto sc = SimScenario::load(setc::testing::data_dir() / "scenarios" / "cve-suite-success.json");
  std::size_t total = 0;
  for (const auto& [entry, roles] : sc.entries) {
    if (auto it = roles.find(Role::Attacker); it != roles.end()) total += it->second.traffic.size();
  }
  EXPECT_EQ(total, 16u);
  EXPECT_NO_THROW(SimScenario::load(setc::testing::data_dir() / "scenarios" / "cve-suite-flaky.json"));
  EXPECT_THROW(SimScenario::load("/nonexistent/scenario.json"), FixtureError);
}

TEST(SimEngine, TraceIsPerEntry) {
  SimulatedEngine eng;
  auto n = eng.create_network(net("e"));
  eng.remove_network(n);
  auto t = eng.trace("e");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], "create_network net_e");
  EXPECT_TRUE(eng.trace("other").empty());
}

}  // namespace
