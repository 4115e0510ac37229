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

#include <nlohmann/json.hpp>

#include "setc/config/config.hpp"
#include "setc/config/plan.hpp"
#include "setc/engine/simulated_engine.hpp"
#include "setc/orchestrator/outcome.hpp"
#include "setc/orchestrator/report.hpp"
#include "setc/orchestrator/runner.hpp"
#include "setc/orchestrator/session.hpp"
#include "support/memory_sink.hpp"
#include "support/paths.hpp"

namespace {

using namespace setc;
using namespace setc::orchestrator;
using namespace std::chrono_literals;
using engine::Role;
using engine::SimulatedEngine;

config::ConfigEntry msf_entry(const std::string& name) {
  config::ConfigEntry e;
  e.name = name;
  e.target_image = "vulhub/x";
  e.attack_src = config::AttackSource::Msf;
  e.exploit = "multi/http/x";
  return e;
}

config::RunnerSettings fast_runner() {
  config::RunnerSettings r;
  r.exploit_timeout = 10s;
  r.teardown_timeout = 2s;
  r.readiness_grace = 1s;
  r.readiness_timeout = 10s;
  return r;
}

telemetry::Capture capture(const std::string& path) {
  telemetry::Capture c;
  c.transaction.timestamp = 1.5;
  c.transaction.src = "10.0.0.2";
  c.transaction.dest = "10.0.0.3";
  c.transaction.http_method = "GET";
  c.transaction.uri_path = path;
  c.transaction.url = path;
  c.transaction.status = 200;
  c.transaction.host_label = "target";
  return c;
}

engine::SimBehavior attacker(std::vector<std::optional<int>> codes, std::vector<std::vector<engine::SimLogLine>> logs = {}) {
  auto b = engine::builtin_behavior(Role::Attacker);
  b.exit_codes = std::move(codes);
  b.logs_by_instance = std::move(logs);
  return b;
}

struct Harness {
  std::shared_ptr<setc::testing::MemorySink> sink = std::make_shared<setc::testing::MemorySink>();
  pipeline::Pipeline pipe{{FormatId::CimHttp}, {sink}};
};

std::vector<StateKind> kinds(const SessionRecord& r) {
  std::vector<StateKind> out;
  for (const auto& s : r.states()) out.push_back(s.kind);
  return out;
}

TEST(StateMachine, DescribeAndTransitions) {
  EXPECT_EQ(describe(SessionState::exploiting(2)), "Exploiting(2)");
  EXPECT_EQ(describe(SessionState::failed("readiness timeout")), "Failed(readiness timeout)");
  EXPECT_EQ(describe(SessionState::of(StateKind::TornDown)), "TornDown");

  const auto S = SessionState::of;
  EXPECT_TRUE(is_legal_transition(S(StateKind::Init), S(StateKind::NetworkReady)));
  EXPECT_TRUE(is_legal_transition(S(StateKind::SidecarsUp), SessionState::exploiting(1)));
  EXPECT_TRUE(is_legal_transition(SessionState::exploiting(1), SessionState::exploiting(2)));
  EXPECT_FALSE(is_legal_transition(SessionState::exploiting(2), SessionState::exploiting(1)));
  EXPECT_TRUE(is_legal_transition(SessionState::exploiting(3), S(StateKind::Collecting)));
  EXPECT_TRUE(is_legal_transition(S(StateKind::Collecting), S(StateKind::TornDown)));
  EXPECT_TRUE(is_legal_transition(S(StateKind::TargetUp), SessionState::failed("x")));
  EXPECT_TRUE(is_legal_transition(SessionState::failed("x"), S(StateKind::TornDown)));
  EXPECT_FALSE(is_legal_transition(S(StateKind::TornDown), SessionState::failed("x")));
  EXPECT_FALSE(is_legal_transition(SessionState::failed("x"), SessionState::failed("y")));
  EXPECT_FALSE(is_legal_transition(S(StateKind::Init), S(StateKind::TargetUp)));
  EXPECT_FALSE(is_legal_transition(S(StateKind::TargetUp), S(StateKind::TornDown)));
}

TEST(StateMachine, ProjectMessages) {
  std::vector<Message> ok{{MessageKind::NetworkReady, "e"},      {MessageKind::TargetReady, "e"},
                          {MessageKind::SidecarReady, "e"},      {MessageKind::ExploitStarted, "e", 1},
                          {MessageKind::ExploitFailed, "e", 0, "x"}, {MessageKind::ExploitStarted, "e", 2},
                          {MessageKind::ExploitSucceeded, "e"},  {MessageKind::TelemetryFlushed, "e"},
                          {MessageKind::TeardownComplete, "e"}};
  auto states = project(ok);
  EXPECT_TRUE(is_valid_history(states));
  EXPECT_EQ(states.back().kind, StateKind::TornDown);
  EXPECT_EQ(states[5], SessionState::exploiting(2));

  std::vector<Message> bad{{MessageKind::TargetReady, "e"}};
  EXPECT_THROW(project(bad), std::logic_error);
  EXPECT_FALSE(is_valid_history({SessionState::init()}));
}

TEST(MessageChannel, SendReceiveClose) {
  MessageChannel ch;
  ch.send({MessageKind::NetworkReady, "e"});
  std::thread t([&] {
    ch.send({MessageKind::TargetReady, "e"});
    ch.close();
  });
  std::vector<MessageKind> got;
  while (auto m = ch.receive()) got.push_back(m->kind);
  t.join();
  EXPECT_EQ(got, (std::vector<MessageKind>{MessageKind::NetworkReady, MessageKind::TargetReady}));
  EXPECT_TRUE(ch.drain().empty());
}

TEST(Outcome, Precedence) {
  auto m = OutcomeMatchers::compile({R"(re:session \d+ opened)"}, {"Exploit failed"});
  engine::ContainerStatus exited0{{"a"}, engine::Phase::Exited, 0};
  engine::ContainerStatus exited1{{"a"}, engine::Phase::Exited, 1};
  engine::ContainerStatus running{{"a"}, engine::Phase::Running, std::nullopt};

  auto d = detect_outcome(exited1, {"[*] session 3 opened"}, m);
  EXPECT_TRUE(d.outcome.ok());
  EXPECT_EQ(d.decided_by, R"(success matcher: re:session \d+ opened)");

  d = detect_outcome(exited0, {"session 1 opened", "Exploit failed: bad"}, m);
  EXPECT_EQ(d.outcome.kind, ExploitOutcome::Kind::Failure);
  EXPECT_EQ(d.decided_by, "failure matcher: Exploit failed");

  d = detect_outcome(running, {}, m);
  EXPECT_EQ(d.outcome.kind, ExploitOutcome::Kind::Timeout);
  EXPECT_EQ(d.decided_by, "timeout");

  d = detect_outcome(exited0, {"nothing"}, m);
  EXPECT_TRUE(d.outcome.ok());
  EXPECT_EQ(d.decided_by, "exit code 0");
  d = detect_outcome(exited1, {"nothing"}, m);
  EXPECT_EQ(d.outcome.kind, ExploitOutcome::Kind::Failure);
  EXPECT_EQ(d.decided_by, "exit code 1");

  EXPECT_THROW(OutcomeMatchers::compile({"re:["}, {}), std::invalid_argument);
}

TEST(Runner, SuccessfulEntryLifecycle) {
  engine::SimScenario sc;
  auto b = attacker({0});
  b.traffic = {capture("/a"), capture("/b")};
  sc.entries["e"][Role::Attacker] = b;
  SimulatedEngine eng(sc);
  Harness h;
  std::vector<MessageKind> observed;
  auto plan = config::expand_entry(msf_entry("e"), fast_runner(), "sess");
  auto rec = run_entry(plan, eng, h.pipe, [&](const Message& m) { observed.push_back(m.kind); });

  EXPECT_EQ(kinds(rec), (std::vector<StateKind>{StateKind::Init, StateKind::NetworkReady, StateKind::TargetUp,
                                                StateKind::SidecarsUp, StateKind::Exploiting, StateKind::Collecting,
                                                StateKind::TornDown}));
  EXPECT_TRUE(is_valid_history(rec.states()));
  EXPECT_TRUE(rec.succeeded());
  EXPECT_EQ(rec.cause, FailureCause::None);
  ASSERT_EQ(rec.attempts.size(), 1u);
  EXPECT_EQ(rec.attempts[0].decided_by, "exit code 0");
  EXPECT_EQ(rec.transactions, 2u);
  EXPECT_EQ(h.sink->events().size(), 2u);
  EXPECT_EQ(h.sink->events()[0].session_id, "sess");
  EXPECT_TRUE(rec.resources.balanced());
  EXPECT_TRUE(rec.teardown_errors.empty());
  EXPECT_TRUE(eng.outstanding().empty());
  EXPECT_EQ(observed.size(), rec.messages.size());
  EXPECT_EQ(observed.back(), MessageKind::TeardownComplete);
  EXPECT_EQ(project(rec.messages), rec.states());
}

TEST(Runner, RetriesUntilSuccess) {
  for (int k = 0; k <= 3; ++k) {
    std::vector<std::optional<int>> codes(k, 1);
    codes.push_back(0);
    engine::SimScenario sc;
    sc.entries["e"][Role::Attacker] = attacker(codes);
    SimulatedEngine eng(sc);
    Harness h;
    auto runner = fast_runner();
    runner.max_attempts = 5;
    auto rec = run_entry(config::expand_entry(msf_entry("e"), runner, "s"), eng, h.pipe);
    EXPECT_EQ(rec.attempts.size(), static_cast<std::size_t>(k + 1));
    EXPECT_TRUE(rec.succeeded());
    EXPECT_EQ(rec.states()[4 + k], SessionState::exploiting(k + 1));
    EXPECT_TRUE(eng.outstanding().empty());
  }
}

TEST(Runner, ExhaustedAttemptsFailButTearDown) {
  engine::SimScenario sc;
  sc.entries["e"][Role::Attacker] =
      attacker({0}, {{{0ms, "[*] Exploit completed, but no session was created."}}});
  SimulatedEngine eng(sc);
  Harness h;
  auto runner = fast_runner();
  runner.max_attempts = 1;
  auto rec = run_entry(config::expand_entry(msf_entry("e"), runner, "s"), eng, h.pipe);
  ASSERT_EQ(rec.attempts.size(), 1u);
  EXPECT_EQ(rec.attempts[0].decided_by, "failure matcher: Exploit completed, but no session was created");
  auto states = rec.states();
  EXPECT_EQ(states[states.size() - 2], SessionState::failed("max attempts"));
  EXPECT_EQ(states.back().kind, StateKind::TornDown);
  EXPECT_EQ(rec.cause, FailureCause::Exploit);
  EXPECT_FALSE(rec.succeeded());
  EXPECT_TRUE(h.sink->events().empty());
  EXPECT_TRUE(eng.outstanding().empty());
}

TEST(Runner, TimeoutIsReported) {
  engine::SimScenario sc;
  sc.entries["e"][Role::Attacker] = attacker({std::nullopt});
  SimulatedEngine eng(sc);
  Harness h;
  auto runner = fast_runner();
  runner.max_attempts = 2;
  auto rec = run_entry(config::expand_entry(msf_entry("e"), runner, "s"), eng, h.pipe);
  EXPECT_EQ(rec.attempts.size(), 2u);
  EXPECT_EQ(rec.states()[rec.states().size() - 2], SessionState::failed("timeout"));
  EXPECT_TRUE(eng.outstanding().empty());
}

TEST(Runner, ReadinessFailures) {
  {
    engine::SimScenario sc;
    auto t = engine::builtin_behavior(Role::Vulnerable);
    t.run_duration = 100ms;
    sc.entries["e"][Role::Vulnerable] = t;
    SimulatedEngine eng(sc);
    Harness h;
    auto rec = run_entry(config::expand_entry(msf_entry("e"), fast_runner(), "s"), eng, h.pipe);
    EXPECT_EQ(rec.states()[rec.states().size() - 2], SessionState::failed("target exited"));
    EXPECT_EQ(rec.cause, FailureCause::Engine);
    EXPECT_TRUE(eng.outstanding().empty());
  }
  {
    engine::SimScenario sc;
    sc.entries["e"][Role::Vulnerable].startup_delay = 1h;
    SimulatedEngine eng(sc);
    Harness h;
    auto rec = run_entry(config::expand_entry(msf_entry("e"), fast_runner(), "s"), eng, h.pipe);
    EXPECT_EQ(rec.states()[rec.states().size() - 2], SessionState::failed("readiness timeout"));
    EXPECT_TRUE(eng.outstanding().empty());
  }
}

TEST(Runner, FaultAtEveryOperationLeavesNothingBehind) {
  const std::vector<std::string> ops{"create_network", "create_container", "start_container", "wait_container",
                                     "stream_logs",    "remove_container", "remove_network"};
  for (const auto& op : ops) {
    for (auto role : {std::optional<Role>{}, std::optional<Role>{Role::Attacker}, std::optional<Role>{Role::Auxiliary}}) {
      SimulatedEngine eng;
      eng.inject({op, "e", role, EngineErrorKind::Transport, 1});
      Harness h;
      auto rec = run_entry(config::expand_entry(msf_entry("e"), fast_runner(), "s"), eng, h.pipe);
      EXPECT_EQ(rec.states().back().kind, StateKind::TornDown) << op;
      EXPECT_TRUE(is_valid_history(rec.states())) << op;
      EXPECT_TRUE(eng.outstanding().empty()) << op;
      EXPECT_TRUE(rec.resources.balanced()) << op;
    }
  }
}

TEST(Runner, SinkFailureIsReported) {
  engine::SimScenario sc;
  auto b = attacker({0});
  b.traffic = {capture("/a")};
  sc.entries["e"][Role::Attacker] = b;
  SimulatedEngine eng(sc);
  auto bad = std::make_shared<setc::testing::MemorySink>(true);
  pipeline::Pipeline pipe({FormatId::CimHttp}, {bad});
  auto rec = run_entry(config::expand_entry(msf_entry("e"), fast_runner(), "s"), eng, pipe);
  EXPECT_EQ(rec.cause, FailureCause::Sink);
  EXPECT_EQ(rec.states()[rec.states().size() - 2].kind, StateKind::Failed);
  EXPECT_TRUE(eng.outstanding().empty());
}

TEST(Teardown, RetriesAndSweeps) {
  SimulatedEngine eng;
  auto net = eng.create_network({"n", true, {{"setc.session", "s"}, {"setc.entry", "e"}}});
  engine::ContainerSpec spec;
  spec.name = "c";
  spec.network = net.value;
  spec.labels = {{"setc.session", "s"}, {"setc.entry", "e"}};
  auto known = eng.create_container(spec);
  auto orphan = eng.create_container(spec);
  eng.inject({"remove_container", "e", std::nullopt, EngineErrorKind::Transport, 2});

  SessionResources res;
  res.networks = {net};
  res.containers = {known};
  res.sweep_filter = {{"setc.session", "s"}, {"setc.entry", "e"}};
  ResourceLedger ledger;
  ledger.created = {net.value, known.value};
  auto errors = teardown(res, eng, ledger, 2s);
  EXPECT_FALSE(errors.empty());
  EXPECT_TRUE(eng.outstanding().empty()) << orphan.value;
  EXPECT_TRUE(ledger.balanced());
  EXPECT_TRUE(res.containers.empty());
  EXPECT_TRUE(res.networks.empty());
}

TEST(Teardown, GivesUpAtDeadline) {
  SimulatedEngine eng;
  auto net = eng.create_network({"n", true, {}});
  eng.inject({"remove_network", std::nullopt, std::nullopt, EngineErrorKind::Transport, 1000000});
  SessionResources res;
  res.networks = {net};
  ResourceLedger ledger;
  ledger.created = {net.value};
  auto errors = teardown(res, eng, ledger, 100ms);
  ASSERT_FALSE(errors.empty());
  EXPECT_NE(errors.back().find("teardown timeout"), std::string::npos);
  EXPECT_FALSE(ledger.balanced());
}

TEST(RunDocument, OrderAndParallelism) {
  config::ConfigDocument doc;
  for (int i = 0; i < 6; ++i) doc.entries.push_back(msf_entry("E" + std::to_string(i)));
  doc.runner = fast_runner();
  doc.runner.parallelism = 2;
  SimulatedEngine eng;
  Harness h;
  auto report = run_document(doc, eng, h.pipe, "sid");
  ASSERT_EQ(report.records.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(report.records[i].entry_name, "E" + std::to_string(i));
    EXPECT_TRUE(report.records[i].succeeded());
    EXPECT_EQ(report.records[i].session_id, "sid");
  }
  EXPECT_LE(eng.peak_concurrent_entries(), 2u);
  EXPECT_TRUE(eng.outstanding().empty());

  config::ConfigDocument empty;
  EXPECT_TRUE(run_document(empty, eng, h.pipe).records.empty());
}

TEST(Report, WriteLoadResolve) {
  setc::testing::TempDir dir;
  SimulatedEngine eng;
  Harness h;
  config::ConfigDocument doc;
  doc.entries = {msf_entry("CVE-A")};
  doc.runner = fast_runner();
  auto report = run_document(doc, eng, h.pipe, "abc");
  auto path = write_report(report, dir.path());
  EXPECT_EQ(path, dir.path() / "abc" / "report.json");
  EXPECT_EQ(resolve_session_dir(dir.path()), dir.path() / "abc");
  EXPECT_EQ(resolve_session_dir(dir.path() / "abc"), dir.path() / "abc");
  EXPECT_THROW(resolve_session_dir(dir.path() / "missing"), std::runtime_error);
  auto j = load_report(dir.path() / "abc");
  EXPECT_EQ(j["session_id"], "abc");
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["entry"], "CVE-A");
  EXPECT_EQ(j["entries"][0]["final_state"], "TornDown");
  EXPECT_EQ(j["entries"][0]["outcome"], "Success");
  auto summary = render_summary(j);
  EXPECT_NE(summary.find("CVE-A"), std::string::npos);
}

}  // namespace
