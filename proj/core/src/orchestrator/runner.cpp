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

#include "setc/orchestrator/runner.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "setc/errors.hpp"
#include "setc/orchestrator/outcome.hpp"
#include "setc/telemetry/buffer.hpp"

namespace setc::orchestrator {

namespace {

using Clock = std::chrono::steady_clock;

double wall_seconds() {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  return static_cast<double>(us) / 1e6;
}

// Thrown inside run_entry to leave the happy path with a specific reason.
struct Abort {
  std::string reason;
  FailureCause cause;
};

class Session {
 public:
  Session(const config::ResolvedEntryPlan& plan, engine::ContainerEngine& engine, pipeline::Pipeline& pipeline,
          const MessageObserver& observer)
      : plan_(plan), engine_(engine), pipeline_(pipeline), observer_(observer) {
    record_.entry_name = plan.entry_name;
    record_.session_id = plan.session_id;
    record_.history.push_back({SessionState::init(), wall_seconds()});
    resources_.sweep_filter = {{std::string(engine::kLabelSession), plan.session_id},
                               {std::string(engine::kLabelEntry), plan.entry_name}};
  }

  SessionRecord run() {
    try {
      lifecycle();
    } catch (const Abort& a) {
      fail(a.reason, a.cause);
    } catch (const EngineError& e) {
      fail(std::string("engine ") + to_string(e.kind()) + ": " + e.what(), FailureCause::Engine);
    } catch (const SinkError& e) {
      fail(std::string("sink: ") + e.what(), FailureCause::Sink);
    } catch (const std::exception& e) {
      fail(std::string("internal: ") + e.what(), FailureCause::Internal);
    }
    record_.teardown_errors = teardown(resources_, engine_, record_.resources, plan_.runner.teardown_timeout);
    send({MessageKind::TeardownComplete, plan_.entry_name, 0, {}});
    channel_.close();
    return std::move(record_);
  }

 private:
  void lifecycle() {
    const auto matchers = OutcomeMatchers::compile(plan_.success_matchers, plan_.failure_matchers);

    auto network_spec = plan_.network;
    const auto net = engine_.create_network(network_spec);
    resources_.networks.push_back(net);
    record_.resources.created.push_back(net.value);
    send({MessageKind::NetworkReady, plan_.entry_name, 0, {}});

    const auto target = create(plan_.target, net);
    engine_.start_container(target);
    await_ready(target, "target");
    send({MessageKind::TargetReady, plan_.entry_name, 0, {}});

    proxy_ = create(plan_.proxy, net);
    std::vector<engine::ContainerId> sidecars{proxy_};
    for (const auto& spec : plan_.sidecars) sidecars.push_back(create(spec, net));
    for (const auto& id : sidecars) engine_.start_container(id);
    for (const auto& id : sidecars) await_ready(id, "sidecar");
    send({MessageKind::SidecarReady, plan_.entry_name, 0, {}});

    const int max_attempts = std::max(1, plan_.runner.max_attempts);
    for (int n = 1;; ++n) {
      send({MessageKind::ExploitStarted, plan_.entry_name, n, {}});
      const auto attacker = create(plan_.attacker, net);
      engine_.start_container(attacker);
      const auto status = engine_.wait_container(attacker, plan_.runner.exploit_timeout);
      const auto logs = engine_.stream_logs(attacker);
      const auto detection = detect_outcome(status, logs, matchers);
      record_.attempts.push_back({n, detection.outcome, detection.decided_by, status.exit_code});
      remove_container(attacker);

      if (detection.outcome.ok()) {
        send({MessageKind::ExploitSucceeded, plan_.entry_name, 0, {}});
        break;
      }
      send({MessageKind::ExploitFailed, plan_.entry_name, 0, detection.outcome.reason});
      if (n >= max_attempts) {
        throw Abort{detection.outcome.kind == ExploitOutcome::Kind::Timeout ? "timeout" : "max attempts",
                    FailureCause::Exploit};
      }
    }

    collect();
  }

  void collect() {
    telemetry::TransactionBuffer buffer;
    buffer.append(telemetry::parse_proxy_log(engine_.stream_logs(proxy_)));
    record_.transactions = buffer.flush([&](std::span<const telemetry::Capture> captures) {
      pipeline_.deliver(plan_.session_id, plan_.entry_name, captures);
    });
    send({MessageKind::TelemetryFlushed, plan_.entry_name, 0, {}});
  }

  engine::ContainerId create(const engine::ContainerSpec& spec, const engine::NetworkId& net) {
    auto resolved = spec;
    resolved.network = net.value;
    const auto id = engine_.create_container(resolved);
    resources_.containers.push_back(id);
    record_.resources.created.push_back(id.value);
    return id;
  }

  void remove_container(const engine::ContainerId& id) {
    engine_.remove_container(id);
    record_.resources.removed.push_back(id.value);
    auto& cs = resources_.containers;
    cs.erase(std::remove(cs.begin(), cs.end(), id), cs.end());
  }

  // Running for at least one grace period counts as ready.
  void await_ready(const engine::ContainerId& id, const std::string& what) {
    const auto grace = std::max(plan_.runner.readiness_grace, std::chrono::milliseconds(1));
    std::chrono::milliseconds waited{0};
    while (waited < plan_.runner.readiness_timeout) {
      const auto status = engine_.wait_container(id, grace);
      waited += grace;
      if (status.phase == engine::Phase::Running) return;
      if (status.phase == engine::Phase::Exited) throw Abort{what + " exited", FailureCause::Engine};
    }
    throw Abort{"readiness timeout", FailureCause::Engine};
  }

  void fail(std::string reason, FailureCause cause) {
    record_.cause = cause;
    send({MessageKind::Aborted, plan_.entry_name, 0, std::move(reason)});
  }

  void send(Message m) {
    if (auto next = apply(record_.history.back().state, m)) {
      record_.history.push_back({*next, wall_seconds()});
    }
    record_.messages.push_back(m);
    if (observer_) observer_(m);
    channel_.send(std::move(m));
  }

  const config::ResolvedEntryPlan& plan_;
  engine::ContainerEngine& engine_;
  pipeline::Pipeline& pipeline_;
  const MessageObserver& observer_;
  SessionRecord record_;
  SessionResources resources_;
  engine::ContainerId proxy_;
  MessageChannel channel_;
};

}  // namespace

std::vector<std::string> teardown(SessionResources& resources, engine::ContainerEngine& engine,
                                  ResourceLedger& ledger, std::chrono::milliseconds timeout) {
  std::vector<std::string> errors;
  const auto deadline = Clock::now() + timeout;

  // Ids created by a call that failed mid-flight are unknown to the ledger;
  // the label sweep finds them.
  if (!resources.sweep_filter.empty()) {
    try {
      for (auto& id : engine.list_labeled(resources.sweep_filter)) {
        const bool known_c = std::any_of(resources.containers.begin(), resources.containers.end(),
                                         [&](const auto& c) { return c.value == id; });
        const bool known_n = std::any_of(resources.networks.begin(), resources.networks.end(),
                                         [&](const auto& n) { return n.value == id; });
        if (known_c || known_n) continue;
        // The listing does not say what kind of resource this is; removing
        // an absent resource is a no-op, so try both.
        resources.containers.insert(resources.containers.begin(), engine::ContainerId{id});
        resources.networks.insert(resources.networks.begin(), engine::NetworkId{id});
      }
    } catch (const std::exception& e) {
      errors.push_back(std::string("list_labeled: ") + e.what());
    }
  }

  auto std_remove = [&](auto& pending, auto&& remove_one) {
    std::remove_reference_t<decltype(pending)> failed;
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
      try {
        remove_one(*it);
        if (std::find(ledger.created.begin(), ledger.created.end(), it->value) != ledger.created.end()) {
          ledger.removed.push_back(it->value);
        }
      } catch (const std::exception& e) {
        errors.push_back(it->value + ": " + e.what());
        failed.insert(failed.begin(), *it);
      }
    }
    pending = std::move(failed);
  };

  auto backoff = std::chrono::milliseconds(10);
  for (int pass = 0;; ++pass) {
    std_remove(resources.containers, [&](const engine::ContainerId& id) { engine.remove_container(id); });
    std_remove(resources.networks, [&](const engine::NetworkId& id) { engine.remove_network(id); });
    if (resources.containers.empty() && resources.networks.empty()) break;
    if (Clock::now() >= deadline) {
      errors.push_back("teardown timeout with " +
                       std::to_string(resources.containers.size() + resources.networks.size()) +
                       " resources left");
      break;
    }
    // The first retry is immediate; later ones back off.
    if (pass > 0) {
      std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(
          backoff, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now())));
      backoff *= 2;
    }
  }
  return errors;
}

SessionRecord run_entry(const config::ResolvedEntryPlan& plan, engine::ContainerEngine& engine,
                        pipeline::Pipeline& pipeline, const MessageObserver& observer) {
  return Session(plan, engine, pipeline, observer).run();
}

SessionReport run_document(const config::ConfigDocument& doc, engine::ContainerEngine& engine,
                           pipeline::Pipeline& pipeline, const std::string& session_id,
                           const MessageObserver& observer) {
  SessionReport report;
  report.session_id = session_id;
  report.records.resize(doc.entries.size());
  if (doc.entries.empty()) return report;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= doc.entries.size()) return;
      const auto& entry = doc.entries[i];
      try {
        const auto plan = config::expand_entry(entry, doc.runner, session_id);
        report.records[i] = run_entry(plan, engine, pipeline, observer);
      } catch (const std::exception& e) {
        // Only plan expansion can get here; nothing was created yet.
        auto& r = report.records[i];
        r.entry_name = entry.name;
        r.session_id = session_id;
        r.cause = FailureCause::Internal;
        r.history = {{SessionState::init(), wall_seconds()},
                     {SessionState::failed(std::string("internal: ") + e.what()), wall_seconds()},
                     {SessionState::of(StateKind::TornDown), wall_seconds()}};
      }
    }
  };

  const auto width = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, doc.runner.parallelism)), 1,
                                             doc.entries.size());
  if (width == 1) {
    worker();
    return report;
  }
  std::vector<std::thread> threads;
  threads.reserve(width);
  for (std::size_t t = 0; t < width; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return report;
}

}  // namespace setc::orchestrator
