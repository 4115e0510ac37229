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

#include "setc/engine/simulated_engine.hpp"

#include <algorithm>
#include <cstdio>

#include "setc/errors.hpp"

namespace setc::engine {

namespace {

std::string label_or(const Labels& labels, std::string_view key, std::string fallback = {}) {
  auto it = labels.find(std::string(key));
  return it == labels.end() ? fallback : it->second;
}

std::string make_id(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, n);
  return buf;
}

bool labels_match(const Labels& labels, const Labels& filter) {
  return std::all_of(filter.begin(), filter.end(), [&](const auto& kv) {
    auto it = labels.find(kv.first);
    return it != labels.end() && it->second == kv.second;
  });
}

}  // namespace

SimulatedEngine::SimulatedEngine(SimScenario scenario) : scenario_(std::move(scenario)) {}

void SimulatedEngine::inject(SimFault fault) {
  std::lock_guard lock(mu_);
  scenario_.faults.push_back(std::move(fault));
}

void SimulatedEngine::maybe_fail(const std::string& op, const std::string& entry,
                                 std::optional<Role> role) {
  for (auto& f : scenario_.faults) {
    if (f.times <= 0 || f.op != op) continue;
    if (f.entry && *f.entry != entry) continue;
    if (f.role && (!role || *f.role != *role)) continue;
    --f.times;
    record(entry, op + " -> injected " + to_string(f.kind));
    throw EngineError(f.kind, "injected fault in " + op + " for entry '" + entry + "'");
  }
}

void SimulatedEngine::record(const std::string& entry, std::string line) {
  traces_[entry].push_back(std::move(line));
}

NetworkId SimulatedEngine::create_network(const NetworkSpec& spec) {
  std::lock_guard lock(mu_);
  const auto entry = label_or(spec.labels, kLabelEntry);
  maybe_fail("create_network", entry, std::nullopt);
  for (const auto& [id, n] : networks_) {
    if (n.spec.name == spec.name) {
      throw EngineError(EngineErrorKind::Conflict, "network " + spec.name + " already exists");
    }
  }
  const auto id = make_id("sim-net", next_id_++);
  networks_.emplace(id, Network{spec, entry});
  ++created_;
  const auto live = ++live_networks_per_entry_[entry];
  if (live == 1) {
    std::size_t active = 0;
    for (const auto& [e, count] : live_networks_per_entry_) active += count > 0 ? 1 : 0;
    peak_entries_ = std::max(peak_entries_, active);
  }
  record(entry, "create_network " + spec.name);
  return NetworkId{id};
}

ContainerId SimulatedEngine::create_container(const ContainerSpec& spec) {
  std::lock_guard lock(mu_);
  const auto entry = label_or(spec.labels, kLabelEntry);
  maybe_fail("create_container", entry, spec.role);
  auto net = networks_.find(spec.network);
  if (net == networks_.end()) {
    throw EngineError(EngineErrorKind::NotFound, "network " + spec.network + " does not exist");
  }
  Container c;
  c.spec = spec;
  c.entry = entry;
  c.network_id = spec.network;
  c.behavior = scenario_.behavior_for(entry, spec.role);
  c.instance = instances_[{entry, spec.role}]++;
  const auto id = make_id("sim-ctr", next_id_++);
  record(entry, "create_container " + std::string(to_string(spec.role)) + "#" +
                    std::to_string(c.instance) + " " + spec.name);
  containers_.emplace(id, std::move(c));
  ++created_;
  return ContainerId{id};
}

void SimulatedEngine::start_container(const ContainerId& id) {
  std::lock_guard lock(mu_);
  auto it = containers_.find(id.value);
  if (it == containers_.end()) {
    throw EngineError(EngineErrorKind::NotFound, "container " + id.value + " does not exist");
  }
  auto& c = it->second;
  maybe_fail("start_container", c.entry, c.spec.role);
  if (c.started) {
    if (c.phase == Phase::Exited) {
      throw EngineError(EngineErrorKind::Conflict, "container " + id.value + " already exited");
    }
    return;
  }
  c.started = true;
  c.phase = c.behavior.startup_delay.count() > 0 ? Phase::Created : Phase::Running;
  record(c.entry, "start_container " + c.spec.name);

  if (!c.behavior.traffic.empty()) {
    // Deliver the scripted traffic through every running telemetry proxy on
    // the same network, the way a real attacker's requests would pass it.
    for (auto& [pid, proxy] : containers_) {
      if (proxy.network_id != c.network_id || !proxy.started || proxy.phase == Phase::Exited) continue;
      if (label_or(proxy.spec.labels, kLabelSidecar) != kTelemetryProxySidecar) continue;
      for (const auto& capture : c.behavior.traffic) {
        proxy.emitted.push_back(telemetry::to_ndjson_line(capture));
      }
      record(c.entry, "traffic " + std::to_string(c.behavior.traffic.size()) + " -> " + proxy.spec.name);
    }
  }
}

ContainerStatus SimulatedEngine::status_of(const std::string& id, const Container& c) const {
  ContainerStatus s{ContainerId{id}, c.phase, std::nullopt};
  if (c.phase == Phase::Exited) s.exit_code = c.exit_code;
  return s;
}

ContainerStatus SimulatedEngine::wait_container(const ContainerId& id,
                                                std::chrono::milliseconds timeout) {
  std::lock_guard lock(mu_);
  auto it = containers_.find(id.value);
  if (it == containers_.end()) {
    throw EngineError(EngineErrorKind::NotFound, "container " + id.value + " does not exist");
  }
  auto& c = it->second;
  maybe_fail("wait_container", c.entry, c.spec.role);
  if (!c.started || c.phase == Phase::Exited) {
    return status_of(id.value, c);
  }
  const auto code = c.behavior.exit_code_for(c.instance);
  std::optional<LogicalMillis> exit_at;
  if (code && c.behavior.run_duration) {
    exit_at = c.behavior.startup_delay + *c.behavior.run_duration;
  }
  if (exit_at && c.clock + timeout >= *exit_at) {
    c.clock = *exit_at;
    c.phase = Phase::Exited;
    c.exit_code = code;
  } else {
    c.clock += timeout;
    c.phase = c.clock >= c.behavior.startup_delay ? Phase::Running : Phase::Created;
  }
  auto status = status_of(id.value, c);
  record(c.entry, "wait_container " + c.spec.name + " -> " + std::string(to_string(status.phase)) +
                      (status.exit_code ? " " + std::to_string(*status.exit_code) : std::string()));
  return status;
}

std::vector<std::string> SimulatedEngine::stream_logs(const ContainerId& id) {
  std::lock_guard lock(mu_);
  auto it = containers_.find(id.value);
  if (it == containers_.end()) {
    throw EngineError(EngineErrorKind::NotFound, "container " + id.value + " does not exist");
  }
  const auto& c = it->second;
  maybe_fail("stream_logs", c.entry, c.spec.role);
  std::vector<std::string> out;
  if (c.started) {
    const auto running_for = c.clock - c.behavior.startup_delay;
    for (const auto& line : c.behavior.logs_for(c.instance)) {
      if (c.phase == Phase::Exited || line.at <= running_for) out.push_back(line.text);
    }
  }
  out.insert(out.end(), c.emitted.begin(), c.emitted.end());
  return out;
}

void SimulatedEngine::remove_container(const ContainerId& id) {
  std::lock_guard lock(mu_);
  auto it = containers_.find(id.value);
  if (it == containers_.end()) return;
  maybe_fail("remove_container", it->second.entry, it->second.spec.role);
  record(it->second.entry, "remove_container " + it->second.spec.name);
  containers_.erase(it);
  ++removed_;
}

void SimulatedEngine::remove_network(const NetworkId& id) {
  std::lock_guard lock(mu_);
  auto it = networks_.find(id.value);
  if (it == networks_.end()) return;
  const auto entry = it->second.entry;
  maybe_fail("remove_network", entry, std::nullopt);
  for (const auto& [cid, c] : containers_) {
    if (c.network_id == id.value) {
      throw EngineError(EngineErrorKind::Conflict,
                        "network " + it->second.spec.name + " still has container " + cid);
    }
  }
  record(entry, "remove_network " + it->second.spec.name);
  networks_.erase(it);
  ++removed_;
  --live_networks_per_entry_[entry];
}

std::vector<std::string> SimulatedEngine::list_labeled(const Labels& filter) {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, n] : networks_) {
    if (labels_match(n.spec.labels, filter)) out.push_back(id);
  }
  for (const auto& [id, c] : containers_) {
    if (labels_match(c.spec.labels, filter)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> SimulatedEngine::outstanding() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, n] : networks_) out.push_back(id);
  for (const auto& [id, c] : containers_) out.push_back(id);
  return out;
}

std::size_t SimulatedEngine::created_count() const {
  std::lock_guard lock(mu_);
  return created_;
}

std::size_t SimulatedEngine::removed_count() const {
  std::lock_guard lock(mu_);
  return removed_;
}

std::size_t SimulatedEngine::peak_concurrent_entries() const {
  std::lock_guard lock(mu_);
  return peak_entries_;
}

std::vector<std::string> SimulatedEngine::trace(const std::string& entry) const {
  std::lock_guard lock(mu_);
  auto it = traces_.find(entry);
  return it == traces_.end() ? std::vector<std::string>{} : it->second;
}

}  // namespace setc::engine
