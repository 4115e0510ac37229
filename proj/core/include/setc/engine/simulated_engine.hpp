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

#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "setc/engine/engine.hpp"
#include "setc/engine/sim_scenario.hpp"

namespace setc::engine {

// Deterministic in-memory engine driven by a SimScenario. Each container has
// its own logical clock that only wait_container advances, so runs are
// reproducible regardless of wall time or thread interleaving.
//
// The engine keeps a resource ledger (created minus removed) and records a
// per-entry trace of every operation for determinism and leak checks.
class SimulatedEngine final : public ContainerEngine {
 public:
  explicit SimulatedEngine(SimScenario scenario = {});

  NetworkId create_network(const NetworkSpec& spec) override;
  ContainerId create_container(const ContainerSpec& spec) override;
  void start_container(const ContainerId& id) override;
  ContainerStatus wait_container(const ContainerId& id, std::chrono::milliseconds timeout) override;
  std::vector<std::string> stream_logs(const ContainerId& id) override;
  void remove_container(const ContainerId& id) override;
  void remove_network(const NetworkId& id) override;
  std::vector<std::string> list_labeled(const Labels& filter) override;

  void inject(SimFault fault);

  // Ids of resources created and not yet removed.
  std::vector<std::string> outstanding() const;
  std::size_t created_count() const;
  std::size_t removed_count() const;

  // Peak number of distinct entries that had a live network at once.
  std::size_t peak_concurrent_entries() const;

  std::vector<std::string> trace(const std::string& entry) const;

 private:
  struct Network {
    NetworkSpec spec;
    std::string entry;
  };

  struct Container {
    ContainerSpec spec;
    std::string entry;
    std::string network_id;
    SimBehavior behavior;
    std::size_t instance = 0;
    bool started = false;
    LogicalMillis clock{0};
    Phase phase = Phase::Created;
    std::optional<int> exit_code;
    // Lines appended at runtime (proxy telemetry).
    std::vector<std::string> emitted;
  };

  void maybe_fail(const std::string& op, const std::string& entry, std::optional<Role> role);
  void record(const std::string& entry, std::string line);
  ContainerStatus status_of(const std::string& id, const Container& c) const;

  mutable std::mutex mu_;
  SimScenario scenario_;
  std::map<std::string, Network> networks_;
  std::map<std::string, Container> containers_;
  std::map<std::pair<std::string, Role>, std::size_t> instances_;
  std::map<std::string, std::vector<std::string>> traces_;
  std::map<std::string, std::size_t> live_networks_per_entry_;
  std::size_t next_id_ = 1;
  std::size_t created_ = 0;
  std::size_t removed_ = 0;
  std::size_t peak_entries_ = 0;
};

}  // namespace setc::engine
