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

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "setc/engine/types.hpp"
#include "setc/errors.hpp"
#include "setc/telemetry/transaction.hpp"

namespace setc::engine {

using LogicalMillis = std::chrono::milliseconds;

struct SimLogLine {
  // Offset from the moment the container finished starting up.
  LogicalMillis at{0};
  std::string text;

  bool operator==(const SimLogLine&) const = default;
};

// Scripted behavior of one container role. Instances are counted per
// (entry, role): the n-th container created for that pair is instance n.
struct SimBehavior {
  LogicalMillis startup_delay{0};
  // Time spent running before exit; unset means the container runs until it
  // is removed.
  std::optional<LogicalMillis> run_duration;
  // Exit code for each instance; the last value repeats. An unset value
  // means that instance never exits (the runner sees a timeout).
  std::vector<std::optional<int>> exit_codes{0};
  std::vector<SimLogLine> logs;
  // Per-instance log override; falls back to `logs` past its end.
  std::vector<std::vector<SimLogLine>> logs_by_instance;
  // Traffic the container sends through the entry's telemetry proxy each
  // time an instance starts.
  std::vector<telemetry::Capture> traffic;

  std::optional<int> exit_code_for(std::size_t instance) const;
  const std::vector<SimLogLine>& logs_for(std::size_t instance) const;

  bool operator==(const SimBehavior&) const = default;
};

// Fault injected into an engine operation. Matches when the operation name
// is equal and the optional entry/role filters agree with the resource's
// labels; fires `times` times, then disarms.
struct SimFault {
  std::string op;
  std::optional<std::string> entry;
  std::optional<Role> role;
  EngineErrorKind kind = EngineErrorKind::Transport;
  int times = 1;
};

struct SimScenario {
  std::map<Role, SimBehavior> defaults;
  std::map<std::string, std::map<Role, SimBehavior>> entries;
  std::vector<SimFault> faults;

  // Entry override, else scenario default, else the built-in default for
  // the role (services run forever, attackers exit 0 after one second).
  SimBehavior behavior_for(std::string_view entry, Role role) const;

  // Fixture paths inside the document resolve against base_dir.
  static SimScenario parse(std::string_view json_text, const std::filesystem::path& base_dir);
  // Throws FixtureError for unreadable or invalid scenario and fixture files.
  static SimScenario load(const std::filesystem::path& path);
};

SimBehavior builtin_behavior(Role role);

}  // namespace setc::engine
