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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace setc::engine {

using Labels = std::map<std::string, std::string>;

// Label keys attached to every engine resource the runner creates.
inline constexpr std::string_view kLabelSession = "setc.session";
inline constexpr std::string_view kLabelEntry = "setc.entry";
inline constexpr std::string_view kLabelRole = "setc.role";
// Marks the recording proxy among the auxiliary containers of an entry.
inline constexpr std::string_view kLabelSidecar = "setc.sidecar";
inline constexpr std::string_view kTelemetryProxySidecar = "telemetry-proxy";

enum class Role { Vulnerable, Attacker, Auxiliary };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;

struct ContainerId {
  std::string value;
  auto operator<=>(const ContainerId&) const = default;
};

struct NetworkId {
  std::string value;
  auto operator<=>(const NetworkId&) const = default;
};

struct NetworkSpec {
  std::string name;
  bool internal = true;
  Labels labels;

  bool operator==(const NetworkSpec&) const = default;
};

struct ContainerSpec {
  // Host name and network alias; unique within the entry's network.
  std::string name;
  std::string image;
  std::optional<std::vector<std::string>> command;
  std::map<std::string, std::string> env;
  // Network name while in a plan, replaced by the engine network id at creation.
  std::string network;
  Labels labels;
  Role role = Role::Auxiliary;

  bool operator==(const ContainerSpec&) const = default;
};

enum class Phase { Created, Running, Exited };

std::string_view to_string(Phase phase) noexcept;

struct ContainerStatus {
  ContainerId id;
  Phase phase = Phase::Created;
  // Present iff phase == Exited.
  std::optional<int> exit_code;

  bool operator==(const ContainerStatus&) const = default;
};

void to_json(nlohmann::json& j, const NetworkSpec& spec);
void to_json(nlohmann::json& j, const ContainerSpec& spec);

}  // namespace setc::engine
