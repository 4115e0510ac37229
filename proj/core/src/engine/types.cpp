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

#include "setc/engine/types.hpp"

#include <nlohmann/json.hpp>

namespace setc::engine {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Vulnerable:
      return "vulnerable";
    case Role::Attacker:
      return "attacker";
    case Role::Auxiliary:
      return "auxiliary";
  }
  return "auxiliary";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
  if (text == "vulnerable") return Role::Vulnerable;
  if (text == "attacker") return Role::Attacker;
  if (text == "auxiliary") return Role::Auxiliary;
  return std::nullopt;
}

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Created:
      return "created";
    case Phase::Running:
      return "running";
    case Phase::Exited:
      return "exited";
  }
  return "created";
}

void to_json(nlohmann::json& j, const NetworkSpec& spec) {
  j = nlohmann::json{{"name", spec.name}, {"internal", spec.internal}, {"labels", spec.labels}};
}

void to_json(nlohmann::json& j, const ContainerSpec& spec) {
  j = nlohmann::json{{"name", spec.name},
                     {"image", spec.image},
                     {"env", spec.env},
                     {"network", spec.network},
                     {"labels", spec.labels},
                     {"role", to_string(spec.role)}};
  if (spec.command) {
    j["command"] = *spec.command;
  }
}

}  // namespace setc::engine
