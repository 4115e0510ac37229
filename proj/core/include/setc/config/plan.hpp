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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "setc/config/config.hpp"
#include "setc/engine/types.hpp"

namespace setc::config {

// Fresh identifier for one framework run (16 lowercase hex digits).
std::string generate_session_id();

std::vector<std::string> default_success_matchers(AttackSource src);
std::vector<std::string> default_failure_matchers(AttackSource src);

// Everything the runner needs to execute one entry: engine resource specs
// with labels already attached, plus the retry and outcome settings.
struct ResolvedEntryPlan {
  std::string session_id;
  std::string entry_name;
  std::string description;

  engine::NetworkSpec network;
  engine::ContainerSpec target;
  // Recording reverse proxy placed in front of the target; the attacker is
  // pointed at this container instead of the target.
  engine::ContainerSpec proxy;
  std::vector<engine::ContainerSpec> sidecars;
  engine::ContainerSpec attacker;

  // msfconsole resource script for msf entries.
  std::optional<std::string> msf_resource_script;

  std::vector<std::string> success_matchers;
  std::vector<std::string> failure_matchers;
  RunnerSettings runner;

  // Target, proxy, then extra sidecars: the containers that live for the
  // whole session.
  std::vector<const engine::ContainerSpec*> environment() const;
};

// Pure expansion of a validated entry. Identical inputs produce identical
// plans apart from the session id.
ResolvedEntryPlan expand_entry(const ConfigEntry& entry, const RunnerSettings& settings,
                               const std::string& session_id = generate_session_id());

void to_json(nlohmann::json& j, const ResolvedEntryPlan& plan);

}  // namespace setc::config
