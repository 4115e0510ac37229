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

#include <string>
#include <vector>

#include "setc/engine/types.hpp"
#include "setc/matcher.hpp"
#include "setc/orchestrator/session.hpp"

namespace setc::orchestrator {

struct OutcomeMatchers {
  std::vector<Matcher> success;
  std::vector<Matcher> failure;

  // Throws std::invalid_argument for an invalid `re:` pattern.
  static OutcomeMatchers compile(const std::vector<std::string>& success,
                                 const std::vector<std::string>& failure);
};

struct Detection {
  ExploitOutcome outcome;
  std::string decided_by;
};

// Failure matchers win over success matchers, matchers win over the exit
// code, and an attacker that never exited counts as a timeout.
Detection detect_outcome(const engine::ContainerStatus& status, const std::vector<std::string>& logs,
                         const OutcomeMatchers& matchers);

}  // namespace setc::orchestrator
