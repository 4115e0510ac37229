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

#include "setc/orchestrator/outcome.hpp"

namespace setc::orchestrator {

namespace {

const Matcher* first_hit(const std::vector<Matcher>& matchers, const std::vector<std::string>& logs) {
  for (const auto& m : matchers) {
    for (const auto& line : logs) {
      if (m.matches(line)) return &m;
    }
  }
  return nullptr;
}

}  // namespace

OutcomeMatchers OutcomeMatchers::compile(const std::vector<std::string>& success,
                                         const std::vector<std::string>& failure) {
  OutcomeMatchers out;
  for (const auto& p : success) out.success.emplace_back(p);
  for (const auto& p : failure) out.failure.emplace_back(p);
  return out;
}

Detection detect_outcome(const engine::ContainerStatus& status, const std::vector<std::string>& logs,
                         const OutcomeMatchers& matchers) {
  if (const auto* m = first_hit(matchers.failure, logs)) {
    return {ExploitOutcome::failure("failure matcher: " + m->pattern()), "failure matcher: " + m->pattern()};
  }
  if (const auto* m = first_hit(matchers.success, logs)) {
    return {ExploitOutcome::success(), "success matcher: " + m->pattern()};
  }
  if (status.phase != engine::Phase::Exited || !status.exit_code) {
    return {ExploitOutcome::timeout(), "timeout"};
  }
  const auto code = "exit code " + std::to_string(*status.exit_code);
  if (*status.exit_code == 0) return {ExploitOutcome::success(), code};
  return {ExploitOutcome::failure(code), code};
}

}  // namespace setc::orchestrator
