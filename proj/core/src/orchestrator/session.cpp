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

#include "setc/orchestrator/session.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace setc::orchestrator {

namespace {

std::string_view kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::Init:
      return "Init";
    case StateKind::NetworkReady:
      return "NetworkReady";
    case StateKind::TargetUp:
      return "TargetUp";
    case StateKind::SidecarsUp:
      return "SidecarsUp";
    case StateKind::Exploiting:
      return "Exploiting";
    case StateKind::Collecting:
      return "Collecting";
    case StateKind::TornDown:
      return "TornDown";
    case StateKind::Failed:
      return "Failed";
  }
  return "Init";
}

}  // namespace

std::string describe(const SessionState& state) {
  std::string out(kind_name(state.kind));
  if (state.kind == StateKind::Exploiting) out += "(" + std::to_string(state.attempt) + ")";
  if (state.kind == StateKind::Failed) out += "(" + state.reason + ")";
  return out;
}

bool is_legal_transition(const SessionState& from, const SessionState& to) {
  if (to.kind == StateKind::Failed) {
    return from.kind != StateKind::Failed && from.kind != StateKind::TornDown;
  }
  switch (from.kind) {
    case StateKind::Init:
      return to.kind == StateKind::NetworkReady;
    case StateKind::NetworkReady:
      return to.kind == StateKind::TargetUp;
    case StateKind::TargetUp:
      return to.kind == StateKind::SidecarsUp;
    case StateKind::SidecarsUp:
      return to == SessionState::exploiting(1);
    case StateKind::Exploiting:
      return (to.kind == StateKind::Exploiting && to.attempt == from.attempt + 1) ||
             to.kind == StateKind::Collecting;
    case StateKind::Collecting:
    case StateKind::Failed:
      return to.kind == StateKind::TornDown;
    case StateKind::TornDown:
      return false;
  }
  return false;
}

bool is_valid_history(const std::vector<SessionState>& states) {
  if (states.empty() || states.front() != SessionState::init() || !states.back().terminal()) return false;
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (!is_legal_transition(states[i - 1], states[i])) return false;
  }
  return true;
}

std::string_view to_string(MessageKind kind) noexcept {
  switch (kind) {
    case MessageKind::NetworkReady:
      return "NetworkReady";
    case MessageKind::TargetReady:
      return "TargetReady";
    case MessageKind::SidecarReady:
      return "SidecarReady";
    case MessageKind::ExploitStarted:
      return "ExploitStarted";
    case MessageKind::ExploitSucceeded:
      return "ExploitSucceeded";
    case MessageKind::ExploitFailed:
      return "ExploitFailed";
    case MessageKind::TelemetryFlushed:
      return "TelemetryFlushed";
    case MessageKind::Aborted:
      return "Aborted";
    case MessageKind::TeardownComplete:
      return "TeardownComplete";
  }
  return "Aborted";
}

std::optional<SessionState> apply(const SessionState&, const Message& message) {
  switch (message.kind) {
    case MessageKind::NetworkReady:
      return SessionState::of(StateKind::NetworkReady);
    case MessageKind::TargetReady:
      return SessionState::of(StateKind::TargetUp);
    case MessageKind::SidecarReady:
      return SessionState::of(StateKind::SidecarsUp);
    case MessageKind::ExploitStarted:
      return SessionState::exploiting(message.attempt);
    case MessageKind::ExploitSucceeded:
      return SessionState::of(StateKind::Collecting);
    case MessageKind::Aborted:
      return SessionState::failed(message.reason);
    case MessageKind::TeardownComplete:
      return SessionState::of(StateKind::TornDown);
    case MessageKind::ExploitFailed:
    case MessageKind::TelemetryFlushed:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<SessionState> project(const std::vector<Message>& messages) {
  std::vector<SessionState> states{SessionState::init()};
  for (const auto& m : messages) {
    auto next = apply(states.back(), m);
    if (!next) continue;
    if (!is_legal_transition(states.back(), *next)) {
      throw std::logic_error("message " + std::string(to_string(m.kind)) + " illegal in state " +
                             describe(states.back()));
    }
    states.push_back(std::move(*next));
  }
  return states;
}

void MessageChannel::send(Message message) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(message));
  }
  cv_.notify_one();
}

std::optional<Message> MessageChannel::receive() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  auto m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

std::vector<Message> MessageChannel::drain() {
  std::lock_guard lock(mu_);
  std::vector<Message> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

void MessageChannel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::string_view to_string(ExploitOutcome::Kind kind) noexcept {
  switch (kind) {
    case ExploitOutcome::Kind::Success:
      return "Success";
    case ExploitOutcome::Kind::Failure:
      return "Failure";
    case ExploitOutcome::Kind::Timeout:
      return "Timeout";
  }
  return "Failure";
}

std::vector<std::string> ResourceLedger::outstanding() const {
  std::vector<std::string> out;
  for (const auto& id : created) {
    const auto made = std::count(created.begin(), created.end(), id);
    const auto gone = std::count(removed.begin(), removed.end(), id);
    if (made > gone && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

std::string_view to_string(FailureCause cause) noexcept {
  switch (cause) {
    case FailureCause::None:
      return "none";
    case FailureCause::Exploit:
      return "exploit";
    case FailureCause::Engine:
      return "engine";
    case FailureCause::Sink:
      return "sink";
    case FailureCause::Internal:
      return "internal";
  }
  return "internal";
}

std::vector<SessionState> SessionRecord::states() const {
  std::vector<SessionState> out;
  out.reserve(history.size());
  for (const auto& h : history) out.push_back(h.state);
  return out;
}

bool SessionRecord::succeeded() const {
  bool collected = false;
  for (const auto& h : history) {
    if (h.state.kind == StateKind::Failed) return false;
    if (h.state.kind == StateKind::Collecting) collected = true;
  }
  return collected;
}

void to_json(nlohmann::json& j, const SessionState& state) {
  j = nlohmann::json{{"state", kind_name(state.kind)}};
  if (state.kind == StateKind::Exploiting) j["attempt"] = state.attempt;
  if (state.kind == StateKind::Failed) j["reason"] = state.reason;
}

void to_json(nlohmann::json& j, const Message& message) {
  j = nlohmann::json{{"kind", to_string(message.kind)}, {"entry", message.entry_name}};
  if (message.kind == MessageKind::ExploitStarted) j["attempt"] = message.attempt;
  if (!message.reason.empty()) j["reason"] = message.reason;
}

void to_json(nlohmann::json& j, const SessionRecord& record) {
  auto history = nlohmann::json::array();
  for (const auto& h : record.history) {
    nlohmann::json item = h.state;
    item["at"] = h.at;
    history.push_back(std::move(item));
  }
  auto attempts = nlohmann::json::array();
  for (const auto& a : record.attempts) {
    nlohmann::json item{{"attempt", a.number},
                        {"outcome", to_string(a.outcome.kind)},
                        {"decided_by", a.decided_by}};
    if (!a.outcome.reason.empty()) item["reason"] = a.outcome.reason;
    if (a.exit_code) item["exit_code"] = *a.exit_code;
    attempts.push_back(std::move(item));
  }
  // Failed is never the last state; report the failure reason if one occurred.
  std::string final_reason;
  for (const auto& h : record.history) {
    if (h.state.kind == StateKind::Failed) final_reason = h.state.reason;
  }
  j = nlohmann::json{
      {"entry", record.entry_name},
      {"session_id", record.session_id},
      {"outcome", record.succeeded() ? "Success" : "Failed"},
      {"final_state", describe(record.state())},
      {"history", std::move(history)},
      {"attempts", std::move(attempts)},
      {"messages", record.messages},
      {"resources",
       {{"created", record.resources.created},
        {"removed", record.resources.removed},
        {"outstanding", record.resources.outstanding()}}},
      {"teardown_errors", record.teardown_errors},
      {"transactions", record.transactions},
      {"cause", to_string(record.cause)},
  };
  if (!final_reason.empty()) j["failure_reason"] = final_reason;
}

void to_json(nlohmann::json& j, const SessionReport& report) {
  j = nlohmann::json{{"session_id", report.session_id}, {"entries", report.records}};
}

}  // namespace setc::orchestrator
