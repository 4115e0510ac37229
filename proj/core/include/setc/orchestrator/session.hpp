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

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace setc::orchestrator {

enum class StateKind { Init, NetworkReady, TargetUp, SidecarsUp, Exploiting, Collecting, TornDown, Failed };

struct SessionState {
  StateKind kind = StateKind::Init;
  // Exploiting only.
  int attempt = 0;
  // Failed only.
  std::string reason;

  static SessionState init() { return {}; }
  static SessionState exploiting(int attempt) { return {StateKind::Exploiting, attempt, {}}; }
  static SessionState failed(std::string reason) { return {StateKind::Failed, 0, std::move(reason)}; }
  static SessionState of(StateKind kind) { return {kind, 0, {}}; }

  bool terminal() const noexcept { return kind == StateKind::TornDown; }
  bool operator==(const SessionState&) const = default;
};

// "Exploiting(2)", "Failed(readiness timeout)", "TornDown", ...
std::string describe(const SessionState& state);

// The lifecycle order, plus an edge from every state that is neither
// Failed nor TornDown into Failed.
bool is_legal_transition(const SessionState& from, const SessionState& to);

// True when the sequence starts at Init, every step is legal and it ends in
// TornDown.
bool is_valid_history(const std::vector<SessionState>& states);

enum class MessageKind {
  NetworkReady,
  TargetReady,
  SidecarReady,
  ExploitStarted,
  ExploitSucceeded,
  ExploitFailed,
  TelemetryFlushed,
  Aborted,
  TeardownComplete,
};

std::string_view to_string(MessageKind kind) noexcept;

struct Message {
  MessageKind kind;
  std::string entry_name;
  // ExploitStarted only.
  int attempt = 0;
  // ExploitFailed and Aborted only.
  std::string reason;

  bool operator==(const Message&) const = default;
};

// State reached after applying a message, or nullopt when the message does
// not move the state machine (ExploitFailed, TelemetryFlushed).
std::optional<SessionState> apply(const SessionState& current, const Message& message);

// Replays a message sequence from Init. Throws std::logic_error when a
// message would cause an illegal transition.
std::vector<SessionState> project(const std::vector<Message>& messages);

// In-process typed channel for one session. Senders never block.
class MessageChannel {
 public:
  void send(Message message);
  // Blocks until a message is available or the channel is closed and empty.
  std::optional<Message> receive();
  std::vector<Message> drain();
  void close();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Message> queue_;
  bool closed_ = false;
};

struct ExploitOutcome {
  enum class Kind { Success, Failure, Timeout };

  Kind kind = Kind::Failure;
  std::string reason;

  static ExploitOutcome success() { return {Kind::Success, {}}; }
  static ExploitOutcome failure(std::string reason) { return {Kind::Failure, std::move(reason)}; }
  static ExploitOutcome timeout() { return {Kind::Timeout, "timeout"}; }

  bool ok() const noexcept { return kind == Kind::Success; }
  bool operator==(const ExploitOutcome&) const = default;
};

std::string_view to_string(ExploitOutcome::Kind kind) noexcept;

struct AttemptRecord {
  int number = 0;
  ExploitOutcome outcome;
  // The matcher pattern, exit code, or timeout that decided the outcome.
  std::string decided_by;
  std::optional<int> exit_code;
};

struct StateChange {
  SessionState state;
  // Wall-clock seconds since the epoch.
  double at = 0.0;
};

struct ResourceLedger {
  std::vector<std::string> created;
  std::vector<std::string> removed;

  // Created ids not yet removed.
  std::vector<std::string> outstanding() const;
  bool balanced() const { return outstanding().empty(); }
};

// Broad reason a session ended up Failed, used for process exit codes.
enum class FailureCause { None, Exploit, Engine, Sink, Internal };

std::string_view to_string(FailureCause cause) noexcept;

struct SessionRecord {
  std::string entry_name;
  std::string session_id;
  std::vector<StateChange> history;
  std::vector<AttemptRecord> attempts;
  std::vector<Message> messages;
  ResourceLedger resources;
  std::vector<std::string> teardown_errors;
  std::size_t transactions = 0;
  FailureCause cause = FailureCause::None;

  const SessionState& state() const { return history.back().state; }
  std::vector<SessionState> states() const;
  // Success iff the session reached Collecting and was not Failed.
  bool succeeded() const;
};

struct SessionReport {
  std::string session_id;
  std::vector<SessionRecord> records;
};

void to_json(nlohmann::json& j, const SessionState& state);
void to_json(nlohmann::json& j, const Message& message);
void to_json(nlohmann::json& j, const SessionRecord& record);
void to_json(nlohmann::json& j, const SessionReport& report);

}  // namespace setc::orchestrator
