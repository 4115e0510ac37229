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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "setc/telemetry/transaction.hpp"

namespace setc::telemetry {

struct ProxyOptions {
  std::string listen_host = "0.0.0.0";
  // 0 picks an ephemeral port; see RecordingProxy::port().
  int listen_port = 8080;
  std::string upstream_host;
  int upstream_port = 80;
  // Recorded as host_label; defaults to upstream_host.
  std::string host_label;
  // Captures (with request bodies) are appended to
  // `<spool_dir>/captures.ndjson` when set.
  std::optional<std::filesystem::path> spool_dir;
  std::chrono::milliseconds io_timeout{30000};
};

using TransactionConsumer = std::function<void(const Capture&)>;

// Parsed view of an HTTP request head. Fields hold the raw bytes.
struct RequestHead {
  std::string method;
  std::string target;
  std::string version;
  std::vector<std::pair<std::string, std::string>> headers;

  // First header with this name, compared case-insensitively.
  std::optional<std::string> header(std::string_view name) const;
  std::vector<std::string> headers_named(std::string_view name) const;
};

// Never fails: a malformed request line yields whatever tokens exist.
RequestHead parse_request_head(std::string_view head);

// Path component of a request target (origin-form or absolute-form), without
// the query string.
std::string target_path(std::string_view target);

// Reverse proxy that forwards bytes unchanged and records one capture per
// request/response pair. Byte counts are measured on the wire.
class RecordingProxy {
 public:
  RecordingProxy(ProxyOptions options, TransactionConsumer emit);
  ~RecordingProxy();

  RecordingProxy(const RecordingProxy&) = delete;
  RecordingProxy& operator=(const RecordingProxy&) = delete;

  // Binds and starts accepting. Throws std::system_error on bind failure.
  void start();
  // Closes the listener and all open connections and joins workers.
  void stop();

  int port() const noexcept { return port_; }
  std::size_t transactions() const noexcept { return transactions_.load(); }

 private:
  void accept_loop();
  void serve_connection(int client_fd, std::string peer_ip);
  void record(Capture capture);

  ProxyOptions options_;
  TransactionConsumer emit_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> transactions_{0};
  std::thread acceptor_;
  std::mutex mu_;
  std::set<int> open_fds_;
  std::vector<std::thread> workers_;
  std::mutex emit_mu_;
};

// Runs a proxy until the stop token is triggered (or forever without one).
void serve_recording_proxy(const ProxyOptions& options, TransactionConsumer emit,
                           std::stop_token stop = {});

}  // namespace setc::telemetry
