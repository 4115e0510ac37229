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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace setc::telemetry {

// One request/response pair observed by a recording proxy.
struct HttpTransaction {
  // Seconds since the Unix epoch, microsecond resolution.
  double timestamp = 0.0;
  std::string src;
  std::string dest;
  int dest_port = 80;
  // Exactly as it appeared on the request line, even when not a real method.
  std::string http_method;
  std::string uri_path;
  std::string url;
  int status = 0;
  std::int64_t bytes_in = 0;
  std::int64_t bytes_out = 0;
  std::vector<std::string> http_content_type;
  std::string http_referrer = "-";
  std::string http_user_agent;
  // Name of the target container behind the proxy.
  std::string host_label;

  bool operator==(const HttpTransaction&) const = default;
};

// A transaction together with the request body the proxy spooled. Bodies
// never reach standard-format events; they travel in the raw spool only.
struct Capture {
  HttpTransaction transaction;
  std::optional<std::string> request_body;

  bool operator==(const Capture&) const = default;
};

// Empty when valid, otherwise a description of the first violated invariant.
std::optional<std::string> validate(const HttpTransaction& tx);

nlohmann::json to_json(const Capture& capture);
nlohmann::json to_json(const HttpTransaction& tx);

// Strict decoding: unknown keys and invariant violations throw
// std::invalid_argument.
Capture capture_from_json(const nlohmann::json& j);

// One NDJSON line, no trailing newline.
std::string to_ndjson_line(const Capture& capture);

// Reads an NDJSON fixture. Blank lines are skipped. Throws FixtureError
// naming the path and the first invalid line.
std::vector<Capture> load_captures(const std::filesystem::path& path);

// The transactions of a fixture file, in file order.
std::vector<HttpTransaction> replay_fixture(const std::filesystem::path& path);

// Parses the telemetry proxy's log output: every line that is a JSON object
// becomes a capture, anything else is ignored. Throws std::invalid_argument
// for JSON lines that are not valid transactions.
std::vector<Capture> parse_proxy_log(const std::vector<std::string>& lines);

}  // namespace setc::telemetry
