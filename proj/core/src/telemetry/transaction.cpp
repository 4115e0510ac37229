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

#include "setc/telemetry/transaction.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "setc/errors.hpp"
#include "setc/text.hpp"

namespace setc::telemetry {

using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "timestamp",   "src",          "dest",  "dest_port", "http_method",       "uri_path",
    "url",         "status",       "bytes_in", "bytes_out", "http_content_type", "http_referrer",
    "http_user_agent", "host_label", "request_body"};

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::optional<std::string> validate(const HttpTransaction& tx) {
  if (tx.dest_port < 1 || tx.dest_port > 65535) {
    return "dest_port " + std::to_string(tx.dest_port) + " outside [1, 65535]";
  }
  if (tx.bytes_in < 0) return std::string("bytes_in is negative");
  if (tx.bytes_out < 0) return std::string("bytes_out is negative");
  return std::nullopt;
}

json to_json(const HttpTransaction& tx) {
  json j = json::object();
  j["timestamp"] = tx.timestamp;
  j["src"] = tx.src;
  j["dest"] = tx.dest;
  j["dest_port"] = tx.dest_port;
  j["http_method"] = tx.http_method;
  j["uri_path"] = tx.uri_path;
  j["url"] = tx.url;
  j["status"] = tx.status;
  j["bytes_in"] = tx.bytes_in;
  j["bytes_out"] = tx.bytes_out;
  j["http_content_type"] = tx.http_content_type;
  j["http_referrer"] = tx.http_referrer;
  j["http_user_agent"] = tx.http_user_agent;
  j["host_label"] = tx.host_label;
  return j;
}

json to_json(const Capture& capture) {
  json j = to_json(capture.transaction);
  if (capture.request_body) j["request_body"] = *capture.request_body;
  return j;
}

Capture capture_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) {
      throw std::invalid_argument("unknown field '" + key + "'");
    }
  }
  Capture c;
  auto& tx = c.transaction;
  tx.timestamp = field<double>(j, "timestamp");
  tx.src = field<std::string>(j, "src");
  tx.dest = field<std::string>(j, "dest");
  tx.dest_port = field<int>(j, "dest_port");
  tx.http_method = field<std::string>(j, "http_method");
  tx.uri_path = field<std::string>(j, "uri_path");
  tx.url = field<std::string>(j, "url");
  tx.status = field<int>(j, "status");
  tx.bytes_in = field<std::int64_t>(j, "bytes_in");
  tx.bytes_out = field<std::int64_t>(j, "bytes_out");
  tx.http_content_type = field<std::vector<std::string>>(j, "http_content_type");
  tx.http_referrer = field<std::string>(j, "http_referrer");
  tx.http_user_agent = field<std::string>(j, "http_user_agent");
  tx.host_label = field<std::string>(j, "host_label");
  if (j.contains("request_body")) {
    c.request_body = field<std::string>(j, "request_body");
  }
  if (auto problem = validate(tx)) {
    throw std::invalid_argument(*problem);
  }
  return c;
}

std::string to_ndjson_line(const Capture& capture) {
  return to_json(capture).dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<Capture> load_captures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FixtureError(path.string(), 0, "cannot open fixture file");
  }
  std::vector<Capture> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(capture_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw FixtureError(path.string(), number, e.what());
    } catch (const std::invalid_argument& e) {
      throw FixtureError(path.string(), number, e.what());
    }
  }
  return out;
}

std::vector<HttpTransaction> replay_fixture(const std::filesystem::path& path) {
  std::vector<HttpTransaction> out;
  for (auto& c : load_captures(path)) out.push_back(std::move(c.transaction));
  return out;
}

std::vector<Capture> parse_proxy_log(const std::vector<std::string>& lines) {
  std::vector<Capture> out;
  for (const auto& raw : lines) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() != '{') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("malformed proxy record: ") + e.what());
    }
    out.push_back(capture_from_json(j));
  }
  return out;
}

}  // namespace setc::telemetry
