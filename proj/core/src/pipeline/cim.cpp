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

#include "setc/pipeline/cim.hpp"

#include <set>
#include <stdexcept>

#include "setc/pipeline/standards.hpp"
#include "setc/text.hpp"

namespace setc::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T take(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("CIM record lacks '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("CIM field '") + key + "' has the wrong type");
  }
}

}  // namespace

const std::vector<std::string>& cim_field_names() {
  static const std::vector<std::string> kNames = {
      "timestamp",       "action",          "bytes",       "bytes_in",
      "bytes_out",       "category",        "dest",        "dest_port",
      "http_content_type", "http_method",   "http_referrer", "http_referrer_domain",
      "http_user_agent", "http_user_agent_length", "host", "src",
      "status",          "uri_path",        "url",         "url_length"};
  return kNames;
}

std::string referrer_domain(std::string_view referrer) {
  if (referrer.empty() || referrer == "-") return "-";
  std::string_view rest = referrer;
  if (auto scheme = rest.find("://"); scheme != std::string_view::npos) rest = rest.substr(scheme + 3);
  rest = rest.substr(0, rest.find_first_of("/?#"));
  if (auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
  if (!rest.empty() && rest.front() == '[') {
    rest = rest.substr(0, rest.find(']') + 1);
  } else if (auto colon = rest.find(':'); colon != std::string_view::npos) {
    rest = rest.substr(0, colon);
  }
  return rest.empty() ? std::string("-") : std::string(rest);
}

CimHttpEvent transpose_cim(const telemetry::HttpTransaction& tx) {
  CimHttpEvent e;
  e.timestamp = tx.timestamp;
  e.action = std::string(standards::kCimAction);
  e.bytes_in = tx.bytes_in;
  e.bytes_out = tx.bytes_out;
  e.bytes = tx.bytes_in + tx.bytes_out;
  e.category = "-";
  e.dest = tx.dest;
  e.dest_port = tx.dest_port;
  e.http_content_type = tx.http_content_type;
  e.http_method = tx.http_method;
  e.http_referrer = tx.http_referrer.empty() ? "-" : tx.http_referrer;
  e.http_referrer_domain = referrer_domain(e.http_referrer);
  e.http_user_agent = tx.http_user_agent;
  e.http_user_agent_length = static_cast<std::int64_t>(text::char_length(tx.http_user_agent));
  e.host = tx.host_label;
  e.src = tx.src;
  e.status = tx.status;
  e.uri_path = tx.uri_path;
  e.url = tx.url;
  e.url_length = static_cast<std::int64_t>(text::char_length(tx.url));
  return e;
}

CimHttpEvent transpose_cim_extended(const telemetry::HttpTransaction& tx,
                                    const std::optional<std::string>& request_body) {
  auto e = transpose_cim(tx);
  if (request_body && !request_body->empty()) {
    e.post_body_excerpt = request_body->substr(0, kPostBodyExcerptLimit);
  } else {
    e.post_body_excerpt = "";
  }
  return e;
}

ordered_json to_json(const CimHttpEvent& e) {
  ordered_json j;
  j["timestamp"] = e.timestamp;
  j["action"] = e.action;
  j["bytes"] = e.bytes;
  j["bytes_in"] = e.bytes_in;
  j["bytes_out"] = e.bytes_out;
  j["category"] = e.category;
  j["dest"] = e.dest;
  j["dest_port"] = e.dest_port;
  j["http_content_type"] = e.http_content_type;
  j["http_method"] = e.http_method;
  j["http_referrer"] = e.http_referrer;
  j["http_referrer_domain"] = e.http_referrer_domain;
  j["http_user_agent"] = e.http_user_agent;
  j["http_user_agent_length"] = e.http_user_agent_length;
  j["host"] = e.host;
  j["src"] = e.src;
  j["status"] = e.status;
  j["uri_path"] = e.uri_path;
  j["url"] = e.url;
  j["url_length"] = e.url_length;
  if (e.post_body_excerpt) j["post_body_excerpt"] = *e.post_body_excerpt;
  return j;
}

CimHttpEvent cim_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("CIM record must be an object");
  static const std::set<std::string, std::less<>> kKnown = [] {
    std::set<std::string, std::less<>> s(cim_field_names().begin(), cim_field_names().end());
    s.insert("post_body_excerpt");
    return s;
  }();
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) throw std::invalid_argument("unknown CIM field '" + key + "'");
  }
  CimHttpEvent e;
  e.timestamp = take<double>(j, "timestamp");
  e.action = take<std::string>(j, "action");
  e.bytes = take<std::int64_t>(j, "bytes");
  e.bytes_in = take<std::int64_t>(j, "bytes_in");
  e.bytes_out = take<std::int64_t>(j, "bytes_out");
  e.category = take<std::string>(j, "category");
  e.dest = take<std::string>(j, "dest");
  e.dest_port = take<int>(j, "dest_port");
  e.http_content_type = take<std::vector<std::string>>(j, "http_content_type");
  e.http_method = take<std::string>(j, "http_method");
  e.http_referrer = take<std::string>(j, "http_referrer");
  e.http_referrer_domain = take<std::string>(j, "http_referrer_domain");
  e.http_user_agent = take<std::string>(j, "http_user_agent");
  e.http_user_agent_length = take<std::int64_t>(j, "http_user_agent_length");
  e.host = take<std::string>(j, "host");
  e.src = take<std::string>(j, "src");
  e.status = take<int>(j, "status");
  e.uri_path = take<std::string>(j, "uri_path");
  e.url = take<std::string>(j, "url");
  e.url_length = take<std::int64_t>(j, "url_length");
  if (j.contains("post_body_excerpt")) e.post_body_excerpt = take<std::string>(j, "post_body_excerpt");
  return e;
}

std::optional<std::vector<std::string>> cim_field_values(const CimHttpEvent& e,
                                                        std::string_view field) {
  using Values = std::vector<std::string>;
  if (field == "timestamp") return Values{json(e.timestamp).dump()};
  if (field == "action") return Values{e.action};
  if (field == "bytes") return Values{std::to_string(e.bytes)};
  if (field == "bytes_in") return Values{std::to_string(e.bytes_in)};
  if (field == "bytes_out") return Values{std::to_string(e.bytes_out)};
  if (field == "category") return Values{e.category};
  if (field == "dest") return Values{e.dest};
  if (field == "dest_port") return Values{std::to_string(e.dest_port)};
  if (field == "http_content_type") return e.http_content_type;
  if (field == "http_method") return Values{e.http_method};
  if (field == "http_referrer") return Values{e.http_referrer};
  if (field == "http_referrer_domain") return Values{e.http_referrer_domain};
  if (field == "http_user_agent") return Values{e.http_user_agent};
  if (field == "http_user_agent_length") return Values{std::to_string(e.http_user_agent_length)};
  if (field == "host") return Values{e.host};
  if (field == "src") return Values{e.src};
  if (field == "status") return Values{std::to_string(e.status)};
  if (field == "uri_path") return Values{e.uri_path};
  if (field == "url") return Values{e.url};
  if (field == "url_length") return Values{std::to_string(e.url_length)};
  if (field == "post_body_excerpt") {
    return e.post_body_excerpt ? Values{*e.post_body_excerpt} : Values{};
  }
  return std::nullopt;
}

}  // namespace setc::pipeline
