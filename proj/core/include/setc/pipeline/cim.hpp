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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setc/telemetry/transaction.hpp"

namespace setc::pipeline {

// CIM Web/HTTP record, field for field.
struct CimHttpEvent {
  double timestamp = 0.0;
  std::string action = "http";
  std::int64_t bytes = 0;
  std::int64_t bytes_in = 0;
  std::int64_t bytes_out = 0;
  std::string category = "-";
  std::string dest;
  int dest_port = 0;
  std::vector<std::string> http_content_type;
  std::string http_method;
  std::string http_referrer = "-";
  std::string http_referrer_domain = "-";
  std::string http_user_agent;
  std::int64_t http_user_agent_length = 0;
  std::string host;
  std::string src;
  int status = 0;
  std::string uri_path;
  std::string url;
  std::int64_t url_length = 0;
  // Only populated when the extended model is enabled.
  std::optional<std::string> post_body_excerpt;

  bool operator==(const CimHttpEvent&) const = default;
};

// Longest request body prefix kept in post_body_excerpt.
inline constexpr std::size_t kPostBodyExcerptLimit = 1024;

// Host part of a referrer URL, "-" when there is no referrer.
std::string referrer_domain(std::string_view referrer);

CimHttpEvent transpose_cim(const telemetry::HttpTransaction& tx);

// Extended model: also carries a prefix of the request body, if any.
CimHttpEvent transpose_cim_extended(const telemetry::HttpTransaction& tx,
                                    const std::optional<std::string>& request_body);

// Keys in a fixed order (timestamp first, then the CIM field order).
nlohmann::ordered_json to_json(const CimHttpEvent& event);

// Strict inverse of to_json. Throws std::invalid_argument.
CimHttpEvent cim_from_json(const nlohmann::json& j);

// Field values as searchable text: one value for scalar fields, one per item
// for list fields. Returns nullopt for names that are not CIM fields.
std::optional<std::vector<std::string>> cim_field_values(const CimHttpEvent& event,
                                                        std::string_view field);

const std::vector<std::string>& cim_field_names();

}  // namespace setc::pipeline
