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

#include "setc/pipeline/ocsf.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <utility>

#include "setc/pipeline/cim.hpp"
#include "setc/pipeline/standards.hpp"

namespace setc::pipeline {

using nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<std::string_view, int>, 8> kActivities{{
    {"CONNECT", 1},
    {"DELETE", 2},
    {"GET", 3},
    {"HEAD", 4},
    {"OPTIONS", 5},
    {"POST", 6},
    {"PUT", 7},
    {"TRACE", 8},
}};

ordered_json endpoint_json(const OcsfEndpoint& ep) {
  ordered_json j;
  j["ip"] = ep.ip;
  if (ep.port) j["port"] = *ep.port;
  if (ep.hostname) j["hostname"] = *ep.hostname;
  return j;
}

}  // namespace

int ocsf_activity_id(std::string_view http_method) {
  // Methods are case-sensitive on the wire; "get" is not GET.
  for (const auto& [name, id] : kActivities) {
    if (name == http_method) return id;
  }
  return 99;
}

std::string ocsf_activity_name(int activity_id) {
  for (const auto& [name, id] : kActivities) {
    if (id == activity_id) {
      std::string out(name);
      for (std::size_t i = 1; i < out.size(); ++i) out[i] = static_cast<char>(std::tolower(out[i]));
      return out;
    }
  }
  return activity_id == 0 ? "Unknown" : "Other";
}

OcsfHttpEvent transpose_ocsf(const telemetry::HttpTransaction& tx) {
  OcsfHttpEvent e;
  e.class_uid = standards::kOcsfHttpActivityClassUid;
  e.class_name = std::string(standards::kOcsfHttpActivityClassName);
  e.category_uid = standards::kOcsfNetworkActivityCategoryUid;
  e.category_name = std::string(standards::kOcsfNetworkActivityCategoryName);
  e.activity_id = ocsf_activity_id(tx.http_method);
  e.activity_name = ocsf_activity_name(e.activity_id);
  e.type_uid = static_cast<std::int64_t>(e.class_uid) * 100 + e.activity_id;
  e.type_name = e.class_name + ": " + e.activity_name;
  e.severity_id = standards::kOcsfSeverityInformational;
  e.severity = "Informational";
  e.time = std::llround(tx.timestamp * 1000.0);

  e.src_endpoint.ip = tx.src;
  e.dst_endpoint.ip = tx.dest;
  e.dst_endpoint.port = tx.dest_port;
  if (!tx.host_label.empty()) e.dst_endpoint.hostname = tx.host_label;

  e.http_request.http_method = tx.http_method;
  e.http_request.url_string = tx.url;
  e.http_request.path = tx.uri_path;
  e.http_request.user_agent = tx.http_user_agent;
  if (!tx.http_referrer.empty() && tx.http_referrer != "-") e.http_request.referrer = tx.http_referrer;
  e.http_request.length = tx.bytes_in;

  e.http_response.code = tx.status;
  e.http_response.length = tx.bytes_out;
  if (!tx.http_content_type.empty()) e.http_response.content_type = tx.http_content_type.front();

  e.metadata.version = std::string(standards::kOcsfVersion);
  e.metadata.product_name = "setc";
  e.metadata.vendor_name = "SETC";
  e.metadata.product_version = SETC_VERSION;

  // Sub-millisecond precision and extra content types have no attribute.
  e.unmapped["timestamp"] = tx.timestamp;
  if (tx.http_content_type.size() > 1) e.unmapped["http_content_type"] = tx.http_content_type;
  return e;
}

OcsfHttpEvent transpose_ocsf_extended(const telemetry::HttpTransaction& tx,
                                      const std::optional<std::string>& request_body) {
  auto e = transpose_ocsf(tx);
  e.unmapped["post_body_excerpt"] =
      request_body ? request_body->substr(0, kPostBodyExcerptLimit) : std::string();
  return e;
}

ordered_json to_json(const OcsfHttpEvent& e) {
  ordered_json j;
  j["class_uid"] = e.class_uid;
  j["class_name"] = e.class_name;
  j["category_uid"] = e.category_uid;
  j["category_name"] = e.category_name;
  j["activity_id"] = e.activity_id;
  j["activity_name"] = e.activity_name;
  j["type_uid"] = e.type_uid;
  j["type_name"] = e.type_name;
  j["severity_id"] = e.severity_id;
  j["severity"] = e.severity;
  j["time"] = e.time;
  j["src_endpoint"] = endpoint_json(e.src_endpoint);
  j["dst_endpoint"] = endpoint_json(e.dst_endpoint);

  ordered_json url;
  url["url_string"] = e.http_request.url_string;
  url["path"] = e.http_request.path;
  ordered_json req;
  req["http_method"] = e.http_request.http_method;
  req["url"] = std::move(url);
  req["user_agent"] = e.http_request.user_agent;
  if (e.http_request.referrer) req["referrer"] = *e.http_request.referrer;
  req["length"] = e.http_request.length;
  j["http_request"] = std::move(req);

  ordered_json resp;
  resp["code"] = e.http_response.code;
  resp["length"] = e.http_response.length;
  if (e.http_response.content_type) resp["content_type"] = *e.http_response.content_type;
  j["http_response"] = std::move(resp);

  ordered_json product;
  product["name"] = e.metadata.product_name;
  product["vendor_name"] = e.metadata.vendor_name;
  product["version"] = e.metadata.product_version;
  ordered_json metadata;
  metadata["version"] = e.metadata.version;
  metadata["product"] = std::move(product);
  j["metadata"] = std::move(metadata);
  j["unmapped"] = e.unmapped;
  return j;
}

}  // namespace setc::pipeline
