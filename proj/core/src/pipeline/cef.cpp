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

#include "setc/pipeline/cef.hpp"

#include <cmath>

#include "setc/pipeline/standards.hpp"
#include "setc/text.hpp"

namespace setc::pipeline {

namespace {

std::string escape(std::string_view value, char special, bool header) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += header ? " " : "\\n";
        break;
      case '\r':
        out += header ? " " : "\\r";
        break;
      default:
        if (c == special) out.push_back('\\');
        out.push_back(c);
    }
  }
  return out;
}

void add(CefLine& line, std::string key, std::string value) {
  if (value.empty()) return;
  line.extensions.emplace_back(std::move(key), std::move(value));
}

void add_custom(CefLine& line, int slot, std::string_view label, std::string value) {
  if (value.empty()) return;
  const auto key = "cs" + std::to_string(slot);
  line.extensions.emplace_back(key, std::move(value));
  line.extensions.emplace_back(key + "Label", std::string(label));
}

}  // namespace

std::string escape_cef_header(std::string_view value) { return escape(value, '|', true); }

std::string escape_cef_extension(std::string_view value) { return escape(value, '=', false); }

std::string CefLine::render() const {
  std::string out = "CEF:" + std::to_string(version);
  for (const auto* field : {&vendor, &product, &device_version, &event_class_id, &name}) {
    out += '|';
    out += escape_cef_header(*field);
  }
  out += '|';
  out += std::to_string(severity);
  out += '|';
  bool first = true;
  for (const auto& [key, value] : extensions) {
    if (!first) out += ' ';
    first = false;
    out += key;
    out += '=';
    out += escape_cef_extension(value);
  }
  return out;
}

CefLine transpose_cef(const telemetry::HttpTransaction& tx, std::string_view entry_name) {
  CefLine line;
  line.version = standards::kCefVersion;
  line.vendor = std::string(standards::kCefVendor);
  line.product = std::string(standards::kCefProduct);
  line.device_version = SETC_VERSION;
  line.event_class_id = std::string(entry_name);
  line.name = std::string(standards::kCefName);
  line.severity = standards::kCefDefaultSeverity;

  add(line, "rt", std::to_string(std::llround(tx.timestamp * 1000.0)));
  add(line, "src", tx.src);
  add(line, "dst", tx.dest);
  add(line, "dpt", std::to_string(tx.dest_port));
  add(line, "dhost", tx.host_label);
  add(line, "requestMethod", tx.http_method);
  add(line, "request", tx.url);
  add(line, "act", std::string(standards::kCimAction));
  add(line, "in", std::to_string(tx.bytes_in));
  add(line, "out", std::to_string(tx.bytes_out));
  add(line, "requestClientApplication", tx.http_user_agent);
  if (tx.http_referrer != "-") add(line, "requestContext", tx.http_referrer);
  add_custom(line, 1, "urlLength", tx.url.empty() ? "" : std::to_string(text::char_length(tx.url)));
  add_custom(line, 2, "userAgentLength",
             tx.http_user_agent.empty() ? "" : std::to_string(text::char_length(tx.http_user_agent)));
  add_custom(line, 3, "httpStatus", std::to_string(tx.status));
  add_custom(line, 4, "contentType", tx.http_content_type.empty() ? "" : tx.http_content_type.front());
  add_custom(line, 5, "uriPath", tx.uri_path);
  return line;
}

}  // namespace setc::pipeline
