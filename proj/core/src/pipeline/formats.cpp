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

#include "setc/pipeline/formats.hpp"

#include "setc/pipeline/cef.hpp"
#include "setc/pipeline/cim.hpp"
#include "setc/pipeline/ocsf.hpp"

namespace setc {

std::string_view to_string(FormatId id) noexcept {
  switch (id) {
    case FormatId::CimHttp:
      return "cim-http";
    case FormatId::OcsfHttp:
      return "ocsf-http";
    case FormatId::Cef:
      return "cef";
  }
  return "cim-http";
}

std::optional<FormatId> parse_format_id(std::string_view text) noexcept {
  if (text == "cim-http") return FormatId::CimHttp;
  if (text == "ocsf-http") return FormatId::OcsfHttp;
  if (text == "cef") return FormatId::Cef;
  return std::nullopt;
}

}  // namespace setc

namespace setc::pipeline {

std::string NormalizedEvent::ndjson() const {
  using nlohmann::ordered_json;
  const auto handler = ordered_json::error_handler_t::replace;
  if (format == FormatId::Cef) {
    ordered_json wrapped;
    wrapped["cef"] = payload;
    return wrapped.dump(-1, ' ', false, handler);
  }
  return payload.dump(-1, ' ', false, handler);
}

NormalizedEvent transpose(const telemetry::Capture& capture, FormatId format,
                          const std::string& session_id, const std::string& entry_name,
                          TransposeOptions options) {
  const auto& tx = capture.transaction;
  NormalizedEvent ev;
  ev.format = format;
  ev.session_id = session_id;
  ev.entry_name = entry_name;
  ev.timestamp = tx.timestamp;
  ev.host = tx.host_label;
  switch (format) {
    case FormatId::CimHttp:
      ev.payload = to_json(options.extended ? transpose_cim_extended(tx, capture.request_body)
                                            : transpose_cim(tx));
      break;
    case FormatId::OcsfHttp:
      ev.payload = to_json(options.extended ? transpose_ocsf_extended(tx, capture.request_body)
                                            : transpose_ocsf(tx));
      break;
    case FormatId::Cef:
      ev.payload = transpose_cef(tx, entry_name).render();
      break;
  }
  return ev;
}

}  // namespace setc::pipeline
