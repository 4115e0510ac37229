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

#include "setc/pipeline/pipeline.hpp"

#include <cstdlib>
#include <fstream>

#include "setc/errors.hpp"

namespace setc::pipeline {

namespace fs = std::filesystem;

std::string resolve_collector_token(const config::CollectorSinkConfig& cfg) {
  if (cfg.token) return *cfg.token;
  if (const char* env = std::getenv("SETC_COLLECTOR_TOKEN")) return env;
  return {};
}

Pipeline::Pipeline(const config::PipelineSettings& settings, fs::path outdir)
    : formats_(settings.formats), spool_root_(outdir), options_{settings.extended_cim} {
  for (const auto& sink : settings.sinks) {
    if (const auto* file = std::get_if<config::FileSinkConfig>(&sink)) {
      sinks_.push_back(std::make_shared<FileNdjsonSink>(file->directory ? fs::path(*file->directory) : outdir));
    } else {
      const auto& collector = std::get<config::CollectorSinkConfig>(sink);
      sinks_.push_back(std::make_shared<HttpCollectorSink>(collector, resolve_collector_token(collector)));
    }
  }
}

Pipeline::Pipeline(std::vector<FormatId> formats, std::vector<std::shared_ptr<Sink>> sinks,
                   std::optional<fs::path> spool_root, bool extended)
    : formats_(std::move(formats)), sinks_(std::move(sinks)), spool_root_(std::move(spool_root)),
      options_{extended} {}

fs::path Pipeline::spool_file(const fs::path& root, const std::string& session_id, const std::string& entry_name) {
  return root / session_id / (entry_name + ".raw.ndjson");
}

void Pipeline::write_spool(const std::string& session_id, const std::string& entry_name,
                           std::span<const telemetry::Capture> captures) {
  const auto path = spool_file(*spool_root_, session_id, entry_name);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const auto& c : captures) out << telemetry::to_ndjson_line(c) << '\n';
  out.flush();
  if (!out) throw SinkError("spool", "cannot write " + path.string());
}

PipelineReceipt Pipeline::deliver(const std::string& session_id, const std::string& entry_name,
                                  std::span<const telemetry::Capture> captures) {
  if (spool_root_) write_spool(session_id, entry_name, captures);

  std::vector<NormalizedEvent> events;
  events.reserve(captures.size() * formats_.size());
  PipelineReceipt receipt;
  for (auto format : formats_) {
    receipt.events[format] = captures.size();
    for (const auto& c : captures) events.push_back(transpose(c, format, session_id, entry_name, options_));
  }

  receipt.sinks = route(events, sinks_);
  std::vector<SinkFailure> failures;
  for (const auto& r : receipt.sinks) {
    if (!r.ok) failures.push_back({r.sink, r.error});
  }
  if (!failures.empty()) throw SinkError(std::move(failures));
  return receipt;
}

}  // namespace setc::pipeline
