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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "setc/config/config.hpp"
#include "setc/pipeline/formats.hpp"
#include "setc/pipeline/sinks.hpp"
#include "setc/telemetry/transaction.hpp"

namespace setc::pipeline {

struct PipelineReceipt {
  // Events produced per enabled format.
  std::map<FormatId, std::size_t> events;
  std::vector<DeliveryReceipt> sinks;
};

// Transposes captures into every enabled format and routes the events to
// every sink. Safe for concurrent callers delivering distinct entries.
class Pipeline {
 public:
  // File sinks without a directory write under `outdir`. The raw spool
  // `<outdir>/<session>/<entry>.raw.ndjson` is written as well.
  Pipeline(const config::PipelineSettings& settings, std::filesystem::path outdir);

  Pipeline(std::vector<FormatId> formats, std::vector<std::shared_ptr<Sink>> sinks,
           std::optional<std::filesystem::path> spool_root = std::nullopt, bool extended = false);

  // Throws SinkError naming every failed sink once all sinks were tried.
  PipelineReceipt deliver(const std::string& session_id, const std::string& entry_name,
                          std::span<const telemetry::Capture> captures);

  const std::vector<FormatId>& formats() const noexcept { return formats_; }
  const std::vector<std::shared_ptr<Sink>>& sinks() const noexcept { return sinks_; }

  static std::filesystem::path spool_file(const std::filesystem::path& root, const std::string& session_id,
                                          const std::string& entry_name);

 private:
  void write_spool(const std::string& session_id, const std::string& entry_name,
                   std::span<const telemetry::Capture> captures);

  std::vector<FormatId> formats_;
  std::vector<std::shared_ptr<Sink>> sinks_;
  std::optional<std::filesystem::path> spool_root_;
  TransposeOptions options_;
};

// Token for a collector sink: the configured value, else SETC_COLLECTOR_TOKEN.
std::string resolve_collector_token(const config::CollectorSinkConfig& cfg);

}  // namespace setc::pipeline
