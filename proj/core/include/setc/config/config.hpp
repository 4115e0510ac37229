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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "setc/format_id.hpp"

namespace setc::config {

using Duration = std::chrono::milliseconds;

enum class AttackSource { Msf, Script };

std::string_view to_string(AttackSource src) noexcept;

// An additional auxiliary container deployed next to the target.
struct SidecarSpec {
  std::string name;
  std::string image;
  std::optional<std::vector<std::string>> command;
  std::map<std::string, std::string> env;

  bool operator==(const SidecarSpec&) const = default;
};

struct ConfigEntry {
  std::string name;
  std::string description;
  std::string target_image;
  AttackSource attack_src = AttackSource::Msf;
  // Metasploit module path (msf) or the attacker startup command (script).
  std::string exploit;
  std::optional<std::string> attacker_image;
  int target_port = 80;
  std::vector<SidecarSpec> extra_sidecars;
  std::optional<std::vector<std::string>> success_matchers;
  std::optional<std::vector<std::string>> failure_matchers;

  bool operator==(const ConfigEntry&) const = default;
};

struct RunnerSettings {
  int parallelism = 1;
  int max_attempts = 5;
  Duration exploit_timeout{std::chrono::minutes(5)};
  Duration teardown_timeout{std::chrono::seconds(30)};
  Duration readiness_timeout{std::chrono::seconds(60)};
  Duration readiness_grace{std::chrono::seconds(2)};
  std::string msf_image = "metasploitframework/metasploit";
  std::string proxy_image = "setc/recording-proxy:latest";
  int proxy_port = 8080;

  bool operator==(const RunnerSettings&) const = default;
};

// Append events to `<directory>/<session>/<entry>.<format>.ndjson`. With no
// directory the run's output directory is used.
struct FileSinkConfig {
  std::optional<std::string> directory;

  bool operator==(const FileSinkConfig&) const = default;
};

// POST NDJSON batches to a SIEM HTTP event collector.
struct CollectorSinkConfig {
  std::string endpoint;
  // Falls back to the SETC_COLLECTOR_TOKEN environment variable when unset.
  std::optional<std::string> token;
  std::string auth_scheme = "Bearer";
  std::size_t batch_size = 100;
  int max_retries = 3;
  Duration retry_backoff{200};

  bool operator==(const CollectorSinkConfig&) const = default;
};

using SinkConfig = std::variant<FileSinkConfig, CollectorSinkConfig>;

struct PipelineSettings {
  std::vector<FormatId> formats{FormatId::CimHttp};
  std::vector<SinkConfig> sinks{FileSinkConfig{}};
  // Adds `post_body_excerpt` to CIM events.
  bool extended_cim = false;

  bool operator==(const PipelineSettings&) const = default;
};

struct ConfigDocument {
  std::vector<ConfigEntry> entries;
  RunnerSettings runner;
  PipelineSettings pipeline;

  bool operator==(const ConfigDocument&) const = default;

  const ConfigEntry* find(std::string_view name) const;
};

// Parses and validates a configuration document. Unknown fields are rejected.
// Throws ParseError for malformed JSON and SchemaError for schema violations.
ConfigDocument parse_config(std::string_view raw);

// Reads the file and calls parse_config. Throws SchemaError with an empty
// path when the file cannot be read.
ConfigDocument load_config(const std::filesystem::path& path);

// Emits every field explicitly, so parse_config(serialize(doc)) == doc.
std::string serialize(const ConfigDocument& doc);

}  // namespace setc::config
