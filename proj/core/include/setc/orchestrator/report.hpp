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
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "setc/orchestrator/session.hpp"

namespace setc::orchestrator {

// Writes `<outdir>/<session>/report.json` and points `<outdir>/LATEST` at the
// session. Returns the report path.
std::filesystem::path write_report(const SessionReport& report, const std::filesystem::path& outdir);

// Accepts either a session directory or an output directory with a LATEST
// marker. Throws std::runtime_error when neither applies.
std::filesystem::path resolve_session_dir(const std::filesystem::path& path);

nlohmann::json load_report(const std::filesystem::path& session_dir);

// Plain-text summary of a report, one block per entry.
std::string render_summary(const nlohmann::json& report);

}  // namespace setc::orchestrator
