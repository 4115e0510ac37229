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

#include "setc/orchestrator/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "setc/text.hpp"

namespace setc::orchestrator {

namespace fs = std::filesystem;

fs::path write_report(const SessionReport& report, const fs::path& outdir) {
  const auto dir = outdir / report.session_id;
  fs::create_directories(dir);
  const auto path = dir / "report.json";
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << nlohmann::json(report).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
  std::ofstream latest(outdir / "LATEST", std::ios::binary | std::ios::trunc);
  latest << report.session_id << '\n';
  return path;
}

fs::path resolve_session_dir(const fs::path& path) {
  if (fs::exists(path / "report.json") || fs::exists(path / "replay.json")) return path;
  std::ifstream latest(path / "LATEST");
  std::string id;
  if (latest && std::getline(latest, id)) {
    const auto dir = path / std::string(text::trim(id));
    if (fs::is_directory(dir)) return dir;
  }
  throw std::runtime_error(path.string() + " is neither a session directory nor an output directory with LATEST");
}

nlohmann::json load_report(const fs::path& session_dir) {
  const auto path = session_dir / "report.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

std::string render_summary(const nlohmann::json& report) {
  std::ostringstream out;
  const auto& entries = report.at("entries");
  std::size_t ok = 0;
  for (const auto& e : entries) {
    if (e.at("outcome") == "Success") ++ok;
  }
  out << "session " << report.at("session_id").get<std::string>() << ": " << ok << "/" << entries.size()
      << " entries succeeded\n";
  for (const auto& e : entries) {
    out << "\n" << e.at("entry").get<std::string>() << "  " << e.at("outcome").get<std::string>();
    if (e.contains("failure_reason")) out << " (" << e.at("failure_reason").get<std::string>() << ")";
    out << "\n  states:";
    for (const auto& h : e.at("history")) {
      out << " " << h.at("state").get<std::string>();
      if (h.contains("attempt")) out << "(" << h.at("attempt").get<int>() << ")";
    }
    out << "\n";
    for (const auto& a : e.at("attempts")) {
      out << "  attempt " << a.at("attempt").get<int>() << ": " << a.at("outcome").get<std::string>() << " by "
          << a.at("decided_by").get<std::string>() << "\n";
    }
    out << "  transactions: " << e.at("transactions").get<std::size_t>()
        << ", resources created " << e.at("resources").at("created").size() << ", outstanding "
        << e.at("resources").at("outstanding").size() << "\n";
    for (const auto& err : e.at("teardown_errors")) out << "  teardown error: " << err.get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace setc::orchestrator
