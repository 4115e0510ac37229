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

#include "setc/engine/sim_scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace setc::engine {

using nlohmann::json;

namespace {

LogicalMillis to_millis(const json& v, const std::string& what) {
  if (!v.is_number()) throw std::invalid_argument(what + ": expected seconds as a number");
  const double s = v.get<double>();
  if (!std::isfinite(s) || s < 0) throw std::invalid_argument(what + ": must be >= 0");
  return LogicalMillis(std::llround(s * 1000.0));
}

std::vector<SimLogLine> parse_logs(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw std::invalid_argument(what + ": expected an array");
  std::vector<SimLogLine> out;
  for (const auto& item : arr) {
    if (item.is_string()) {
      out.push_back({LogicalMillis(0), item.get<std::string>()});
    } else if (item.is_object() && item.contains("line")) {
      SimLogLine l;
      l.at = item.contains("t") ? to_millis(item["t"], what + ".t") : LogicalMillis(0);
      l.text = item["line"].get<std::string>();
      out.push_back(std::move(l));
    } else {
      throw std::invalid_argument(what + ": log entries are strings or {\"t\", \"line\"} objects");
    }
  }
  return out;
}

SimBehavior parse_behavior(const json& j, SimBehavior base, const std::filesystem::path& base_dir,
                           const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "startup_delay_s") {
      base.startup_delay = to_millis(value, what + "." + key);
    } else if (key == "run_duration_s") {
      if (value.is_null()) {
        base.run_duration.reset();
      } else {
        base.run_duration = to_millis(value, what + "." + key);
      }
    } else if (key == "exit_codes") {
      if (!value.is_array() || value.empty()) {
        throw std::invalid_argument(what + ".exit_codes: expected a non-empty array");
      }
      base.exit_codes.clear();
      for (const auto& code : value) {
        if (code.is_null()) {
          base.exit_codes.emplace_back(std::nullopt);
        } else if (code.is_number_integer()) {
          base.exit_codes.emplace_back(code.get<int>());
        } else {
          throw std::invalid_argument(what + ".exit_codes: entries are integers or null");
        }
      }
    } else if (key == "logs") {
      base.logs = parse_logs(value, what + ".logs");
    } else if (key == "logs_by_instance") {
      if (!value.is_array()) throw std::invalid_argument(what + ".logs_by_instance: expected an array");
      base.logs_by_instance.clear();
      for (const auto& inst : value) {
        base.logs_by_instance.push_back(parse_logs(inst, what + ".logs_by_instance"));
      }
    } else if (key == "traffic") {
      std::vector<std::string> paths;
      if (value.is_string()) {
        paths.push_back(value.get<std::string>());
      } else if (value.is_array()) {
        for (const auto& p : value) paths.push_back(p.get<std::string>());
      } else {
        throw std::invalid_argument(what + ".traffic: expected a path or list of paths");
      }
      base.traffic.clear();
      for (const auto& p : paths) {
        auto captures = telemetry::load_captures(base_dir / p);
        base.traffic.insert(base.traffic.end(), captures.begin(), captures.end());
      }
    } else {
      throw std::invalid_argument(what + ": unknown field '" + key + "'");
    }
  }
  return base;
}

Role role_key(const std::string& key, const std::string& what) {
  auto role = parse_role(key);
  if (!role) throw std::invalid_argument(what + ": unknown role '" + key + "'");
  return *role;
}

EngineErrorKind parse_kind(const std::string& s) {
  if (s == "not_found") return EngineErrorKind::NotFound;
  if (s == "conflict") return EngineErrorKind::Conflict;
  if (s == "timeout") return EngineErrorKind::Timeout;
  if (s == "transport") return EngineErrorKind::Transport;
  throw std::invalid_argument("unknown fault kind '" + s + "'");
}

SimScenario parse_impl(std::string_view text, const std::filesystem::path& base_dir) {
  const json root = json::parse(text.begin(), text.end());
  if (!root.is_object()) throw std::invalid_argument("scenario must be a JSON object");

  SimScenario sc;
  for (const auto& [key, value] : root.items()) {
    if (key == "defaults") {
      for (const auto& [role, behavior] : value.items()) {
        const Role r = role_key(role, "defaults");
        sc.defaults[r] = parse_behavior(behavior, builtin_behavior(r), base_dir, "defaults." + role);
      }
    } else if (key == "entries") {
      for (const auto& [entry, roles] : value.items()) {
        for (const auto& [role, behavior] : roles.items()) {
          const Role r = role_key(role, "entries." + entry);
          SimBehavior base = sc.defaults.contains(r) ? sc.defaults.at(r) : builtin_behavior(r);
          sc.entries[entry][r] =
              parse_behavior(behavior, std::move(base), base_dir, "entries." + entry + "." + role);
        }
      }
    } else if (key == "faults") {
      for (const auto& f : value) {
        SimFault fault;
        fault.op = f.at("op").get<std::string>();
        if (f.contains("entry")) fault.entry = f["entry"].get<std::string>();
        if (f.contains("role")) fault.role = role_key(f["role"].get<std::string>(), "faults");
        if (f.contains("kind")) fault.kind = parse_kind(f["kind"].get<std::string>());
        if (f.contains("times")) fault.times = f["times"].get<int>();
        sc.faults.push_back(std::move(fault));
      }
    } else {
      throw std::invalid_argument("unknown top-level field '" + key + "'");
    }
  }
  return sc;
}

}  // namespace

std::optional<int> SimBehavior::exit_code_for(std::size_t instance) const {
  if (exit_codes.empty()) return 0;
  return exit_codes[std::min(instance, exit_codes.size() - 1)];
}

const std::vector<SimLogLine>& SimBehavior::logs_for(std::size_t instance) const {
  if (instance < logs_by_instance.size()) return logs_by_instance[instance];
  return logs;
}

SimBehavior builtin_behavior(Role role) {
  SimBehavior b;
  if (role == Role::Attacker) {
    b.run_duration = LogicalMillis(1000);
  }
  return b;
}

SimBehavior SimScenario::behavior_for(std::string_view entry, Role role) const {
  if (auto it = entries.find(std::string(entry)); it != entries.end()) {
    if (auto rit = it->second.find(role); rit != it->second.end()) return rit->second;
  }
  if (auto it = defaults.find(role); it != defaults.end()) return it->second;
  return builtin_behavior(role);
}

SimScenario SimScenario::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
  try {
    return parse_impl(json_text, base_dir);
  } catch (const json::exception& e) {
    throw FixtureError("<scenario>", 0, e.what());
  } catch (const std::invalid_argument& e) {
    throw FixtureError("<scenario>", 0, e.what());
  }
}

SimScenario SimScenario::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError(path.string(), 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return parse_impl(text, path.parent_path());
  } catch (const json::exception& e) {
    throw FixtureError(path.string(), 0, e.what());
  } catch (const std::invalid_argument& e) {
    throw FixtureError(path.string(), 0, e.what());
  }
}

}  // namespace setc::engine
