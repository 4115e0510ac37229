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

#include "setc/config/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "setc/errors.hpp"
#include "setc/matcher.hpp"

namespace setc::config {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw SchemaError(path_, "expected an object");
    }
  }

  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* get(std::string_view key) {
    seen_.emplace(key);
    auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) {
      throw SchemaError(child(key), "required field is missing");
    }
    return *v;
  }

  std::string string(std::string_view key) { return as_string(require(key), child(key)); }

  std::optional<std::string> opt_string(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) return std::nullopt;
    return as_string(*v, child(key));
  }

  template <typename Int>
  std::optional<Int> opt_integer(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      throw SchemaError(child(key), "expected an integer");
    }
    return v->get<Int>();
  }

  std::optional<bool> opt_bool(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_boolean()) {
      throw SchemaError(child(key), "expected a boolean");
    }
    return v->get<bool>();
  }

  std::optional<Duration> opt_seconds(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      throw SchemaError(child(key), "expected a number of seconds");
    }
    const double seconds = v->get<double>();
    if (!std::isfinite(seconds) || seconds <= 0) {
      throw SchemaError(child(key), "must be greater than zero");
    }
    return Duration(std::llround(seconds * 1000.0));
  }

  std::optional<std::vector<std::string>> opt_string_list(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) {
      throw SchemaError(child(key), "expected an array of strings");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      out.push_back(as_string((*v)[i], child(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) {
        throw SchemaError(child(key), "unknown field");
      }
    }
  }

 private:
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) {
      throw SchemaError(path, "expected a string");
    }
    return v.get<std::string>();
  }

  const json& node_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void check_matchers(const std::vector<std::string>& patterns, const std::string& path) {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    try {
      Matcher m(patterns[i]);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + "[" + std::to_string(i) + "]", e.what());
    }
  }
}

bool reserved_container_name(std::string_view name) {
  return name == "target" || name == "proxy" || name == "attacker";
}

SidecarSpec parse_sidecar(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  SidecarSpec s;
  s.name = r.string("name");
  if (s.name.empty()) {
    throw SchemaError(r.child("name"), "must not be empty");
  }
  if (reserved_container_name(s.name)) {
    throw SchemaError(r.child("name"), "'" + s.name + "' is reserved");
  }
  s.image = r.string("image");
  if (s.image.empty()) {
    throw SchemaError(r.child("image"), "must not be empty");
  }
  s.command = r.opt_string_list("command");
  if (const json* env = r.get("env")) {
    ObjectReader er(*env, r.child("env"));
    for (const auto& [key, value] : env->items()) {
      s.env[key] = er.string(key);
    }
    er.finish();
  }
  r.finish();
  return s;
}

ConfigEntry parse_entry(const json& node, const std::string& path) {
  ObjectReader outer(node, path);
  ConfigEntry e;
  e.name = outer.string("name");
  if (e.name.empty()) {
    throw SchemaError(outer.child("name"), "must not be empty");
  }

  // Entry fields sit under `settings`, but errors are reported against the
  // entry itself (`entries[0].exploit`) because that is how users think of them.
  ObjectReader r(outer.require("settings"), path);
  outer.finish();

  e.description = r.opt_string("description").value_or("");
  e.target_image = r.string("target_image");
  if (e.target_image.empty()) {
    throw SchemaError(r.child("target_image"), "must not be empty");
  }
  const std::string src = r.string("attack_src");
  if (src == "msf") {
    e.attack_src = AttackSource::Msf;
  } else if (src == "script") {
    e.attack_src = AttackSource::Script;
  } else {
    throw SchemaError(r.child("attack_src"), "expected \"msf\" or \"script\", got \"" + src + "\"");
  }
  e.exploit = r.string("exploit");
  e.attacker_image = r.opt_string("attacker_image");
  if (auto port = r.opt_integer<long long>("target_port")) {
    if (*port < 1 || *port > 65535) {
      throw SchemaError(r.child("target_port"), "must be in [1, 65535]");
    }
    e.target_port = static_cast<int>(*port);
  }
  if (const json* sidecars = r.get("extra_sidecars")) {
    if (!sidecars->is_array()) {
      throw SchemaError(r.child("extra_sidecars"), "expected an array");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < sidecars->size(); ++i) {
      const auto sp = r.child("extra_sidecars") + "[" + std::to_string(i) + "]";
      auto s = parse_sidecar((*sidecars)[i], sp);
      if (!names.insert(s.name).second) {
        throw SchemaError(sp + ".name", "duplicate sidecar name '" + s.name + "'");
      }
      e.extra_sidecars.push_back(std::move(s));
    }
  }
  e.success_matchers = r.opt_string_list("success_matchers");
  e.failure_matchers = r.opt_string_list("failure_matchers");
  r.finish();

  switch (e.attack_src) {
    case AttackSource::Msf:
      if (e.exploit.empty()) {
        throw SchemaError(r.child("exploit"), "msf exploit module must not be empty");
      }
      if (e.exploit.find('/') == std::string::npos) {
        throw SchemaError(r.child("exploit"),
                          "msf exploit must be a module path such as multi/http/<name>");
      }
      break;
    case AttackSource::Script:
      if (!e.attacker_image || e.attacker_image->empty()) {
        throw SchemaError(r.child("attacker_image"), "required when attack_src is \"script\"");
      }
      if (e.exploit.empty()) {
        throw SchemaError(r.child("exploit"), "script startup command must not be empty");
      }
      break;
  }
  if (e.success_matchers) check_matchers(*e.success_matchers, r.child("success_matchers"));
  if (e.failure_matchers) check_matchers(*e.failure_matchers, r.child("failure_matchers"));
  return e;
}

RunnerSettings parse_runner(const json& node) {
  ObjectReader r(node, "runner");
  RunnerSettings s;
  if (auto v = r.opt_integer<long long>("parallelism")) {
    if (*v < 1) throw SchemaError("runner.parallelism", "must be at least 1");
    s.parallelism = static_cast<int>(*v);
  }
  if (auto v = r.opt_integer<long long>("max_attempts")) {
    if (*v < 1) throw SchemaError("runner.max_attempts", "must be at least 1");
    s.max_attempts = static_cast<int>(*v);
  }
  if (auto v = r.opt_seconds("exploit_timeout_s")) s.exploit_timeout = *v;
  if (auto v = r.opt_seconds("teardown_timeout_s")) s.teardown_timeout = *v;
  if (auto v = r.opt_seconds("readiness_timeout_s")) s.readiness_timeout = *v;
  if (auto v = r.opt_seconds("readiness_grace_s")) s.readiness_grace = *v;
  if (auto v = r.opt_string("msf_image")) {
    if (v->empty()) throw SchemaError("runner.msf_image", "must not be empty");
    s.msf_image = *v;
  }
  if (auto v = r.opt_string("proxy_image")) {
    if (v->empty()) throw SchemaError("runner.proxy_image", "must not be empty");
    s.proxy_image = *v;
  }
  if (auto v = r.opt_integer<long long>("proxy_port")) {
    if (*v < 1 || *v > 65535) throw SchemaError("runner.proxy_port", "must be in [1, 65535]");
    s.proxy_port = static_cast<int>(*v);
  }
  r.finish();
  return s;
}

SinkConfig parse_sink(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  const std::string type = r.string("type");
  if (type == "file") {
    FileSinkConfig f;
    f.directory = r.opt_string("directory");
    if (f.directory && f.directory->empty()) {
      throw SchemaError(r.child("directory"), "must not be empty");
    }
    r.finish();
    return f;
  }
  if (type == "http_collector") {
    CollectorSinkConfig c;
    c.endpoint = r.string("endpoint");
    if (!(c.endpoint.starts_with("http://") || c.endpoint.starts_with("https://")) ||
        c.endpoint.find_first_of(" \t\r\n") != std::string::npos ||
        c.endpoint.size() <= std::string_view("http://").size()) {
      throw SchemaError(r.child("endpoint"), "expected an http:// or https:// URL");
    }
    c.token = r.opt_string("token");
    if (auto v = r.opt_string("auth_scheme")) {
      if (v->empty()) throw SchemaError(r.child("auth_scheme"), "must not be empty");
      c.auth_scheme = *v;
    }
    if (auto v = r.opt_integer<long long>("batch_size")) {
      if (*v < 1) throw SchemaError(r.child("batch_size"), "must be at least 1");
      c.batch_size = static_cast<std::size_t>(*v);
    }
    if (auto v = r.opt_integer<long long>("max_retries")) {
      if (*v < 0) throw SchemaError(r.child("max_retries"), "must not be negative");
      c.max_retries = static_cast<int>(*v);
    }
    if (auto v = r.opt_seconds("retry_backoff_s")) c.retry_backoff = *v;
    r.finish();
    return c;
  }
  throw SchemaError(r.child("type"), "expected \"file\" or \"http_collector\", got \"" + type + "\"");
}

PipelineSettings parse_pipeline(const json& node) {
  ObjectReader r(node, "pipeline");
  PipelineSettings s;
  if (auto formats = r.opt_string_list("formats")) {
    if (formats->empty()) throw SchemaError("pipeline.formats", "at least one format is required");
    s.formats.clear();
    for (std::size_t i = 0; i < formats->size(); ++i) {
      auto id = parse_format_id((*formats)[i]);
      const auto p = "pipeline.formats[" + std::to_string(i) + "]";
      if (!id) throw SchemaError(p, "unknown format \"" + (*formats)[i] + "\"");
      for (auto existing : s.formats) {
        if (existing == *id) throw SchemaError(p, "duplicate format");
      }
      s.formats.push_back(*id);
    }
  }
  if (const json* sinks = r.get("sinks")) {
    if (!sinks->is_array()) throw SchemaError("pipeline.sinks", "expected an array");
    if (sinks->empty()) throw SchemaError("pipeline.sinks", "at least one sink is required");
    s.sinks.clear();
    for (std::size_t i = 0; i < sinks->size(); ++i) {
      s.sinks.push_back(parse_sink((*sinks)[i], "pipeline.sinks[" + std::to_string(i) + "]"));
    }
  }
  if (auto v = r.opt_bool("extended_cim")) s.extended_cim = *v;
  r.finish();
  return s;
}

double seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

json entry_to_json(const ConfigEntry& e) {
  json settings = {{"description", e.description},
                   {"target_image", e.target_image},
                   {"attack_src", to_string(e.attack_src)},
                   {"exploit", e.exploit},
                   {"target_port", e.target_port}};
  if (e.attacker_image) settings["attacker_image"] = *e.attacker_image;
  if (!e.extra_sidecars.empty()) {
    json sidecars = json::array();
    for (const auto& s : e.extra_sidecars) {
      json j = {{"name", s.name}, {"image", s.image}, {"env", s.env}};
      if (s.command) j["command"] = *s.command;
      sidecars.push_back(std::move(j));
    }
    settings["extra_sidecars"] = std::move(sidecars);
  }
  if (e.success_matchers) settings["success_matchers"] = *e.success_matchers;
  if (e.failure_matchers) settings["failure_matchers"] = *e.failure_matchers;
  return json{{"name", e.name}, {"settings", std::move(settings)}};
}

}  // namespace

std::string_view to_string(AttackSource src) noexcept {
  return src == AttackSource::Msf ? "msf" : "script";
}

const ConfigEntry* ConfigDocument::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ConfigDocument parse_config(std::string_view raw) {
  json root;
  try {
    root = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }

  ObjectReader r(root, "");
  ConfigDocument doc;
  const json& entries = r.require("entries");
  if (!entries.is_array()) {
    throw SchemaError("entries", "expected an array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto path = "entries[" + std::to_string(i) + "]";
    auto entry = parse_entry(entries[i], path);
    if (!names.insert(entry.name).second) {
      throw SchemaError(path + ".name", "duplicate entry name '" + entry.name + "'");
    }
    doc.entries.push_back(std::move(entry));
  }
  if (const json* runner = r.get("runner")) doc.runner = parse_runner(*runner);
  if (const json* pipeline = r.get("pipeline")) doc.pipeline = parse_pipeline(*pipeline);
  r.finish();
  return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError("", "cannot read configuration file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const ConfigDocument& doc) {
  json entries = json::array();
  for (const auto& e : doc.entries) entries.push_back(entry_to_json(e));

  const auto& rs = doc.runner;
  json runner = {{"parallelism", rs.parallelism},
                 {"max_attempts", rs.max_attempts},
                 {"exploit_timeout_s", seconds(rs.exploit_timeout)},
                 {"teardown_timeout_s", seconds(rs.teardown_timeout)},
                 {"readiness_timeout_s", seconds(rs.readiness_timeout)},
                 {"readiness_grace_s", seconds(rs.readiness_grace)},
                 {"msf_image", rs.msf_image},
                 {"proxy_image", rs.proxy_image},
                 {"proxy_port", rs.proxy_port}};

  json formats = json::array();
  for (auto f : doc.pipeline.formats) formats.push_back(to_string(f));
  json sinks = json::array();
  for (const auto& sink : doc.pipeline.sinks) {
    if (const auto* f = std::get_if<FileSinkConfig>(&sink)) {
      json j = {{"type", "file"}};
      if (f->directory) j["directory"] = *f->directory;
      sinks.push_back(std::move(j));
    } else {
      const auto& c = std::get<CollectorSinkConfig>(sink);
      json j = {{"type", "http_collector"},
                {"endpoint", c.endpoint},
                {"auth_scheme", c.auth_scheme},
                {"batch_size", c.batch_size},
                {"max_retries", c.max_retries},
                {"retry_backoff_s", seconds(c.retry_backoff)}};
      if (c.token) j["token"] = *c.token;
      sinks.push_back(std::move(j));
    }
  }
  json pipeline = {{"formats", std::move(formats)},
                   {"sinks", std::move(sinks)},
                   {"extended_cim", doc.pipeline.extended_cim}};

  json root = {{"entries", std::move(entries)}, {"runner", std::move(runner)}, {"pipeline", std::move(pipeline)}};
  return root.dump(2) + "\n";
}

}  // namespace setc::config
