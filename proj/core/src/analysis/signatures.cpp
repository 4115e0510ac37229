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

#include "setc/analysis/signatures.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "setc/errors.hpp"
#include "setc/matcher.hpp"

namespace setc::analysis {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> default_fields_searched() { return {"url", "uri_path", "http_method", "http_user_agent"}; }

namespace {

std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

SignatureRule parse_rule(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  static const std::set<std::string> known{"entry_name", "patterns", "fields_searched", "description"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw SchemaError(path + "." + key, "unknown field");
  }
  SignatureRule rule;
  if (!j.contains("entry_name") || !j["entry_name"].is_string() || j["entry_name"].get<std::string>().empty()) {
    throw SchemaError(path + ".entry_name", "required non-empty string");
  }
  rule.entry_name = j["entry_name"];
  if (!j.contains("patterns")) throw SchemaError(path + ".patterns", "required");
  rule.patterns = string_list(j["patterns"], path + ".patterns");
  if (rule.patterns.empty()) throw SchemaError(path + ".patterns", "at least one pattern is required");
  for (std::size_t i = 0; i < rule.patterns.size(); ++i) {
    if (rule.patterns[i].empty()) throw SchemaError(path + ".patterns[" + std::to_string(i) + "]", "empty pattern");
    try {
      Matcher m(rule.patterns[i]);
    } catch (const std::exception& e) {
      throw SchemaError(path + ".patterns[" + std::to_string(i) + "]", e.what());
    }
  }
  if (j.contains("fields_searched")) {
    rule.fields_searched = string_list(j["fields_searched"], path + ".fields_searched");
    if (rule.fields_searched.empty()) throw SchemaError(path + ".fields_searched", "must not be empty");
    const auto& names = pipeline::cim_field_names();
    for (std::size_t i = 0; i < rule.fields_searched.size(); ++i) {
      if (std::find(names.begin(), names.end(), rule.fields_searched[i]) == names.end()) {
        throw SchemaError(path + ".fields_searched[" + std::to_string(i) + "]",
                          "not a CIM HTTP field: " + rule.fields_searched[i]);
      }
    }
  }
  if (j.contains("description")) {
    if (!j["description"].is_string()) throw SchemaError(path + ".description", "expected a string");
    rule.description = j["description"].get<std::string>();
  }
  return rule;
}

}  // namespace

std::vector<SignatureRule> parse_rules(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  const json* list = &doc;
  if (doc.is_object()) {
    for (const auto& [key, _] : doc.items()) {
      if (key != "rules") throw SchemaError(key, "unknown field");
    }
    if (!doc.contains("rules")) throw SchemaError("rules", "required");
    list = &doc["rules"];
  }
  if (!list->is_array()) throw SchemaError("rules", "expected an array");
  std::vector<SignatureRule> rules;
  for (std::size_t i = 0; i < list->size(); ++i) {
    rules.push_back(parse_rule((*list)[i], "rules[" + std::to_string(i) + "]"));
  }
  return rules;
}

std::vector<SignatureRule> load_rules(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot read rules file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

AnalysisOutput match_signatures(const std::vector<EntryEvents>& entries, const std::vector<SignatureRule>& rules) {
  AnalysisOutput out;

  struct CompiledRule {
    const SignatureRule* rule;
    std::vector<Matcher> matchers;
  };
  std::map<std::string, std::vector<CompiledRule>> by_entry;
  std::set<std::string> known;
  for (const auto& e : entries) known.insert(e.entry_name);
  for (const auto& rule : rules) {
    if (!known.count(rule.entry_name)) {
      out.warnings.push_back("rule for unknown entry " + rule.entry_name + " ignored");
      continue;
    }
    CompiledRule compiled{&rule, {}};
    for (const auto& p : rule.patterns) compiled.matchers.emplace_back(p);
    by_entry[rule.entry_name].push_back(std::move(compiled));
  }

  for (const auto& entry : entries) {
    auto it = by_entry.find(entry.entry_name);
    if (it == by_entry.end()) continue;
    AnalysisResult result;
    result.entry_name = entry.entry_name;
    for (std::size_t i = 0; i < entry.events.size(); ++i) {
      for (const auto& compiled : it->second) {
        for (const auto& field : compiled.rule->fields_searched) {
          const auto values = pipeline::cim_field_values(entry.events[i], field);
          if (!values) continue;
          for (const auto& m : compiled.matchers) {
            const bool hit = std::any_of(values->begin(), values->end(),
                                         [&](const std::string& v) { return m.matches(v); });
            if (hit) result.matched_events.push_back({i, field, m.pattern()});
          }
        }
      }
    }
    result.signature_in_logs = !result.matched_events.empty();
    out.results.push_back(std::move(result));
  }
  return out;
}

std::vector<EntryEvents> load_session_events(const fs::path& session_dir) {
  static constexpr std::string_view kSuffix = ".cim-http.ndjson";
  std::vector<std::string> names;
  // Run and replay manifests both list their entries in config order.
  auto manifest = session_dir / "report.json";
  if (!fs::exists(manifest)) manifest = session_dir / "replay.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest, std::ios::binary);
    const auto report = json::parse(in);
    for (const auto& e : report.at("entries")) names.push_back(e.at("entry").get<std::string>());
  } else {
    for (const auto& f : fs::directory_iterator(session_dir)) {
      const auto file = f.path().filename().string();
      if (file.size() > kSuffix.size() && file.ends_with(kSuffix)) {
        names.push_back(file.substr(0, file.size() - kSuffix.size()));
      }
    }
    std::sort(names.begin(), names.end());
  }

  std::vector<EntryEvents> out;
  for (const auto& name : names) {
    EntryEvents entry{name, {}};
    const auto path = session_dir / (name + std::string(kSuffix));
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        entry.events.push_back(pipeline::cim_from_json(json::parse(line)));
      } catch (const std::exception& e) {
        throw FixtureError(path.string(), lineno, e.what());
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void to_json(json& j, const AnalysisResult& result) {
  auto matched = json::array();
  for (const auto& m : result.matched_events) {
    matched.push_back({{"event_index", m.event_index}, {"field", m.field}, {"pattern", m.pattern}});
  }
  j = json{{"entry_name", result.entry_name},
           {"signature_in_logs", result.signature_in_logs},
           {"matched_events", std::move(matched)}};
}

}  // namespace setc::analysis
