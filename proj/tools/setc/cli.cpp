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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "setc/analysis/signatures.hpp"
#include "setc/analysis/table.hpp"
#include "setc/config/config.hpp"
#include "setc/config/plan.hpp"
#include "setc/engine/docker_engine.hpp"
#include "setc/engine/simulated_engine.hpp"
#include "setc/errors.hpp"
#include "setc/orchestrator/report.hpp"
#include "setc/orchestrator/runner.hpp"
#include "setc/pipeline/pipeline.hpp"
#include "setc/telemetry/transaction.hpp"
#include "setc/text.hpp"

namespace setc::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string engine = "sim";
  std::string scenario;
  std::string out = "setc-out";
  std::string rules;
  std::string fixtures;
  std::string formats;
  std::optional<int> parallelism;
  std::optional<int> max_attempts;
  bool extended_cim = false;
  int verbosity = 0;
};

std::string describe_config_error(const std::exception& e) {
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    return "byte " + std::to_string(p->offset()) + ": " + p->what();
  }
  return e.what();
}

std::vector<FormatId> parse_formats(const std::string& text) {
  std::vector<FormatId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto trimmed = std::string(text::trim(item));
    if (trimmed.empty()) continue;
    auto id = parse_format_id(trimmed);
    if (!id) throw SchemaError("--formats", "unknown format " + trimmed);
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw SchemaError("--formats", "no formats given");
  return out;
}

void apply_overrides(config::ConfigDocument& doc, const Options& o) {
  if (!o.formats.empty()) doc.pipeline.formats = parse_formats(o.formats);
  if (o.parallelism) {
    if (*o.parallelism < 1) throw SchemaError("--parallelism", "must be at least 1");
    doc.runner.parallelism = *o.parallelism;
  }
  if (o.max_attempts) {
    if (*o.max_attempts < 1) throw SchemaError("--max-attempts", "must be at least 1");
    doc.runner.max_attempts = *o.max_attempts;
  }
  if (o.extended_cim) doc.pipeline.extended_cim = true;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto doc = config::load_config(o.config);
    out << o.config << ": ok, " << doc.entries.size() << " entries\n";
    for (const auto& e : doc.entries) {
      out << "  " << e.name << " (" << config::to_string(e.attack_src) << ") " << e.target_image << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << o.config << ": " << describe_config_error(e) << "\n";
    return 1;
  }
}

int exit_code_for(const orchestrator::SessionReport& report) {
  using orchestrator::FailureCause;
  auto any = [&](FailureCause c) {
    return std::any_of(report.records.begin(), report.records.end(), [&](const auto& r) { return r.cause == c; });
  };
  if (any(FailureCause::Engine) || any(FailureCause::Internal)) return kExitEngineError;
  if (any(FailureCause::Sink)) return kExitSinkError;
  if (any(FailureCause::Exploit)) return kExitExploitFailure;
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  config::ConfigDocument doc;
  try {
    doc = config::load_config(o.config);
    apply_overrides(doc, o);
  } catch (const std::exception& e) {
    err << "config: " << describe_config_error(e) << "\n";
    return kExitConfigError;
  }

  std::unique_ptr<engine::ContainerEngine> eng;
  if (o.engine == "sim") {
    if (o.scenario.empty()) {
      err << "run --engine sim requires --scenario\n";
      return kExitConfigError;
    }
    try {
      eng = std::make_unique<engine::SimulatedEngine>(engine::SimScenario::load(o.scenario));
    } catch (const std::exception& e) {
      err << "scenario: " << e.what() << "\n";
      return kExitConfigError;
    }
  } else {
    eng = std::make_unique<engine::DockerEngine>();
  }

  std::unique_ptr<pipeline::Pipeline> pipe;
  try {
    pipe = std::make_unique<pipeline::Pipeline>(doc.pipeline, fs::path(o.out));
  } catch (const std::exception& e) {
    err << "pipeline: " << e.what() << "\n";
    return kExitConfigError;
  }

  orchestrator::MessageObserver observer;
  std::mutex err_mu;
  if (o.verbosity > 0) {
    observer = [&err, &err_mu](const orchestrator::Message& m) {
      std::ostringstream line;
      line << "[" << m.entry_name << "] " << orchestrator::to_string(m.kind);
      if (m.kind == orchestrator::MessageKind::ExploitStarted) line << " " << m.attempt;
      if (!m.reason.empty()) line << ": " << m.reason;
      std::lock_guard lock(err_mu);
      err << line.str() << "\n";
    };
  }

  const auto report = orchestrator::run_document(doc, *eng, *pipe, config::generate_session_id(), observer);
  try {
    const auto path = orchestrator::write_report(report, o.out);
    out << orchestrator::render_summary(nlohmann::json(report));
    out << "report: " << path.string() << "\n";
  } catch (const std::exception& e) {
    err << "report: " << e.what() << "\n";
    return kExitSinkError;
  }
  return exit_code_for(report);
}

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
  config::PipelineSettings settings;
  std::vector<std::string> entries;
  try {
    if (!o.config.empty()) {
      auto doc = config::load_config(o.config);
      apply_overrides(doc, o);
      settings = doc.pipeline;
      for (const auto& e : doc.entries) entries.push_back(e.name);
    } else {
      if (!o.formats.empty()) settings.formats = parse_formats(o.formats);
      settings.extended_cim = o.extended_cim;
      for (const auto& f : fs::directory_iterator(o.fixtures)) {
        if (f.path().extension() == ".ndjson") entries.push_back(f.path().stem().string());
      }
      std::sort(entries.begin(), entries.end());
    }
  } catch (const std::exception& e) {
    err << "config: " << describe_config_error(e) << "\n";
    return kExitConfigError;
  }

  const auto session = config::generate_session_id();
  pipeline::Pipeline pipe(settings, o.out);
  std::size_t total = 0;
  nlohmann::json manifest{{"session_id", session}, {"mode", "replay"}, {"entries", nlohmann::json::array()}};
  for (const auto& entry : entries) {
    std::vector<telemetry::Capture> captures;
    const auto path = fs::path(o.fixtures) / (entry + ".ndjson");
    try {
      if (fs::exists(path)) captures = telemetry::load_captures(path);
    } catch (const std::exception& e) {
      err << "fixture: " << e.what() << "\n";
      return kExitConfigError;
    }
    try {
      pipe.deliver(session, entry, captures);
    } catch (const SinkError& e) {
      err << "sink: " << e.what() << "\n";
      return kExitSinkError;
    }
    total += captures.size();
    manifest["entries"].push_back({{"entry", entry}, {"transactions", captures.size()}});
    out << entry << ": " << captures.size() << " transactions\n";
  }
  const auto dir = fs::path(o.out) / session;
  fs::create_directories(dir);
  std::ofstream(dir / "replay.json") << manifest.dump(2) << "\n";
  std::ofstream(fs::path(o.out) / "LATEST") << session << "\n";
  out << "session " << session << ": " << total << " transactions replayed into " << dir.string() << "\n";
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<analysis::SignatureRule> rules;
  std::map<std::string, std::string> descriptions;
  try {
    rules = analysis::load_rules(o.rules);
    for (const auto& r : rules) {
      if (r.description) descriptions[r.entry_name] = *r.description;
    }
    if (!o.config.empty()) {
      for (const auto& e : config::load_config(o.config).entries) {
        if (!e.description.empty()) descriptions[e.name] = e.description;
      }
    }
  } catch (const std::exception& e) {
    err << "rules: " << describe_config_error(e) << "\n";
    return kExitConfigError;
  }

  fs::path session_dir;
  std::vector<analysis::EntryEvents> events;
  try {
    session_dir = orchestrator::resolve_session_dir(o.out);
    events = analysis::load_session_events(session_dir);
  } catch (const std::exception& e) {
    err << "events: " << e.what() << "\n";
    return kExitConfigError;
  }

  const auto output = analysis::match_signatures(events, rules);
  for (const auto& w : output.warnings) err << "warning: " << w << "\n";
  out << analysis::render_table(output.results, descriptions);

  const auto json_path = session_dir / "analysis.json";
  std::ofstream(json_path) << nlohmann::json{{"results", output.results}, {"warnings", output.warnings}}.dump(2)
                           << "\n";
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto dir = orchestrator::resolve_session_dir(o.out);
    out << orchestrator::render_summary(orchestrator::load_report(dir));
    return kExitOk;
  } catch (const std::exception& e) {
    err << "report: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security telemetry collection harness", "setc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SETC_VERSION));

  Options o;
  app.add_flag("-v,--verbose", o.verbosity, "Print lifecycle messages to stderr");

  auto* validate = app.add_subcommand("validate", "Check a configuration file");
  validate->add_option("--config,config", o.config, "Configuration file")->required();

  auto* run = app.add_subcommand("run", "Run every entry of a configuration");
  run->add_option("--config", o.config, "Configuration file")->required();
  run->add_option("--engine", o.engine, "Container engine")->check(CLI::IsMember({"sim", "daemon"}));
  run->add_option("--scenario", o.scenario, "Simulation scenario (sim engine)");
  run->add_option("--out", o.out, "Output directory");
  run->add_option("--formats", o.formats, "Comma-separated output formats (cim-http, ocsf-http, cef)");
  run->add_option("--parallelism", o.parallelism, "Entries in flight at once");
  run->add_option("--max-attempts", o.max_attempts, "Exploit attempts per entry");
  run->add_flag("--extended-cim", o.extended_cim, "Add post_body_excerpt to CIM events");

  auto* replay = app.add_subcommand("replay", "Push fixture traffic through the pipeline without an engine");
  replay->add_option("--fixtures,fixtures", o.fixtures, "Directory of <entry>.ndjson fixtures")->required();
  replay->add_option("--config", o.config, "Configuration file for entry order and pipeline settings");
  replay->add_option("--out", o.out, "Output directory");
  replay->add_option("--formats", o.formats, "Comma-separated output formats");
  replay->add_flag("--extended-cim", o.extended_cim, "Add post_body_excerpt to CIM events");

  auto* analyze = app.add_subcommand("analyze", "Match signature rules against CIM events");
  analyze->add_option("--out,--events", o.out, "Output or session directory");
  analyze->add_option("--rules", o.rules, "Signature rules file")->required();
  analyze->add_option("--config", o.config, "Configuration file for descriptions");

  auto* report = app.add_subcommand("report", "Summarize a session report");
  report->add_option("--out,out", o.out, "Output or session directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (validate->parsed()) return cmd_validate(o, out, err);
  if (run->parsed()) return cmd_run(o, out, err);
  if (replay->parsed()) return cmd_replay(o, out, err);
  if (analyze->parsed()) return cmd_analyze(o, out, err);
  return cmd_report(o, out, err);
}

}  // namespace setc::cli
