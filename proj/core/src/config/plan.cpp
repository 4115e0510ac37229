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

#include "setc/config/plan.hpp"

#include <cctype>

#include <nlohmann/json.hpp>

#include "setc/text.hpp"

namespace setc::config {

namespace {

// Docker object names allow [a-zA-Z0-9_.-]; anything else becomes '_'.
std::string sanitize(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (unsigned char c : name) {
    out.push_back(std::isalnum(c) || c == '_' || c == '.' || c == '-' ? static_cast<char>(c) : '_');
  }
  return out;
}

engine::Labels labels_for(const std::string& session_id, const std::string& entry,
                          std::string_view role) {
  return {{std::string(engine::kLabelSession), session_id},
          {std::string(engine::kLabelEntry), entry},
          {std::string(engine::kLabelRole), std::string(role)}};
}

engine::ContainerSpec container(std::string name, std::string image, engine::Role role,
                                const std::string& network, const std::string& session_id,
                                const std::string& entry) {
  engine::ContainerSpec spec;
  spec.name = std::move(name);
  spec.image = std::move(image);
  spec.network = network;
  spec.role = role;
  spec.labels = labels_for(session_id, entry, engine::to_string(role));
  return spec;
}

}  // namespace

std::string generate_session_id() { return text::random_hex(16); }

std::vector<std::string> default_success_matchers(AttackSource src) {
  if (src == AttackSource::Msf) {
    return {R"(re:session \d+ opened)"};
  }
  return {};
}

std::vector<std::string> default_failure_matchers(AttackSource src) {
  if (src == AttackSource::Msf) {
    return {"Exploit completed, but no session was created", "Exploit aborted due to failure",
            "Exploit failed"};
  }
  return {};
}

std::vector<const engine::ContainerSpec*> ResolvedEntryPlan::environment() const {
  std::vector<const engine::ContainerSpec*> out{&target, &proxy};
  for (const auto& s : sidecars) out.push_back(&s);
  return out;
}

ResolvedEntryPlan expand_entry(const ConfigEntry& entry, const RunnerSettings& settings,
                               const std::string& session_id) {
  ResolvedEntryPlan plan;
  plan.session_id = session_id;
  plan.entry_name = entry.name;
  plan.description = entry.description;
  plan.runner = settings;

  const std::string suffix = sanitize(entry.name);
  plan.network.name = "setc_" + session_id + "_" + suffix;
  plan.network.internal = true;
  plan.network.labels = labels_for(session_id, entry.name, "network");

  const std::string& net = plan.network.name;
  const std::string target_host = "target_" + suffix;
  const std::string proxy_host = "proxy_" + suffix;
  const std::string proxy_port = std::to_string(settings.proxy_port);

  plan.target = container(target_host, entry.target_image, engine::Role::Vulnerable, net,
                          session_id, entry.name);

  plan.proxy = container(proxy_host, settings.proxy_image, engine::Role::Auxiliary, net,
                         session_id, entry.name);
  plan.proxy.labels[std::string(engine::kLabelSidecar)] = std::string(engine::kTelemetryProxySidecar);
  plan.proxy.command = std::vector<std::string>{
      "setc-proxy",   "--listen",     "0.0.0.0:" + proxy_port,
      "--upstream",   target_host + ":" + std::to_string(entry.target_port),
      "--host-label", target_host,    "--spool", "/spool"};

  for (const auto& s : entry.extra_sidecars) {
    auto spec = container(s.name + "_" + suffix, s.image, engine::Role::Auxiliary, net, session_id,
                          entry.name);
    spec.command = s.command;
    spec.env = s.env;
    plan.sidecars.push_back(std::move(spec));
  }

  const std::map<std::string, std::string> target_env{
      {"SETC_TARGET_HOST", proxy_host},
      {"SETC_TARGET_PORT", proxy_port},
      {"SETC_TARGET_URL", "http://" + proxy_host + ":" + proxy_port}};

  switch (entry.attack_src) {
    case AttackSource::Msf: {
      plan.attacker = container("attacker_" + suffix, settings.msf_image, engine::Role::Attacker,
                                net, session_id, entry.name);
      std::string script;
      script += "use " + entry.exploit + "\n";
      script += "set RHOSTS " + proxy_host + "\n";
      script += "set RPORT " + proxy_port + "\n";
      script += "run -z\n";
      script += "exit -y\n";
      std::string inline_script;
      for (std::size_t pos = 0; pos < script.size();) {
        auto nl = script.find('\n', pos);
        if (!inline_script.empty()) inline_script += "; ";
        inline_script += script.substr(pos, nl - pos);
        pos = nl + 1;
      }
      plan.attacker.command = std::vector<std::string>{"msfconsole", "-q", "-x", inline_script};
      plan.attacker.env = target_env;
      plan.attacker.env["SETC_MSF_MODULE"] = entry.exploit;
      plan.msf_resource_script = std::move(script);
      break;
    }
    case AttackSource::Script:
      plan.attacker = container("attacker_" + suffix, entry.attacker_image.value_or(""),
                                engine::Role::Attacker, net, session_id, entry.name);
      plan.attacker.command = std::vector<std::string>{"/bin/sh", "-c", entry.exploit};
      plan.attacker.env = target_env;
      break;
  }

  plan.success_matchers = entry.success_matchers.value_or(default_success_matchers(entry.attack_src));
  plan.failure_matchers = entry.failure_matchers.value_or(default_failure_matchers(entry.attack_src));
  return plan;
}

void to_json(nlohmann::json& j, const ResolvedEntryPlan& plan) {
  j = nlohmann::json{{"session_id", plan.session_id},
                     {"entry_name", plan.entry_name},
                     {"network", plan.network},
                     {"target", plan.target},
                     {"proxy", plan.proxy},
                     {"sidecars", plan.sidecars},
                     {"attacker", plan.attacker},
                     {"success_matchers", plan.success_matchers},
                     {"failure_matchers", plan.failure_matchers}};
  if (plan.msf_resource_script) j["msf_resource_script"] = *plan.msf_resource_script;
}

}  // namespace setc::config
