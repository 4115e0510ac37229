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

#include "setc/engine/docker_engine.hpp"

#include <sys/socket.h>

#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "setc/errors.hpp"

namespace setc::engine {

using nlohmann::json;

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string label_filter(const Labels& filter) {
  json labels = json::array();
  for (const auto& [k, v] : filter) labels.push_back(k + "=" + v);
  return percent_encode(json{{"label", labels}}.dump());
}

std::string daemon_message(const std::string& body) {
  try {
    auto j = json::parse(body);
    if (j.is_object() && j.contains("message")) return j["message"].get<std::string>();
  } catch (const json::exception&) {
  }
  return body;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw EngineError(EngineErrorKind::Transport, std::string("malformed daemon reply: ") + e.what());
  }
}

[[noreturn]] void raise_for(int status, const std::string& body, const std::string& what) {
  const auto msg = what + ": HTTP " + std::to_string(status) + ": " + daemon_message(body);
  if (status == 404) throw EngineError(EngineErrorKind::NotFound, msg);
  if (status == 409) throw EngineError(EngineErrorKind::Conflict, msg);
  throw EngineError(EngineErrorKind::Transport, msg);
}

std::uint32_t read_be32(std::string_view s, std::size_t at) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 3]));
}

bool looks_multiplexed(std::string_view body) {
  if (body.size() < 8) return false;
  const auto stream = static_cast<unsigned char>(body[0]);
  return stream <= 2 && body[1] == 0 && body[2] == 0 && body[3] == 0;
}

void split_lines(std::string_view text, std::vector<std::string>& out) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      break;
    }
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    pos = nl + 1;
  }
}

}  // namespace

DockerEndpoint parse_docker_host(std::string_view text) {
  DockerEndpoint ep;
  if (text.starts_with("unix://")) {
    ep.transport = DockerEndpoint::Transport::UnixSocket;
    ep.address = std::string(text.substr(7));
    if (ep.address.empty()) throw std::invalid_argument("empty socket path in " + std::string(text));
    return ep;
  }
  std::string_view rest;
  if (text.starts_with("tcp://")) {
    rest = text.substr(6);
  } else if (text.starts_with("http://")) {
    rest = text.substr(7);
  } else {
    throw std::invalid_argument("unsupported daemon address '" + std::string(text) + "'");
  }
  if (auto slash = rest.find('/'); slash != std::string_view::npos) rest = rest.substr(0, slash);
  ep.transport = DockerEndpoint::Transport::Tcp;
  auto colon = rest.rfind(':');
  if (colon == std::string_view::npos) {
    ep.address = std::string(rest);
  } else {
    ep.address = std::string(rest.substr(0, colon));
    const auto port = std::string(rest.substr(colon + 1));
    try {
      ep.port = std::stoi(port);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad port in daemon address '" + std::string(text) + "'");
    }
  }
  if (ep.address.empty() || ep.port < 1 || ep.port > 65535) {
    throw std::invalid_argument("bad daemon address '" + std::string(text) + "'");
  }
  return ep;
}

DockerEndpoint docker_endpoint_from_env() {
  for (const char* name : {"SETC_DOCKER_HOST", "DOCKER_HOST"}) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return parse_docker_host(v);
  }
  return DockerEndpoint{};
}

std::vector<std::string> demux_docker_logs(std::string_view body) {
  std::vector<std::string> lines;
  if (!looks_multiplexed(body)) {
    split_lines(body, lines);
    return lines;
  }
  std::string joined;
  std::size_t pos = 0;
  while (pos + 8 <= body.size()) {
    const auto size = read_be32(body, pos + 4);
    pos += 8;
    const auto take = std::min<std::size_t>(size, body.size() - pos);
    joined.append(body.substr(pos, take));
    pos += take;
  }
  split_lines(joined, lines);
  return lines;
}

DockerEngine::DockerEngine(DockerEndpoint endpoint, std::string api_version,
                           std::chrono::milliseconds request_timeout)
    : endpoint_(std::move(endpoint)),
      api_version_(std::move(api_version)),
      request_timeout_(request_timeout) {}

std::string DockerEngine::path(std::string_view suffix) const {
  return "/" + api_version_ + std::string(suffix);
}

DockerEngine::Reply DockerEngine::call(Method method, const std::string& target,
                                       const std::string& body,
                                       std::chrono::milliseconds timeout) const {
  const bool unix_socket = endpoint_.transport == DockerEndpoint::Transport::UnixSocket;
  httplib::Client cli(endpoint_.address, unix_socket ? 80 : endpoint_.port);
  if (unix_socket) cli.set_address_family(AF_UNIX);
  cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(request_timeout_).count());
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(request_timeout_);

  httplib::Headers headers;
  if (unix_socket) headers.emplace("Host", "docker");

  httplib::Result res;
  switch (method) {
    case Method::Get:
      res = cli.Get(target, headers);
      break;
    case Method::Post:
      res = cli.Post(target, headers, body, "application/json");
      break;
    case Method::Delete:
      res = cli.Delete(target, headers);
      break;
  }
  if (!res) {
    const auto err = res.error();
    const auto kind = err == httplib::Error::Read ? EngineErrorKind::Timeout : EngineErrorKind::Transport;
    throw EngineError(kind, "daemon request " + target + " failed: " + httplib::to_string(err));
  }
  return Reply{res->status, res->body};
}

NetworkId DockerEngine::create_network(const NetworkSpec& spec) {
  const json body = {{"Name", spec.name},
                     {"CheckDuplicate", true},
                     {"Internal", spec.internal},
                     {"Labels", spec.labels}};
  auto reply = call(Method::Post, path("/networks/create"), body.dump(), request_timeout_);
  if (reply.status != 201 && reply.status != 200) {
    raise_for(reply.status, reply.body, "create network " + spec.name);
  }
  return NetworkId{parse_body(reply.body).at("Id").get<std::string>()};
}

ContainerId DockerEngine::create_container(const ContainerSpec& spec) {
  json env = json::array();
  for (const auto& [k, v] : spec.env) env.push_back(k + "=" + v);
  json body = {{"Image", spec.image},
               {"Env", env},
               {"Labels", spec.labels},
               {"Hostname", spec.name},
               {"HostConfig", {{"NetworkMode", spec.network}}},
               {"NetworkingConfig",
                {{"EndpointsConfig", {{spec.network, {{"Aliases", json::array({spec.name})}}}}}}}};
  if (spec.command) body["Cmd"] = *spec.command;
  // Daemon-wide names must be unique across concurrent sessions; the plain
  // spec name stays reachable as the network alias and host name.
  auto name = spec.name;
  if (auto it = spec.labels.find(std::string(kLabelSession)); it != spec.labels.end()) name += "." + it->second;
  auto reply = call(Method::Post, path("/containers/create?name=" + percent_encode(name)), body.dump(),
                    request_timeout_);
  if (reply.status != 201 && reply.status != 200) {
    raise_for(reply.status, reply.body, "create container " + spec.name);
  }
  return ContainerId{parse_body(reply.body).at("Id").get<std::string>()};
}

void DockerEngine::start_container(const ContainerId& id) {
  auto reply = call(Method::Post, path("/containers/" + id.value + "/start"), "", request_timeout_);
  if (reply.status != 204 && reply.status != 304) {
    raise_for(reply.status, reply.body, "start container " + id.value);
  }
}

ContainerStatus DockerEngine::inspect(const ContainerId& id) const {
  auto reply = call(Method::Get, path("/containers/" + id.value + "/json"), "", request_timeout_);
  if (reply.status != 200) raise_for(reply.status, reply.body, "inspect container " + id.value);
  const auto state = parse_body(reply.body).at("State");
  const auto status = state.value("Status", std::string("created"));
  ContainerStatus out{id, Phase::Running, std::nullopt};
  if (status == "exited" || status == "dead") {
    out.phase = Phase::Exited;
    out.exit_code = state.value("ExitCode", 0);
  } else if (status == "created") {
    out.phase = Phase::Created;
  }
  return out;
}

ContainerStatus DockerEngine::wait_container(const ContainerId& id, std::chrono::milliseconds timeout) {
  try {
    auto reply = call(Method::Post, path("/containers/" + id.value + "/wait?condition=not-running"),
                      "", timeout);
    if (reply.status != 200) raise_for(reply.status, reply.body, "wait container " + id.value);
    const auto j = parse_body(reply.body);
    return ContainerStatus{id, Phase::Exited, j.value("StatusCode", 0)};
  } catch (const EngineError& e) {
    if (e.kind() != EngineErrorKind::Timeout) throw;
  }
  return inspect(id);
}

std::vector<std::string> DockerEngine::stream_logs(const ContainerId& id) {
  auto reply = call(Method::Get, path("/containers/" + id.value + "/logs?stdout=1&stderr=1"), "",
                    request_timeout_);
  if (reply.status != 200) raise_for(reply.status, reply.body, "logs of container " + id.value);
  return demux_docker_logs(reply.body);
}

void DockerEngine::remove_container(const ContainerId& id) {
  auto reply = call(Method::Delete, path("/containers/" + id.value + "?force=1&v=1"), "", request_timeout_);
  if (reply.status == 204 || reply.status == 200 || reply.status == 404) return;
  raise_for(reply.status, reply.body, "remove container " + id.value);
}

void DockerEngine::remove_network(const NetworkId& id) {
  auto reply = call(Method::Delete, path("/networks/" + id.value), "", request_timeout_);
  if (reply.status == 204 || reply.status == 200 || reply.status == 404) return;
  raise_for(reply.status, reply.body, "remove network " + id.value);
}

std::vector<std::string> DockerEngine::list_labeled(const Labels& filter) {
  std::vector<std::string> ids;
  const auto filters = label_filter(filter);
  for (const auto& target : {path("/networks?filters=" + filters),
                             path("/containers/json?all=1&filters=" + filters)}) {
    auto reply = call(Method::Get, target, "", request_timeout_);
    if (reply.status != 200) raise_for(reply.status, reply.body, "list " + target);
    for (const auto& item : parse_body(reply.body)) ids.push_back(item.at("Id").get<std::string>());
  }
  return ids;
}

}  // namespace setc::engine
