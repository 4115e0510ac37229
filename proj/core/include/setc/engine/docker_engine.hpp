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
#include <string>
#include <string_view>

#include "setc/engine/engine.hpp"

namespace setc::engine {

inline constexpr std::string_view kDockerApiVersion = "v1.43";

struct DockerEndpoint {
  enum class Transport { UnixSocket, Tcp };
  Transport transport = Transport::UnixSocket;
  // Socket path for UnixSocket, host name for Tcp.
  std::string address = "/var/run/docker.sock";
  int port = 2375;

  bool operator==(const DockerEndpoint&) const = default;
};

// Accepts `unix:///path`, `tcp://host:port` and `http://host:port`. Throws
// std::invalid_argument for anything else.
DockerEndpoint parse_docker_host(std::string_view text);

// SETC_DOCKER_HOST, then DOCKER_HOST, then the default local socket.
DockerEndpoint docker_endpoint_from_env();

// Splits a container log stream into lines. Handles both the multiplexed
// framing used for non-TTY containers and raw TTY output.
std::vector<std::string> demux_docker_logs(std::string_view body);

// Engine backed by the local container daemon's HTTP API. Resources are
// labeled by the caller; this class trusts those labels.
class DockerEngine final : public ContainerEngine {
 public:
  explicit DockerEngine(DockerEndpoint endpoint = docker_endpoint_from_env(),
                        std::string api_version = std::string(kDockerApiVersion),
                        std::chrono::milliseconds request_timeout = std::chrono::seconds(30));

  NetworkId create_network(const NetworkSpec& spec) override;
  ContainerId create_container(const ContainerSpec& spec) override;
  void start_container(const ContainerId& id) override;
  ContainerStatus wait_container(const ContainerId& id, std::chrono::milliseconds timeout) override;
  std::vector<std::string> stream_logs(const ContainerId& id) override;
  void remove_container(const ContainerId& id) override;
  void remove_network(const NetworkId& id) override;
  std::vector<std::string> list_labeled(const Labels& filter) override;

  const DockerEndpoint& endpoint() const noexcept { return endpoint_; }

 private:
  struct Reply {
    int status = 0;
    std::string body;
  };

  enum class Method { Get, Post, Delete };

  Reply call(Method method, const std::string& path, const std::string& body,
             std::chrono::milliseconds timeout) const;
  ContainerStatus inspect(const ContainerId& id) const;
  std::string path(std::string_view suffix) const;

  DockerEndpoint endpoint_;
  std::string api_version_;
  std::chrono::milliseconds request_timeout_;
};

}  // namespace setc::engine
