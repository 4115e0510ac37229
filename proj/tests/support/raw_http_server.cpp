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

#include "raw_http_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cctype>
#include <cstring>
#include <stdexcept>

namespace setc::testing {

namespace {

int bind_loopback(int port, int* bound) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed");
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  *bound = ntohs(addr.sin_port);
  return fd;
}

std::size_t content_length(const std::string& head) {
  std::string lower;
  for (char c : head) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto pos = lower.find("\r\ncontent-length:");
  if (pos == std::string::npos) return 0;
  return std::stoul(head.substr(pos + 17));
}

}  // namespace

RawHttpServer::RawHttpServer(Responder responder) : responder_(std::move(responder)) {
  listen_fd_ = bind_loopback(0, &port_);
  ::listen(listen_fd_, 16);
  acceptor_ = std::thread([this] {
    while (!stop_) {
      pollfd pfd{listen_fd_, POLLIN, 0};
      if (::poll(&pfd, 1, 50) <= 0) continue;
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) continue;
      std::lock_guard lock(mu_);
      workers_.emplace_back([this, fd] { serve(fd); });
    }
  });
}

RawHttpServer::~RawHttpServer() {
  stop_ = true;
  acceptor_.join();
  ::close(listen_fd_);
  for (auto& t : workers_) t.join();
}

std::vector<std::string> RawHttpServer::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::string RawHttpServer::response(int status, const std::string& body, const std::string& content_type,
                                    bool close) {
  std::string out = "HTTP/1.1 " + std::to_string(status) + " X\r\nContent-Type: " + content_type +
                    "\r\nContent-Length: " + std::to_string(body.size()) + "\r\n";
  if (close) out += "Connection: close\r\n";
  return out + "\r\n" + body;
}

void RawHttpServer::serve(int fd) {
  timeval tv{2, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  std::string buf;
  char chunk[4096];
  for (;;) {
    std::size_t head_end;
    while ((head_end = buf.find("\r\n\r\n")) == std::string::npos) {
      const auto n = ::recv(fd, chunk, sizeof chunk, 0);
      if (n <= 0) {
        ::close(fd);
        return;
      }
      buf.append(chunk, static_cast<std::size_t>(n));
    }
    const auto head = buf.substr(0, head_end + 4);
    const auto need = head.size() + content_length(head);
    while (buf.size() < need) {
      const auto n = ::recv(fd, chunk, sizeof chunk, 0);
      if (n <= 0) break;
      buf.append(chunk, static_cast<std::size_t>(n));
    }
    const auto request = buf.substr(0, std::min(need, buf.size()));
    buf.erase(0, request.size());
    {
      std::lock_guard lock(mu_);
      requests_.push_back(request);
    }
    const auto reply = responder_(request);
    ::send(fd, reply.data(), reply.size(), MSG_NOSIGNAL);
    if (reply.find("Connection: close") != std::string::npos) break;
  }
  ::close(fd);
}

int unused_port() {
  int port = 0;
  const int fd = bind_loopback(0, &port);
  ::close(fd);
  return port;
}

}  // namespace setc::testing
