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

#include "setc/telemetry/recording_proxy.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <system_error>

#include "setc/text.hpp"

namespace setc::telemetry {

namespace {

constexpr std::size_t kMaxHead = 64 * 1024;

// Buffered reads over a socket. Everything consumed is also kept in `raw`
// until the caller takes it, so forwarded bytes are exactly the bytes read.
class Reader {
 public:
  explicit Reader(int fd) : fd_(fd) {}

  bool eof() const { return eof_ && pos_ == buf_.size(); }
  bool has_buffered() const { return pos_ < buf_.size(); }

  // Reads up to and including the blank line ending a message head. At EOF
  // returns whatever was buffered (possibly empty).
  std::string read_head() {
    for (;;) {
      const std::string_view view(buf_.data() + pos_, buf_.size() - pos_);
      auto end = view.find("\r\n\r\n");
      std::size_t len = end == std::string_view::npos ? 0 : end + 4;
      if (len == 0) {
        auto lf = view.find("\n\n");
        if (lf != std::string_view::npos) len = lf + 2;
      }
      if (len != 0) return take(len);
      if (view.size() > kMaxHead || !fill()) return take(view.size());
    }
  }

  std::string read_line() {
    for (;;) {
      const std::string_view view(buf_.data() + pos_, buf_.size() - pos_);
      auto nl = view.find('\n');
      if (nl != std::string_view::npos) return take(nl + 1);
      if (!fill()) return take(view.size());
    }
  }

  std::string read_exact(std::size_t n) {
    while (buf_.size() - pos_ < n) {
      if (!fill()) break;
    }
    return take(std::min(n, buf_.size() - pos_));
  }

  std::string read_to_eof() {
    while (fill()) {
    }
    return take(buf_.size() - pos_);
  }

 private:
  bool fill() {
    if (eof_) return false;
    char chunk[16384];
    for (;;) {
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n > 0) {
        if (pos_ > 0 && pos_ == buf_.size()) {
          buf_.clear();
          pos_ = 0;
        }
        buf_.append(chunk, static_cast<std::size_t>(n));
        return true;
      }
      if (n < 0 && errno == EINTR) continue;
      eof_ = true;
      return false;
    }
  }

  std::string take(std::size_t n) {
    std::string out = buf_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  int fd_;
  std::string buf_;
  std::size_t pos_ = 0;
  bool eof_ = false;
};

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void set_timeouts(int fd, std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

std::string address_string(const sockaddr* sa) {
  char host[INET6_ADDRSTRLEN] = {};
  if (sa->sa_family == AF_INET) {
    ::inet_ntop(AF_INET, &reinterpret_cast<const sockaddr_in*>(sa)->sin_addr, host, sizeof host);
  } else if (sa->sa_family == AF_INET6) {
    const auto* in6 = reinterpret_cast<const sockaddr_in6*>(sa);
    if (IN6_IS_ADDR_V4MAPPED(&in6->sin6_addr)) {
      ::inet_ntop(AF_INET, &in6->sin6_addr.s6_addr[12], host, sizeof host);
    } else {
      ::inet_ntop(AF_INET6, &in6->sin6_addr, host, sizeof host);
    }
  }
  return host;
}

struct Upstream {
  int fd = -1;
  std::string ip;
};

Upstream connect_upstream(const std::string& host, int port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0) return {};
  Upstream up;
  for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    set_timeouts(fd, timeout);
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      up.fd = fd;
      up.ip = address_string(ai->ai_addr);
      break;
    }
    ::close(fd);
  }
  if (up.fd < 0 && res != nullptr) up.ip = address_string(res->ai_addr);
  ::freeaddrinfo(res);
  return up;
}

std::optional<std::int64_t> parse_size(std::string_view text, int base) {
  text = text::trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc{} || value < 0) return std::nullopt;
  return value;
}

struct Body {
  std::string raw;
  std::string decoded;
};

// Reads a chunked body verbatim, trailers included.
Body read_chunked(Reader& in) {
  Body body;
  for (;;) {
    auto line = in.read_line();
    body.raw += line;
    if (line.empty()) return body;
    auto size_text = std::string_view(line).substr(0, line.find(';'));
    const auto size = parse_size(size_text, 16);
    if (!size) return body;
    if (*size == 0) {
      for (;;) {
        auto trailer = in.read_line();
        body.raw += trailer;
        if (trailer.empty() || trailer == "\r\n" || trailer == "\n") return body;
      }
    }
    auto data = in.read_exact(static_cast<std::size_t>(*size));
    body.raw += data;
    body.decoded += data;
    body.raw += in.read_line();
  }
}

bool is_chunked(const std::optional<std::string>& te) {
  return te && text::to_lower(*te).find("chunked") != std::string::npos;
}

struct ResponseHead {
  int status = 0;
  std::string version;
  std::vector<std::pair<std::string, std::string>> headers;
};

ResponseHead parse_response_head(std::string_view head) {
  ResponseHead out;
  auto req = parse_request_head(head);
  // Status line: VERSION SP CODE SP REASON, same tokenization as a request.
  out.version = req.method;
  if (auto code = parse_size(req.target, 10)) out.status = static_cast<int>(*code);
  out.headers = std::move(req.headers);
  return out;
}

std::optional<std::string> find_header(const std::vector<std::pair<std::string, std::string>>& headers,
                                       std::string_view name) {
  for (const auto& [k, v] : headers) {
    if (text::iequals(k, name)) return v;
  }
  return std::nullopt;
}

double now_seconds() {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  return static_cast<double>(us) / 1e6;
}

const std::string kBadGateway =
    "HTTP/1.1 502 Bad Gateway\r\nContent-Type: text/plain\r\nContent-Length: 11\r\n"
    "Connection: close\r\n\r\nBad Gateway";

}  // namespace

std::optional<std::string> RequestHead::header(std::string_view name) const { return find_header(headers, name); }

std::vector<std::string> RequestHead::headers_named(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : headers) {
    if (text::iequals(k, name)) out.push_back(v);
  }
  return out;
}

RequestHead parse_request_head(std::string_view head) {
  RequestHead out;
  auto line_end = head.find('\n');
  auto first = head.substr(0, line_end);
  if (!first.empty() && first.back() == '\r') first.remove_suffix(1);

  // Split on single spaces only, so the method and target stay verbatim.
  auto sp1 = first.find(' ');
  out.method = std::string(first.substr(0, sp1));
  if (sp1 != std::string_view::npos) {
    auto rest = first.substr(sp1 + 1);
    auto sp2 = rest.rfind(' ');
    if (sp2 != std::string_view::npos && rest.substr(sp2 + 1).starts_with("HTTP/")) {
      out.target = std::string(rest.substr(0, sp2));
      out.version = std::string(rest.substr(sp2 + 1));
    } else {
      auto sp = rest.find(' ');
      out.target = std::string(rest.substr(0, sp));
      if (sp != std::string_view::npos) out.version = std::string(rest.substr(sp + 1));
    }
  }

  while (line_end != std::string_view::npos) {
    head.remove_prefix(line_end + 1);
    line_end = head.find('\n');
    auto line = head.substr(0, line_end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) break;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    out.headers.emplace_back(std::string(line.substr(0, colon)), std::string(text::trim(line.substr(colon + 1))));
  }
  return out;
}

std::string target_path(std::string_view target) {
  if (auto scheme = target.find("://"); scheme != std::string_view::npos && target.find('/') > scheme) {
    auto slash = target.find('/', scheme + 3);
    target = slash == std::string_view::npos ? std::string_view("/") : target.substr(slash);
  }
  auto cut = target.find_first_of("?#");
  return std::string(target.substr(0, cut));
}

RecordingProxy::RecordingProxy(ProxyOptions options, TransactionConsumer emit)
    : options_(std::move(options)), emit_(std::move(emit)) {
  if (options_.host_label.empty()) options_.host_label = options_.upstream_host;
}

RecordingProxy::~RecordingProxy() { stop(); }

void RecordingProxy::start() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto service = std::to_string(options_.listen_port);
  const char* host = options_.listen_host.empty() ? nullptr : options_.listen_host.c_str();
  if (int rc = ::getaddrinfo(host, service.c_str(), &hints, &res); rc != 0) {
    throw std::system_error(std::make_error_code(std::errc::address_not_available),
                            std::string("resolve listen address: ") + ::gai_strerror(rc));
  }
  int fd = -1;
  int err = 0;
  for (auto* ai = res; ai != nullptr && fd < 0; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
      err = errno;
      ::close(fd);
      fd = -1;
    }
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw std::system_error(err, std::generic_category(), "bind " + options_.listen_host + ":" + service);

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                           : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  listen_fd_ = fd;
  stopping_ = false;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void RecordingProxy::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void RecordingProxy::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    sockaddr_storage peer{};
    socklen_t len = sizeof peer;
    const int fd = ::accept(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len);
    if (fd < 0) continue;
    set_timeouts(fd, options_.io_timeout);
    auto ip = address_string(reinterpret_cast<sockaddr*>(&peer));
    std::lock_guard lock(mu_);
    open_fds_.insert(fd);
    workers_.emplace_back([this, fd, ip = std::move(ip)] { serve_connection(fd, ip); });
  }
}

void RecordingProxy::serve_connection(int client_fd, std::string peer_ip) {
  Reader client(client_fd);
  for (;;) {
    auto head = client.read_head();
    if (head.empty()) break;

    Capture capture;
    auto& tx = capture.transaction;
    tx.timestamp = now_seconds();
    tx.src = peer_ip;
    tx.dest_port = options_.upstream_port;
    tx.host_label = options_.host_label;

    const auto req = parse_request_head(head);
    tx.http_method = req.method;
    tx.url = req.target;
    tx.uri_path = target_path(req.target);
    tx.http_referrer = req.header("Referer").value_or("-");
    if (tx.http_referrer.empty()) tx.http_referrer = "-";
    tx.http_user_agent = req.header("User-Agent").value_or("");

    Body body;
    if (is_chunked(req.header("Transfer-Encoding"))) {
      body = read_chunked(client);
    } else if (auto cl = req.header("Content-Length")) {
      if (auto n = parse_size(*cl, 10)) {
        body.raw = client.read_exact(static_cast<std::size_t>(*n));
        body.decoded = body.raw;
      }
    }
    tx.bytes_in = static_cast<std::int64_t>(head.size() + body.raw.size());
    if (!body.decoded.empty()) capture.request_body = body.decoded;

    bool keep_alive = req.version == "HTTP/1.1";
    if (auto conn = req.header("Connection")) {
      const auto v = text::to_lower(*conn);
      if (v.find("close") != std::string::npos) keep_alive = false;
      if (v.find("keep-alive") != std::string::npos) keep_alive = true;
    }

    auto up = connect_upstream(options_.upstream_host, options_.upstream_port, options_.io_timeout);
    tx.dest = up.ip;
    if (up.fd < 0 || !send_all(up.fd, head) || !send_all(up.fd, body.raw)) {
      if (up.fd >= 0) ::close(up.fd);
      tx.status = 502;
      tx.bytes_out = 0;
      tx.http_content_type = {"text/plain"};
      send_all(client_fd, kBadGateway);
      record(std::move(capture));
      break;
    }

    Reader upstream(up.fd);
    const auto resp_head_raw = upstream.read_head();
    if (resp_head_raw.empty()) {
      ::close(up.fd);
      tx.status = 502;
      tx.bytes_out = 0;
      tx.http_content_type = {"text/plain"};
      send_all(client_fd, kBadGateway);
      record(std::move(capture));
      break;
    }
    const auto resp = parse_response_head(resp_head_raw);
    std::string resp_body;
    const bool no_body = text::iequals(req.method, "HEAD") || resp.status == 204 || resp.status == 304 ||
                         (resp.status >= 100 && resp.status < 200);
    if (!no_body) {
      if (is_chunked(find_header(resp.headers, "Transfer-Encoding"))) {
        resp_body = read_chunked(upstream).raw;
      } else if (auto cl = find_header(resp.headers, "Content-Length")) {
        if (auto n = parse_size(*cl, 10)) resp_body = upstream.read_exact(static_cast<std::size_t>(*n));
      } else {
        resp_body = upstream.read_to_eof();
        keep_alive = false;
      }
    }
    ::close(up.fd);
    if (auto conn = find_header(resp.headers, "Connection");
        conn && text::to_lower(*conn).find("close") != std::string::npos) {
      keep_alive = false;
    }

    tx.status = resp.status;
    tx.bytes_out = static_cast<std::int64_t>(resp_head_raw.size() + resp_body.size());
    for (const auto& [k, v] : resp.headers) {
      if (text::iequals(k, "Content-Type")) tx.http_content_type.push_back(v);
    }
    const bool delivered = send_all(client_fd, resp_head_raw) && send_all(client_fd, resp_body);
    record(std::move(capture));
    if (!delivered || !keep_alive) break;
  }

  ::shutdown(client_fd, SHUT_RDWR);
  std::lock_guard lock(mu_);
  open_fds_.erase(client_fd);
  ::close(client_fd);
}

void RecordingProxy::record(Capture capture) {
  std::lock_guard lock(emit_mu_);
  if (options_.spool_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options_.spool_dir, ec);
    std::ofstream out(*options_.spool_dir / "captures.ndjson", std::ios::binary | std::ios::app);
    out << to_ndjson_line(capture) << '\n';
  }
  ++transactions_;
  if (emit_) emit_(capture);
}

void serve_recording_proxy(const ProxyOptions& options, TransactionConsumer emit, std::stop_token stop) {
  RecordingProxy proxy(options, std::move(emit));
  proxy.start();
  while (!stop.stop_requested()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  proxy.stop();
}

}  // namespace setc::telemetry
