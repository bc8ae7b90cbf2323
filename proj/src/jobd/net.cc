// Copyright (c) 2026 The mrs Authors. All Rights Reserved
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrs/jobd/net.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "mrs/jobd/daemon.h"

namespace mrs::jobd {

namespace {

Status Errno(const std::string& what) {
  return IOError(what + ": " + std::strerror(errno));
}

Status WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("send");
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
  return Status::OK();
}

Result<std::string> ReadLine(int fd) {
  std::string line;
  char buf[1 << 16];
  for (;;) {
    const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("recv");
    }
    if (n == 0) {
      if (line.empty()) return IOError("connection closed before a full line");
      return line;
    }
    const std::string_view chunk(buf, static_cast<size_t>(n));
    const size_t nl = chunk.find('\n');
    if (nl != std::string_view::npos) {
      line.append(chunk.substr(0, nl));
      return line;
    }
    line.append(chunk);
    if (line.size() > kMaxLineBytes) return IOError("line too long");
  }
}

Result<int> Connect(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) return IOError("resolve " + ep.host + ": " + ::gai_strerror(rc));
  Status last = IOError("no address for " + ep.ToString());
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) {
      last = Errno("socket");
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return fd;
    }
    last = Errno("connect " + ep.ToString());
    ::close(fd);
  }
  ::freeaddrinfo(res);
  return last;
}

}  // namespace

Result<Endpoint> ParseEndpoint(std::string_view text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    return InvalidArgument("expected host:port, got '" + std::string(text) + "'");
  }
  Endpoint ep;
  ep.host = std::string(text.substr(0, colon));
  const auto port = text.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || ptr != port.data() + port.size() || value > 65535) {
    return InvalidArgument("bad port in '" + std::string(text) + "'");
  }
  ep.port = static_cast<uint16_t>(value);
  return ep;
}

Server::Server(Daemon& daemon) : daemon_(daemon) {}

Server::~Server() { Stop(); }

Status Server::Start(const std::string& listen) {
  MRS_ASSIGN_OR_RETURN(Endpoint ep, ParseEndpoint(listen));
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) return IOError("resolve " + ep.host + ": " + ::gai_strerror(rc));
  listen_fd_ = ::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol);
  if (listen_fd_ < 0) {
    ::freeaddrinfo(res);
    return Errno("socket");
  }
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, res->ai_addr, res->ai_addrlen) != 0) {
    ::freeaddrinfo(res);
    return Errno("bind " + listen);
  }
  ::freeaddrinfo(res);
  if (::listen(listen_fd_, 128) != 0) return Errno("listen");
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  char host[INET_ADDRSTRLEN];
  ::inet_ntop(AF_INET, &bound.sin_addr, host, sizeof(host));
  bound_ = Endpoint{host, ntohs(bound.sin_port)};
  acceptor_ = std::thread([this] { AcceptLoop(); });
  return Status::OK();
}

void Server::Stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  std::lock_guard<std::mutex> l(conns_mu_);
  for (auto& c : conns_) c.thread.join();
  conns_.clear();
}

void Server::ReapLocked() {
  for (auto it = conns_.begin(); it != conns_.end();) {
    if (it->done) {
      it->thread.join();
      it = conns_.erase(it);
    } else {
      ++it;
    }
  }
}

void Server::AcceptLoop() {
  for (;;) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (stopping_) return;
      if (errno == EMFILE || errno == ENFILE) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      return;
    }
    std::lock_guard<std::mutex> l(conns_mu_);
    ReapLocked();
    Conn& c = conns_.emplace_back();
    c.thread = std::thread([this, fd, &c] {
      Serve(fd);
      c.done = true;
    });
  }
}

void Server::Serve(int fd) {
  Json response;
  auto line = ReadLine(fd);
  if (!line.ok()) {
    response = ErrorResponse(Status(ErrorCode::kProtocolError, line.status().message()));
  } else {
    Json request = Json::parse(*line, nullptr, /*allow_exceptions=*/false);
    if (request.is_discarded()) {
      response = ErrorResponse(InvalidArgument("request is not valid JSON"));
    } else {
      response = daemon_.Handle(request);
    }
  }
  std::string out = response.dump(-1, ' ', false, Json::error_handler_t::replace);
  out.push_back('\n');
  (void)WriteAll(fd, out);
  ::close(fd);
}

Result<Json> Client::Call(const Json& request) const {
  MRS_ASSIGN_OR_RETURN(Endpoint ep, ParseEndpoint(address_));
  MRS_ASSIGN_OR_RETURN(int fd, Connect(ep));
  std::string line = request.dump();
  line.push_back('\n');
  Status st = WriteAll(fd, line);
  if (!st.ok()) {
    ::close(fd);
    return st;
  }
  auto reply = ReadLine(fd);
  ::close(fd);
  if (!reply.ok()) return reply.status();
  Json response = Json::parse(*reply, nullptr, false);
  if (response.is_discarded()) return IOError("daemon sent invalid JSON");
  return response;
}

Result<Json> Client::Checked(const Json& request) const {
  MRS_ASSIGN_OR_RETURN(Json response, Call(request));
  MRS_RETURN_IF_ERROR(ResponseStatus(response));
  return response;
}

}  // namespace mrs::jobd
