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

#ifndef MRS_JOBD_NET_H_
#define MRS_JOBD_NET_H_

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "mrs/common/status.h"
#include "mrs/jobd/protocol.h"

namespace mrs::jobd {

class Daemon;

struct Endpoint {
  std::string host;
  uint16_t port = 0;

  std::string ToString() const { return host + ":" + std::to_string(port); }
};

Result<Endpoint> ParseEndpoint(std::string_view text);

// Serves the newline-delimited JSON protocol: one request line and one
// response line per TCP connection.
class Server {
 public:
  explicit Server(Daemon& daemon);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Port 0 picks an ephemeral port; see address().
  Status Start(const std::string& listen);
  void Stop();
  // Bound address, valid after Start().
  const Endpoint& address() const { return bound_; }

 private:
  void AcceptLoop();
  void Serve(int fd);
  void ReapLocked();

  Daemon& daemon_;
  int listen_fd_ = -1;
  Endpoint bound_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  struct Conn {
    std::thread thread;
    std::atomic<bool> done{false};
  };
  std::mutex conns_mu_;
  std::list<Conn> conns_;
};

// One request per connection, matching the server.
class Client {
 public:
  explicit Client(std::string address) : address_(std::move(address)) {}

  // Transport failures come back as kIOError; daemon errors are in the
  // returned JSON (see ResponseStatus).
  Result<Json> Call(const Json& request) const;
  // Call() plus ResponseStatus(): daemon errors become a non-OK Result.
  Result<Json> Checked(const Json& request) const;

  const std::string& address() const { return address_; }

 private:
  std::string address_;
};

}  // namespace mrs::jobd

#endif  // MRS_JOBD_NET_H_
