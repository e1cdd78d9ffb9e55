// Copyright 2026 The twinloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWINLOOP__BUS__SOCKET_TRANSPORT_HPP_
#define TWINLOOP__BUS__SOCKET_TRANSPORT_HPP_

#include "twinloop/bus/bus_core.hpp"
#include "twinloop/bus/client.hpp"

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/streambuf.hpp>

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace twinloop::bus
{

// Transport control frames. They share the envelope schema; payloads:
//   bus.hello     {}                          client -> server, sender = node id
//   bus.welcome   {}                          server -> client, tick = current barrier tick
//   bus.subscribe {"topic": t}                client -> server
//   bus.arrive    {}                          client -> server, tick = barrier tick
//   bus.grant     {}                          server -> client, tick = newly opened tick
//   bus.bye       {}                          client -> server, graceful leave
//   bus.error     {"kind": k, "message": m}   server -> client, connection then closes
namespace frames
{
inline constexpr std::string_view kHello = "bus.hello";
inline constexpr std::string_view kWelcome = "bus.welcome";
inline constexpr std::string_view kSubscribe = "bus.subscribe";
inline constexpr std::string_view kArrive = "bus.arrive";
inline constexpr std::string_view kGrant = "bus.grant";
inline constexpr std::string_view kBye = "bus.bye";
inline constexpr std::string_view kError = "bus.error";
}  // namespace frames

/// Serves a BusCore over newline-delimited JSON on a loopback TCP port, one thread per node.
class BusServer
{
public:
  /// Port 0 picks an ephemeral port; see port().
  explicit BusServer(std::shared_ptr<BusCore> core, unsigned short port = 0);
  ~BusServer();

  BusServer(const BusServer &) = delete;
  BusServer & operator=(const BusServer &) = delete;

  unsigned short port() const { return port_; }
  BusCore & core() { return *core_; }

  void stop();

private:
  void accept_loop();
  void serve(std::shared_ptr<boost::asio::ip::tcp::socket> socket);

  std::shared_ptr<BusCore> core_;
  boost::asio::io_context io_;
  boost::asio::ip::tcp::acceptor acceptor_;
  unsigned short port_{0};
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex sessions_mutex_;
  std::vector<std::thread> sessions_;
  std::vector<std::shared_ptr<boost::asio::ip::tcp::socket>> sockets_;
};

/// Node-side end of the TCP transport.
class SocketClient : public BusClient
{
public:
  SocketClient(
    const std::string & host, unsigned short port, std::string node_id,
    std::chrono::milliseconds connect_timeout = std::chrono::milliseconds{5000});
  ~SocketClient() override;

protected:
  void do_subscribe(const std::string & topic) override;
  void do_publish(const Envelope & envelope) override;
  TickGrant do_arrive(std::uint64_t tick) override;
  void do_leave() override;

private:
  void send(const Envelope & envelope);
  Envelope receive();
  [[noreturn]] void raise(const Envelope & error_frame);

  boost::asio::io_context io_;
  boost::asio::ip::tcp::socket socket_;
  boost::asio::streambuf buffer_;
};

}  // namespace twinloop::bus

#endif  // TWINLOOP__BUS__SOCKET_TRANSPORT_HPP_
