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

#include "twinloop/bus/socket_transport.hpp"

#include <sys/socket.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/read_until.hpp>
#include <boost/asio/write.hpp>

#include <istream>

namespace twinloop::bus
{

namespace asio = boost::asio;
using asio::ip::tcp;
using nlohmann::json;

namespace
{

Envelope frame(std::string_view topic, std::uint64_t tick, std::string sender, json payload)
{
  return Envelope{std::string(topic), tick, 0, std::move(sender), std::move(payload)};
}

Envelope error_frame(BusErrorKind kind, const std::string & message)
{
  return frame(
    frames::kError, 0, "bus", json{{"kind", to_string(kind)}, {"message", message}});
}

bool read_line(tcp::socket & socket, asio::streambuf & buffer, std::string & line)
{
  boost::system::error_code ec;
  asio::read_until(socket, buffer, '\n', ec);
  if (ec && buffer.size() == 0) {
    return false;
  }
  std::istream in(&buffer);
  std::getline(in, line);
  return !ec || !line.empty();
}

void write_all(tcp::socket & socket, const std::string & data)
{
  asio::write(socket, asio::buffer(data));
}

}  // namespace

BusServer::BusServer(std::shared_ptr<BusCore> core, unsigned short port)
: core_(std::move(core)), acceptor_(io_, tcp::endpoint(asio::ip::make_address("127.0.0.1"), port))
{
  port_ = acceptor_.local_endpoint().port();
  accept_thread_ = std::thread([this] { accept_loop(); });
}

BusServer::~BusServer() { stop(); }

void BusServer::stop()
{
  if (stopping_.exchange(true)) {
    return;
  }
  boost::system::error_code ec;
  // Wakes the accept() blocked in accept_loop; close() alone does not on Linux.
  ::shutdown(acceptor_.native_handle(), SHUT_RDWR);
  if (accept_thread_.joinable()) {
    accept_thread_.join();
  }
  acceptor_.close(ec);
  std::vector<std::thread> sessions;
  {
    std::lock_guard lock(sessions_mutex_);
    for (auto & socket : sockets_) {
      socket->shutdown(tcp::socket::shutdown_both, ec);
      socket->close(ec);
    }
    sessions = std::move(sessions_);
  }
  // Sessions blocked on the barrier wake up once the core fails.
  if (!core_->failure()) {
    core_->abort(BusErrorKind::Aborted, "bus server stopped");
  }
  for (auto & t : sessions) {
    t.join();
  }
}

void BusServer::accept_loop()
{
  while (!stopping_) {
    auto socket = std::make_shared<tcp::socket>(io_);
    boost::system::error_code ec;
    acceptor_.accept(*socket, ec);
    if (ec) {
      if (stopping_) {
        return;
      }
      continue;
    }
    socket->set_option(tcp::no_delay(true), ec);
    std::lock_guard lock(sessions_mutex_);
    sockets_.push_back(socket);
    sessions_.emplace_back([this, socket] { serve(socket); });
  }
}

void BusServer::serve(std::shared_ptr<tcp::socket> socket)
{
  asio::streambuf buffer;
  std::string node;
  bool said_bye = false;
  std::string line;
  try {
    while (read_line(*socket, buffer, line)) {
      if (line.empty()) {
        continue;
      }
      const Envelope in = decode_line(line);
      if (in.topic == frames::kHello) {
        core_->register_node(in.sender);
        node = in.sender;
        write_all(
          *socket, encode_line(frame(frames::kWelcome, core_->current_tick(), "bus", json::object())));
        continue;
      }
      if (node.empty()) {
        throw BusError(BusErrorKind::Protocol, "first frame must be " + std::string(frames::kHello));
      }
      if (in.topic == frames::kSubscribe) {
        core_->subscribe(node, in.payload.at("topic").get<std::string>());
      } else if (in.topic == frames::kArrive) {
        const TickGrant grant = core_->arrive(node, in.tick);
        std::string out;
        for (const auto & message : grant.messages) {
          out += encode_line(message);
        }
        out += encode_line(frame(frames::kGrant, grant.tick, "bus", json::object()));
        write_all(*socket, out);
      } else if (in.topic == frames::kBye) {
        core_->leave(node);
        said_bye = true;
        break;
      } else if (is_reserved(in.topic)) {
        throw BusError(BusErrorKind::Protocol, "unexpected control frame " + in.topic);
      } else {
        if (in.sender != node) {
          throw BusError(BusErrorKind::Protocol, "sender mismatch on connection of '" + node + "'");
        }
        try {
          core_->publish(node, in.topic, in.payload, in.tick);
        } catch (const BusError & e) {
          // The client validates ticks before sending, so this is a desynchronized node.
          core_->abort(e.kind(), e.what());
          throw;
        }
      }
    }
  } catch (const BusError & e) {
    boost::system::error_code ec;
    asio::write(*socket, asio::buffer(encode_line(error_frame(e.kind(), e.what()))), ec);
  } catch (const std::exception & e) {
    boost::system::error_code ec;
    asio::write(
      *socket, asio::buffer(encode_line(error_frame(BusErrorKind::Protocol, e.what()))), ec);
  }
  if (!node.empty() && !said_bye) {
    core_->disconnect(node);
  }
  boost::system::error_code ec;
  socket->shutdown(tcp::socket::shutdown_both, ec);
}

SocketClient::SocketClient(
  const std::string & host, unsigned short port, std::string node_id,
  std::chrono::milliseconds connect_timeout)
: BusClient(std::move(node_id)), socket_(io_)
{
  tcp::resolver resolver(io_);
  const auto endpoints = resolver.resolve(host, std::to_string(port));
  const auto deadline = std::chrono::steady_clock::now() + connect_timeout;
  for (;;) {
    boost::system::error_code ec;
    asio::connect(socket_, endpoints, ec);
    if (!ec) {
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      throw BusError(
        BusErrorKind::Protocol,
        "cannot connect to bus at " + host + ":" + std::to_string(port) + ": " + ec.message());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds{20});
  }
  socket_.set_option(tcp::no_delay(true));
  send(frame(frames::kHello, 0, this->node_id(), json::object()));
  const Envelope reply = receive();
  if (reply.topic == frames::kError) {
    raise(reply);
  }
  if (reply.topic != frames::kWelcome) {
    throw BusError(BusErrorKind::Protocol, "expected welcome, got " + reply.topic);
  }
  set_tick(reply.tick);
}

SocketClient::~SocketClient()
{
  boost::system::error_code ec;
  socket_.shutdown(tcp::socket::shutdown_both, ec);
  socket_.close(ec);
}

void SocketClient::do_subscribe(const std::string & topic)
{
  send(frame(frames::kSubscribe, tick(), node_id(), json{{"topic", topic}}));
}

void SocketClient::do_publish(const Envelope & envelope) { send(envelope); }

TickGrant SocketClient::do_arrive(std::uint64_t tick)
{
  send(frame(frames::kArrive, tick, node_id(), json::object()));
  TickGrant grant;
  for (;;) {
    Envelope in = receive();
    if (in.topic == frames::kGrant) {
      grant.tick = in.tick;
      return grant;
    }
    if (in.topic == frames::kError) {
      raise(in);
    }
    grant.messages.push_back(std::move(in));
  }
}

void SocketClient::do_leave()
{
  send(frame(frames::kBye, tick(), node_id(), json::object()));
  boost::system::error_code ec;
  socket_.shutdown(tcp::socket::shutdown_send, ec);
}

void SocketClient::send(const Envelope & envelope)
{
  boost::system::error_code ec;
  asio::write(socket_, asio::buffer(encode_line(envelope)), ec);
  if (ec) {
    throw BusError(BusErrorKind::Desync, "bus connection lost: " + ec.message());
  }
}

Envelope SocketClient::receive()
{
  std::string line;
  if (!read_line(socket_, buffer_, line)) {
    throw BusError(BusErrorKind::Desync, "bus connection closed by server");
  }
  return decode_line(line);
}

void SocketClient::raise(const Envelope & error)
{
  throw BusError(
    parse_bus_error_kind(error.payload.value("kind", std::string("protocol"))),
    error.payload.value("message", std::string("bus error")));
}

}  // namespace twinloop::bus
