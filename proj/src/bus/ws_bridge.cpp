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

#include "twinloop/bus/ws_bridge.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace twinloop::bus
{

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using asio::ip::tcp;
using nlohmann::json;

std::string required_role(std::string_view topic)
{
  if (topic == topics::kControlVehicle) {
    return "vehicle";
  }
  if (
    topic == topics::kControlPedestrian || topic == topics::kPedestrianPose ||
    topic == topics::kPedestrianTracker) {
    return "pedestrian";
  }
  return "";
}

std::string validate_console_input(const std::string & topic, const json & payload)
{
  if (topic == topics::kControlVehicle) {
    const auto it = payload.find("throttle");
    if (it == payload.end() || !it->is_number()) {
      return "control.vehicle needs a numeric 'throttle'";
    }
    const double lever = it->get<double>();
    if (!(lever >= -1.0 && lever <= 1.0)) {
      return "throttle must lie in [-1, 1]";
    }
    return "";
  }
  if (topic == topics::kControlPedestrian) {
    const auto it = payload.find("walk");
    if (it == payload.end() || !it->is_boolean()) {
      return "control.pedestrian needs a boolean 'walk'";
    }
    return "";
  }
  if (topic == topics::kPedestrianPose || topic == topics::kPedestrianTracker) {
    return payload.is_object() ? "" : topic + " payload must be an object";
  }
  return "topic '" + topic + "' is not accepted from consoles";
}

class WsBridge::Impl : public std::enable_shared_from_this<WsBridge::Impl>
{
public:
  class Session;

  explicit Impl(unsigned short port)
  : acceptor_(io_, tcp::endpoint(asio::ip::make_address("127.0.0.1"), port)),
    port_(acceptor_.local_endpoint().port())
  {
  }

  void start()
  {
    accept();
    thread_ = std::thread([self = shared_from_this()] { self->io_.run(); });
  }

  void accept();
  void broadcast(const std::string & text);
  void on_frame(const std::shared_ptr<Session> & session, const std::string & text);
  void on_closed(const std::shared_ptr<Session> & session);

  std::vector<Envelope> take_inputs()
  {
    std::lock_guard lock(mutex_);
    std::vector<Envelope> out = std::move(streamed_);
    streamed_.clear();
    for (auto & [topic, envelope] : latest_control_) {
      out.push_back(std::move(envelope));
    }
    latest_control_.clear();
    return out;
  }

  std::size_t session_count() const
  {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  void stop();

  asio::io_context io_;
  tcp::acceptor acceptor_;
  unsigned short port_;
  std::thread thread_;
  mutable std::mutex mutex_;
  std::set<std::shared_ptr<Session>> sessions_;
  std::map<std::string, Session *> role_owner_;
  std::map<std::string, Envelope> latest_control_;
  std::vector<Envelope> streamed_;
  bool stopped_{false};
};

class WsBridge::Impl::Session : public std::enable_shared_from_this<Session>
{
public:
  Session(tcp::socket socket, std::shared_ptr<Impl> owner)
  : ws_(std::move(socket)), owner_(std::move(owner))
  {
  }

  void start()
  {
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        self->owner_->on_closed(self);
        return;
      }
      self->read();
    });
  }

  void send(std::string text)
  {
    asio::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
      self->queue_.push_back(std::move(text));
      if (self->queue_.size() == 1) {
        self->write_next();
      }
    });
  }

  /// Only valid once the io thread has stopped.
  void close_now()
  {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).close(ec);
    owner_.reset();
  }

private:
  void read()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->owner_->on_closed(self);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->owner_->on_frame(self, text);
      self->read();
    });
  }

  void write_next()
  {
    ws_.async_write(
      asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) {
          self->queue_.clear();
          return;
        }
        self->queue_.pop_front();
        if (!self->queue_.empty()) {
          self->write_next();
        }
      });
  }

  websocket::stream<tcp::socket> ws_;
  std::shared_ptr<Impl> owner_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
};

void WsBridge::Impl::accept()
{
  acceptor_.async_accept(
    asio::make_strand(io_), [self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        return;
      }
      auto session = std::make_shared<Session>(std::move(socket), self);
      {
        std::lock_guard lock(self->mutex_);
        if (self->stopped_) {
          return;
        }
        self->sessions_.insert(session);
      }
      session->start();
      self->accept();
    });
}

void WsBridge::Impl::broadcast(const std::string & text)
{
  std::lock_guard lock(mutex_);
  for (const auto & session : sessions_) {
    session->send(text);
  }
}

void WsBridge::Impl::on_frame(const std::shared_ptr<Session> & session, const std::string & text)
{
  auto reply_error = [&](const std::string & kind, const std::string & message) {
    session->send(
      json{{"topic", "bus.error"}, {"tick", 0}, {"seq", 0}, {"sender", "bus"},
           {"payload", {{"kind", kind}, {"message", message}}}}
        .dump());
  };

  json frame;
  try {
    frame = json::parse(text);
  } catch (const json::exception & e) {
    reply_error("protocol", std::string("malformed frame: ") + e.what());
    return;
  }
  if (!frame.is_object() || !frame.value("topic", json()).is_string()) {
    reply_error("protocol", "frame must be an envelope object with a string topic");
    return;
  }
  const std::string topic = frame.at("topic").get<std::string>();
  const json payload = frame.contains("payload") ? frame.at("payload") : json::object();
  if (!payload.is_object()) {
    reply_error("protocol", "payload must be an object");
    return;
  }

  std::lock_guard lock(mutex_);
  if (topic == kClaimFrame) {
    const std::string role = payload.value("role", std::string());
    if (role != "vehicle" && role != "pedestrian") {
      reply_error("protocol", "role must be 'vehicle' or 'pedestrian'");
      return;
    }
    const auto it = role_owner_.find(role);
    if (it != role_owner_.end() && it->second != session.get()) {
      reply_error("role_conflict", "role '" + role + "' is already claimed");
      return;
    }
    role_owner_[role] = session.get();
    session->send(
      json{{"topic", kClaimedFrame}, {"tick", 0}, {"seq", 0}, {"sender", "bus"},
           {"payload", {{"role", role}}}}
        .dump());
    return;
  }

  const std::string role = required_role(topic);
  if (role.empty()) {
    reply_error("protocol", "topic '" + topic + "' is not accepted from consoles");
    return;
  }
  const auto owner = role_owner_.find(role);
  if (owner == role_owner_.end() || owner->second != session.get()) {
    reply_error("role_not_claimed", "claim role '" + role + "' before sending " + topic);
    return;
  }
  if (const std::string problem = validate_console_input(topic, payload); !problem.empty()) {
    reply_error("protocol", problem);
    return;
  }
  Envelope input{topic, 0, 0, "", payload};
  if (topic.starts_with("control.")) {
    latest_control_[topic] = std::move(input);
  } else {
    streamed_.push_back(std::move(input));
  }
}

void WsBridge::Impl::on_closed(const std::shared_ptr<Session> & session)
{
  std::lock_guard lock(mutex_);
  sessions_.erase(session);
  for (auto it = role_owner_.begin(); it != role_owner_.end();) {
    it = it->second == session.get() ? role_owner_.erase(it) : std::next(it);
  }
}

void WsBridge::Impl::stop()
{
  {
    std::lock_guard lock(mutex_);
    if (stopped_) {
      return;
    }
    stopped_ = true;
  }
  io_.stop();
  if (thread_.joinable()) {
    thread_.join();
  }
  beast::error_code ec;
  acceptor_.close(ec);
  std::lock_guard lock(mutex_);
  for (const auto & session : sessions_) {
    session->close_now();
  }
  sessions_.clear();
  role_owner_.clear();
}

WsBridge::WsBridge(unsigned short port) : impl_(std::make_shared<Impl>(port)) { impl_->start(); }

WsBridge::~WsBridge() { stop(); }

unsigned short WsBridge::port() const { return impl_->port_; }

std::size_t WsBridge::session_count() const { return impl_->session_count(); }

void WsBridge::broadcast(const Envelope & envelope) { impl_->broadcast(json(envelope).dump()); }

std::vector<Envelope> WsBridge::take_inputs() { return impl_->take_inputs(); }

void WsBridge::stop() { impl_->stop(); }

}  // namespace twinloop::bus
