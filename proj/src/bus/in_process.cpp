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

#include "twinloop/bus/client.hpp"

#include <sstream>

namespace twinloop::bus
{

void BusClient::subscribe(const std::string & topic) { do_subscribe(topic); }

std::uint64_t BusClient::publish(
  const std::string & topic, nlohmann::json payload, std::uint64_t tick)
{
  if (left_) {
    throw BusError(BusErrorKind::UnregisteredNode, "node '" + node_id_ + "' has left the bus");
  }
  if (is_reserved(topic)) {
    throw BusError(BusErrorKind::ReservedTopic, "topic '" + topic + "' is reserved");
  }
  check_tick(tick);
  Envelope envelope{topic, tick, next_seq_[topic], node_id_, std::move(payload)};
  do_publish(envelope);
  return next_seq_[topic]++;
}

TickGrant BusClient::arrive(std::uint64_t tick)
{
  if (left_) {
    throw BusError(BusErrorKind::UnregisteredNode, "node '" + node_id_ + "' has left the bus");
  }
  check_tick(tick);
  TickGrant grant = do_arrive(tick);
  tick_ = grant.tick;
  return grant;
}

void BusClient::leave()
{
  if (!left_) {
    left_ = true;
    do_leave();
  }
}

void BusClient::check_tick(std::uint64_t tick) const
{
  if (tick < tick_) {
    std::ostringstream msg;
    msg << "stale tick " << tick << " from '" << node_id_ << "' (barrier at " << tick_ << ")";
    throw BusError(BusErrorKind::StaleTick, msg.str());
  }
  if (tick > tick_) {
    std::ostringstream msg;
    msg << "tick " << tick << " from '" << node_id_ << "' is ahead of the barrier at " << tick_;
    throw BusError(BusErrorKind::FutureTick, msg.str());
  }
}

InProcessClient::InProcessClient(BusCore & core, std::string node_id)
: BusClient(std::move(node_id)), core_(core)
{
  core_.register_node(BusClient::node_id());
  set_tick(core_.current_tick());
}

InProcessClient::~InProcessClient()
{
  // Destroyed without leave(): treat as a crashed node.
  if (!departed_) {
    try {
      core_.disconnect(node_id());
    } catch (...) {
    }
  }
}

void InProcessClient::do_subscribe(const std::string & topic) { core_.subscribe(node_id(), topic); }

void InProcessClient::do_publish(const Envelope & envelope)
{
  core_.publish(envelope.sender, envelope.topic, envelope.payload, envelope.tick);
}

TickGrant InProcessClient::do_arrive(std::uint64_t tick) { return core_.arrive(node_id(), tick); }

void InProcessClient::do_leave()
{
  departed_ = true;
  core_.leave(node_id());
}

}  // namespace twinloop::bus
