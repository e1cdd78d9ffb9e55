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

#ifndef TWINLOOP__BUS__CLIENT_HPP_
#define TWINLOOP__BUS__CLIENT_HPP_

#include "twinloop/bus/bus_core.hpp"
#include "twinloop/bus/envelope.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace twinloop::bus
{

/**
 * @brief one node's handle on the bus, independent of transport
 *
 * Publishes are validated locally against the node's barrier tick before they leave the node,
 * so a desynchronized caller gets a StaleTick/FutureTick error at the call site. Intended for
 * use from a single thread per node.
 */
class BusClient
{
public:
  explicit BusClient(std::string node_id) : node_id_(std::move(node_id)) {}
  virtual ~BusClient() = default;

  BusClient(const BusClient &) = delete;
  BusClient & operator=(const BusClient &) = delete;

  const std::string & node_id() const { return node_id_; }
  std::uint64_t tick() const { return tick_; }

  void subscribe(const std::string & topic);

  /// @return sequence number for (topic, this node)
  std::uint64_t publish(const std::string & topic, nlohmann::json payload, std::uint64_t tick);
  std::uint64_t publish(const std::string & topic, nlohmann::json payload)
  {
    return publish(topic, std::move(payload), tick_);
  }

  /// Arrive at the barrier for `tick`; returns the next tick and the messages delivered with it.
  TickGrant arrive(std::uint64_t tick);
  TickGrant arrive() { return arrive(tick_); }

  /// Graceful end of participation.
  void leave();

protected:
  virtual void do_subscribe(const std::string & topic) = 0;
  virtual void do_publish(const Envelope & envelope) = 0;
  virtual TickGrant do_arrive(std::uint64_t tick) = 0;
  virtual void do_leave() = 0;

  void set_tick(std::uint64_t tick) { tick_ = tick; }

private:
  void check_tick(std::uint64_t tick) const;

  std::string node_id_;
  std::uint64_t tick_{0};
  std::map<std::string, std::uint64_t> next_seq_;
  bool left_{false};
};

/// Client calling straight into a BusCore in the same process.
class InProcessClient : public BusClient
{
public:
  InProcessClient(BusCore & core, std::string node_id);
  ~InProcessClient() override;

protected:
  void do_subscribe(const std::string & topic) override;
  void do_publish(const Envelope & envelope) override;
  TickGrant do_arrive(std::uint64_t tick) override;
  void do_leave() override;

private:
  BusCore & core_;
  bool departed_{false};
};

}  // namespace twinloop::bus

#endif  // TWINLOOP__BUS__CLIENT_HPP_
