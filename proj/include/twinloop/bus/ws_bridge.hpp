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

#ifndef TWINLOOP__BUS__WS_BRIDGE_HPP_
#define TWINLOOP__BUS__WS_BRIDGE_HPP_

#include "twinloop/bus/envelope.hpp"

#include <memory>
#include <string>
#include <vector>

namespace twinloop::bus
{

/// Payload of a role claim frame (`bus.claim`) sent by a console client.
inline constexpr std::string_view kClaimFrame = "bus.claim";
inline constexpr std::string_view kClaimedFrame = "bus.claimed";

/// Checks a console input against the topic's payload schema; returns an error text or "".
std::string validate_console_input(const std::string & topic, const nlohmann::json & payload);

/// Role a console input topic requires, or "" when the topic is not accepted from consoles.
std::string required_role(std::string_view topic);

/**
 * @brief WebSocket endpoint mirroring the bus to browser consoles
 *
 * Every envelope handed to broadcast() goes out as one JSON text frame with the bus envelope
 * schema. Clients claim a role (`vehicle` or `pedestrian`) with
 * `{"topic": "bus.claim", "payload": {"role": ...}}`; a role has at most one owner. Owners send
 * `control.*` frames (and pedestrian owners `pedestrian.pose` / `pedestrian.tracker`), which are
 * queued for the bridge node to publish at its current tick. The client's `tick` field is
 * ignored: inputs are always stamped with the tick at which they are published. Control topics
 * are last-write-wins within a tick.
 */
class WsBridge
{
public:
  explicit WsBridge(unsigned short port = 0);
  ~WsBridge();

  WsBridge(const WsBridge &) = delete;
  WsBridge & operator=(const WsBridge &) = delete;

  unsigned short port() const;
  std::size_t session_count() const;

  void broadcast(const Envelope & envelope);

  /// Drains queued console inputs; `sender` and `tick` are left for the publisher to fill.
  std::vector<Envelope> take_inputs();

  void stop();

private:
  class Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace twinloop::bus

#endif  // TWINLOOP__BUS__WS_BRIDGE_HPP_
