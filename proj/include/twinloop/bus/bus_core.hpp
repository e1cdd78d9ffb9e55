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

#ifndef TWINLOOP__BUS__BUS_CORE_HPP_
#define TWINLOOP__BUS__BUS_CORE_HPP_

#include "twinloop/bus/envelope.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace twinloop::bus
{

inline constexpr std::chrono::milliseconds kDefaultBarrierTimeout{5000};

/// Result of a completed barrier: the tick now open and everything published during the tick
/// that just closed, for the topics this node subscribes to.
struct TickGrant
{
  std::uint64_t tick{0};
  std::vector<Envelope> messages;
};

/**
 * @brief the single ordering point of the bus: node registry, lockstep barrier, routing
 *
 * Messages published during tick k are held until every expected node has arrived at the
 * tick-k barrier, then delivered with the tick k+1 grant in (sender, topic, seq) order. Delivery
 * therefore never depends on thread or socket scheduling, and no node can see tick-k data
 * before all tick-k publishes are in. A subscription made during tick k covers that tick's
 * batch onwards.
 *
 * Any failure (timeout, unexpected disconnect, re-registration) aborts the run for every node.
 * Thread-safe.
 */
class BusCore
{
public:
  BusCore(
    std::set<std::string> expected_nodes,
    std::chrono::milliseconds barrier_timeout = kDefaultBarrierTimeout);

  BusCore(const BusCore &) = delete;
  BusCore & operator=(const BusCore &) = delete;

  /// @throws BusError(UnregisteredNode) for an unknown id, BusError(Desync) for a second
  /// registration of the same id
  void register_node(const std::string & node);

  void subscribe(const std::string & node, const std::string & topic);

  /// @return per-(topic, sender) sequence number, starting at 0
  std::uint64_t publish(
    const std::string & node, const std::string & topic, nlohmann::json payload,
    std::uint64_t tick);

  /// Blocks until every expected node has arrived at `tick` or the barrier times out.
  TickGrant arrive(const std::string & node, std::uint64_t tick);

  /// Graceful departure at the end of a run; the node no longer gates the barrier.
  void leave(const std::string & node);

  /// Unexpected loss of a registered node; aborts the run.
  void disconnect(const std::string & node);

  void abort(BusErrorKind kind, const std::string & reason);

  std::uint64_t current_tick() const;
  bool is_registered(const std::string & node) const;
  std::optional<std::pair<BusErrorKind, std::string>> failure() const;

private:
  void check_node_locked(const std::string & node) const;
  void check_tick_locked(const std::string & node, std::uint64_t tick) const;
  void release_locked();
  void abort_locked(BusErrorKind kind, const std::string & reason);
  [[noreturn]] void throw_failure_locked() const;

  mutable std::mutex mutex_;
  std::condition_variable released_;
  std::set<std::string> expected_;
  std::set<std::string> registered_;
  std::set<std::string> departed_;
  std::set<std::string> arrived_;
  std::map<std::string, std::set<std::string>> subscriptions_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> next_seq_;
  std::vector<Envelope> pending_;
  std::map<std::string, std::vector<Envelope>> inbox_;
  std::chrono::milliseconds timeout_;
  std::chrono::steady_clock::time_point deadline_{};
  std::uint64_t tick_{0};
  std::uint64_t generation_{0};
  std::optional<std::pair<BusErrorKind, std::string>> failure_;
};

}  // namespace twinloop::bus

#endif  // TWINLOOP__BUS__BUS_CORE_HPP_
