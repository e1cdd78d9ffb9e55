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

#include "twinloop/bus/bus_core.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace twinloop::bus
{

namespace
{

std::string join(const std::set<std::string> & names)
{
  std::ostringstream out;
  bool first = true;
  for (const auto & name : names) {
    out << (first ? "" : ", ") << name;
    first = false;
  }
  return out.str();
}

}  // namespace

BusCore::BusCore(std::set<std::string> expected_nodes, std::chrono::milliseconds barrier_timeout)
: expected_(std::move(expected_nodes)), timeout_(barrier_timeout)
{
}

void BusCore::register_node(const std::string & node)
{
  std::lock_guard lock(mutex_);
  if (failure_) {
    throw_failure_locked();
  }
  if (!expected_.contains(node)) {
    throw BusError(BusErrorKind::UnregisteredNode, "node '" + node + "' is not part of this run");
  }
  if (registered_.contains(node)) {
    abort_locked(BusErrorKind::Desync, "node '" + node + "' reconnected mid-run");
    throw_failure_locked();
  }
  registered_.insert(node);
}

void BusCore::subscribe(const std::string & node, const std::string & topic)
{
  std::lock_guard lock(mutex_);
  check_node_locked(node);
  subscriptions_[node].insert(topic);
}

std::uint64_t BusCore::publish(
  const std::string & node, const std::string & topic, nlohmann::json payload, std::uint64_t tick)
{
  std::lock_guard lock(mutex_);
  check_node_locked(node);
  if (is_reserved(topic)) {
    throw BusError(BusErrorKind::ReservedTopic, "topic '" + topic + "' is reserved");
  }
  check_tick_locked(node, tick);
  const std::uint64_t seq = next_seq_[{topic, node}]++;
  pending_.push_back(Envelope{topic, tick, seq, node, std::move(payload)});
  return seq;
}

TickGrant BusCore::arrive(const std::string & node, std::uint64_t tick)
{
  std::unique_lock lock(mutex_);
  check_node_locked(node);
  check_tick_locked(node, tick);

  if (arrived_.empty()) {
    deadline_ = std::chrono::steady_clock::now() + timeout_;
  }
  arrived_.insert(node);
  const std::uint64_t generation = generation_;

  std::set<std::string> waiting_for;
  std::set_difference(
    expected_.begin(), expected_.end(), arrived_.begin(), arrived_.end(),
    std::inserter(waiting_for, waiting_for.end()));
  for (const auto & gone : departed_) {
    waiting_for.erase(gone);
  }
  if (waiting_for.empty()) {
    release_locked();
  } else {
    const bool released = released_.wait_until(
      lock, deadline_, [&] { return generation_ != generation || failure_.has_value(); });
    if (!released) {
      std::set<std::string> lagging;
      for (const auto & name : expected_) {
        if (!arrived_.contains(name) && !departed_.contains(name)) {
          lagging.insert(name);
        }
      }
      std::ostringstream reason;
      reason << "barrier timeout at tick " << tick_ << ": waiting for " << join(lagging);
      abort_locked(BusErrorKind::BarrierTimeout, reason.str());
    }
  }
  if (failure_) {
    throw_failure_locked();
  }
  TickGrant grant;
  grant.tick = tick_;
  grant.messages = std::move(inbox_[node]);
  inbox_[node].clear();
  return grant;
}

void BusCore::leave(const std::string & node)
{
  std::lock_guard lock(mutex_);
  if (!registered_.contains(node) || departed_.contains(node)) {
    return;
  }
  departed_.insert(node);
  arrived_.erase(node);
  // The departing node may have been the last one others were waiting for.
  std::set<std::string> waiting_for;
  for (const auto & name : expected_) {
    if (!arrived_.contains(name) && !departed_.contains(name)) {
      waiting_for.insert(name);
    }
  }
  if (!arrived_.empty() && waiting_for.empty() && !failure_) {
    release_locked();
  }
}

void BusCore::disconnect(const std::string & node)
{
  std::lock_guard lock(mutex_);
  if (departed_.contains(node) || failure_) {
    return;
  }
  abort_locked(BusErrorKind::Desync, "node '" + node + "' disconnected mid-run");
}

void BusCore::abort(BusErrorKind kind, const std::string & reason)
{
  std::lock_guard lock(mutex_);
  abort_locked(kind, reason);
}

std::uint64_t BusCore::current_tick() const
{
  std::lock_guard lock(mutex_);
  return tick_;
}

bool BusCore::is_registered(const std::string & node) const
{
  std::lock_guard lock(mutex_);
  return registered_.contains(node);
}

std::optional<std::pair<BusErrorKind, std::string>> BusCore::failure() const
{
  std::lock_guard lock(mutex_);
  return failure_;
}

void BusCore::check_node_locked(const std::string & node) const
{
  if (failure_) {
    throw_failure_locked();
  }
  if (!registered_.contains(node) || departed_.contains(node)) {
    throw BusError(BusErrorKind::UnregisteredNode, "node '" + node + "' is not registered");
  }
}

void BusCore::check_tick_locked(const std::string & node, std::uint64_t tick) const
{
  if (tick < tick_) {
    std::ostringstream msg;
    msg << "stale tick " << tick << " from '" << node << "' (barrier at " << tick_ << ")";
    throw BusError(BusErrorKind::StaleTick, msg.str());
  }
  if (tick > tick_) {
    std::ostringstream msg;
    msg << "tick " << tick << " from '" << node << "' is ahead of the barrier at " << tick_;
    throw BusError(BusErrorKind::FutureTick, msg.str());
  }
}

void BusCore::release_locked()
{
  std::stable_sort(pending_.begin(), pending_.end(), [](const Envelope & a, const Envelope & b) {
    return std::tie(a.sender, a.topic, a.seq) < std::tie(b.sender, b.topic, b.seq);
  });
  for (const auto & envelope : pending_) {
    for (const auto & [node, topics] : subscriptions_) {
      if (departed_.contains(node)) {
        continue;
      }
      if (topics.contains(envelope.topic) || topics.contains(std::string(topics::kAll))) {
        inbox_[node].push_back(envelope);
      }
    }
  }
  pending_.clear();
  arrived_.clear();
  ++tick_;
  ++generation_;
  released_.notify_all();
}

void BusCore::abort_locked(BusErrorKind kind, const std::string & reason)
{
  if (!failure_) {
    failure_ = std::make_pair(kind, reason);
  }
  released_.notify_all();
}

void BusCore::throw_failure_locked() const { throw BusError(failure_->first, failure_->second); }

}  // namespace twinloop::bus
