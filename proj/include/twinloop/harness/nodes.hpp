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

#ifndef TWINLOOP__HARNESS__NODES_HPP_
#define TWINLOOP__HARNESS__NODES_HPP_

#include "twinloop/aeb/aeb_controller.hpp"
#include "twinloop/agents/policies.hpp"
#include "twinloop/bus/client.hpp"
#include "twinloop/bus/ws_bridge.hpp"
#include "twinloop/harness/run_config.hpp"
#include "twinloop/harness/trace.hpp"
#include "twinloop/pose/avatar.hpp"
#include "twinloop/pose/locomotion.hpp"
#include "twinloop/warning/warning_service.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace twinloop::harness
{

namespace node_ids
{
inline constexpr std::string_view kVehicle = "vehicle";
inline constexpr std::string_view kPedestrian = "pedestrian";
inline constexpr std::string_view kWarning = "warning";
inline constexpr std::string_view kParticipant = "participant";
inline constexpr std::string_view kRecorder = "harness";
inline constexpr std::string_view kBridge = "ws-bridge";
}  // namespace node_ids

/**
 * @brief one participant in the lockstep loop
 *
 * on_tick(k) publishes the node's tick-k output. `inbox` holds everything delivered with the
 * tick-k grant, i.e. what was published during tick k-1 (empty at tick 0).
 */
class Node
{
public:
  virtual ~Node() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> subscriptions() const = 0;
  virtual void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) = 0;
};

/// Drives `node` until a run.stop envelope is delivered, then leaves the bus.
void run_node(Node & node, bus::BusClient & client);

/// Vehicle world: kinematics, pedestrian signal, and the driver or AEB of the experiment.
class VehicleWorldNode : public Node
{
public:
  explicit VehicleWorldNode(const RunConfig & config);
  std::string id() const override { return std::string(node_ids::kVehicle); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

private:
  double choose_command(double now, bus::BusClient & bus, std::uint64_t tick);
  void publish_state(bus::BusClient & bus);

  RunConfig config_;
  world::VehicleState vehicle_;
  world::PedestrianState pedestrian_;
  world::SignalState signal_;
  aeb::AebState aeb_;
  std::optional<double> perceived_at_;
  std::optional<double> human_command_;
};

/// Pedestrian world: crossing kinematics driven by the script, a leg tracker, or a console.
class PedestrianWorldNode : public Node
{
public:
  explicit PedestrianWorldNode(const RunConfig & config);
  std::string id() const override { return std::string(node_ids::kPedestrian); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

  std::size_t rejected_pose_frames() const { return rejected_pose_frames_; }

private:
  agents::PedestrianDecision tracker_decision() const;
  agents::PedestrianDecision console_decision(bool walk) const;

  RunConfig config_;
  world::PedestrianState pedestrian_;
  world::SignalState signal_;
  std::optional<bool> console_walk_;
  pose::LocomotionDetector locomotion_;
  std::vector<std::string> skeleton_;
  std::optional<nlohmann::json> avatar_;
  std::size_t rejected_pose_frames_{0};
};

/// Evaluates TTC on every snapshot and publishes warning.event while the trigger holds.
class WarningServiceNode : public Node
{
public:
  explicit WarningServiceNode(const RunConfig & config);
  std::string id() const override { return std::string(node_ids::kWarning); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

private:
  double dt_;
  warning::WarningService service_;
};

/**
 * @brief seeded stand-in for a person stepping in place on the leg trackers
 *
 * Starts stepping on Walk, stops `stop_reaction_time` after a warning addressed to the
 * pedestrian, and stops once its avatar has crossed. Streams one tracker sample per tick on
 * pedestrian.tracker and a 33-keypoint frame every `pose_period` ticks on pedestrian.pose.
 */
class ParticipantNode : public Node
{
public:
  explicit ParticipantNode(const RunConfig & config, std::uint64_t pose_period = 5);
  std::string id() const override { return std::string(node_ids::kParticipant); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

private:
  RunConfig config_;
  std::uint64_t pose_period_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  double phase_offset_;
  std::optional<double> stepping_since_;
  std::optional<double> warned_at_;
  bool walk_seen_{false};
  bool done_{false};
  world::Vec2 position_;
};

/// Records every envelope, builds the trace, and ends the run. Paces ticks when asked.
class RecorderNode : public Node
{
public:
  RecorderNode(const RunConfig & config, double ticks_per_second = 0.0);
  std::string id() const override { return std::string(node_ids::kRecorder); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

  const std::vector<bus::Envelope> & log() const { return log_; }
  const TraceBuilder & builder() const { return builder_; }

private:
  RunConfig config_;
  double ticks_per_second_;
  TraceBuilder builder_;
  std::vector<bus::Envelope> log_;
  bool stop_sent_{false};
  std::chrono::steady_clock::time_point started_{};
};

/// Mirrors the bus to WebSocket consoles and publishes their inputs.
class BridgeNode : public Node
{
public:
  explicit BridgeNode(bus::WsBridge & bridge) : bridge_(bridge) {}
  std::string id() const override { return std::string(node_ids::kBridge); }
  std::vector<std::string> subscriptions() const override;
  void on_tick(
    std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus) override;

private:
  bus::WsBridge & bridge_;
};

/// Nodes a child process can host: vehicle, pedestrian, warning, participant.
/// @throws std::invalid_argument for any other role
std::unique_ptr<Node> make_world_node(const std::string & role, const RunConfig & config);

/// World-side node ids a run with `config` needs, excluding the recorder and bridge.
std::vector<std::string> world_node_ids(const RunConfig & config);

}  // namespace twinloop::harness

#endif  // TWINLOOP__HARNESS__NODES_HPP_
