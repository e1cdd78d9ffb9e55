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

#ifndef TWINLOOP__HARNESS__TRACE_HPP_
#define TWINLOOP__HARNESS__TRACE_HPP_

#include "twinloop/bus/envelope.hpp"
#include "twinloop/harness/run_config.hpp"
#include "twinloop/world/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twinloop::harness
{

namespace events
{
inline constexpr std::string_view kSignalWalk = "signal_walk";
inline constexpr std::string_view kWarning = "warning";
inline constexpr std::string_view kAebActivated = "aeb_activated";
inline constexpr std::string_view kPedestrianStopped = "pedestrian_stopped";
inline constexpr std::string_view kPedestrianCrossed = "pedestrian_crossed";
inline constexpr std::string_view kVehicleStopped = "vehicle_stopped";
inline constexpr std::string_view kCollision = "collision";
}  // namespace events

struct TraceRecord
{
  std::uint64_t tick{0};
  double sim_time{0.0};
  double vehicle_speed{0.0};
  double vehicle_distance{0.0};
  double vehicle_distance_to_zebra{0.0};
  double accel_cmd{0.0};
  double pedestrian_speed{0.0};
  double pedestrian_distance{0.0};
  world::PedestrianPhase pedestrian_phase{world::PedestrianPhase::Waiting};
  world::PedestrianLight light{world::PedestrianLight::DontWalk};
  std::vector<std::string> events;

  friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
};

struct RunTrace
{
  double dt{0.02};
  std::vector<TraceRecord> records;
  std::string end_reason;

  friend bool operator==(const RunTrace &, const RunTrace &) = default;
};

/// True when the pedestrian disc touches the vehicle's oriented footprint.
bool in_contact(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  world::Vec2 vehicle_half_extents, double pedestrian_radius);

/**
 * @brief assembles a RunTrace from bus traffic, one tick batch at a time
 *
 * Used live by the recorder node and offline by replay, so both derive the identical trace. A
 * batch holds everything published during one tick. The run ends on contact, when the vehicle
 * is stopped and the pedestrian has finished (stopped by a warning or crossed), or at the
 * scenario's sim-time limit.
 */
class TraceBuilder
{
public:
  explicit TraceBuilder(RunConfig config);

  /// @throws std::runtime_error when a state batch is missing the vehicle or pedestrian state
  void consume_batch(std::span<const bus::Envelope> batch);

  bool done() const { return !trace_.end_reason.empty(); }
  const RunTrace & trace() const { return trace_; }
  const RunConfig & config() const { return config_; }

private:
  RunConfig config_;
  RunTrace trace_;
  bool vehicle_stopped_{false};
  world::PedestrianPhase last_phase_{world::PedestrianPhase::Waiting};
  world::PedestrianLight last_light_{world::PedestrianLight::DontWalk};
};

}  // namespace twinloop::harness

#endif  // TWINLOOP__HARNESS__TRACE_HPP_
