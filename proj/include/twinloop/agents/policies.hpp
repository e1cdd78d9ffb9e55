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

#ifndef TWINLOOP__AGENTS__POLICIES_HPP_
#define TWINLOOP__AGENTS__POLICIES_HPP_

#include "twinloop/agents/config.hpp"
#include "twinloop/world/types.hpp"

#include <optional>
#include <span>

namespace twinloop::agents
{

struct DriverDecision
{
  double accel_cmd{0.0};
  /// First time the driver perceived the hazard; carried by the caller between ticks.
  std::optional<double> perceived_at;
};

/**
 * @brief scripted human driver without connectivity
 *
 * Perceives the pedestrian once the line of sight is open and the pedestrian is crossing,
 * then brakes at `braking_decel` after the reaction time until the vehicle is stopped.
 */
DriverDecision hdv_driver_policy(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  std::span<const world::Obstacle> obstacles, const DriverConfig & config,
  std::optional<double> perceived_at, double now);

/// Connected driver: brakes `perception_reaction_time` after the first warning receipt.
double cv_driver_policy(
  const world::VehicleState & vehicle, const DriverConfig & config, double now);

struct PedestrianDecision
{
  world::PedestrianPhase phase{world::PedestrianPhase::Waiting};
  double speed_cmd{0.0};
};

/// Scripted pedestrian: waits for Walk, crosses at `walk_speed`, stops on a warning when
/// configured to react, and finishes once past the conflict point by `exit_margin`.
PedestrianDecision pedestrian_policy(
  const world::PedestrianState & pedestrian, const world::SignalState & signal,
  const PedestrianConfig & config, double walk_speed, double exit_margin, double now);

/// Throttle/brake lever in [-1, 1] to an acceleration command.
double human_vehicle_command(double lever, const HumanControlConfig & config);

}  // namespace twinloop::agents

#endif  // TWINLOOP__AGENTS__POLICIES_HPP_
