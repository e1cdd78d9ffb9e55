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

#ifndef TWINLOOP__WORLD__KINEMATICS_HPP_
#define TWINLOOP__WORLD__KINEMATICS_HPP_

#include "twinloop/world/types.hpp"

#include <optional>

namespace twinloop::world
{

/**
 * @brief advance the vehicle one tick with semi-implicit Euler
 *
 * v' = max(0, v + a dt); the vehicle then travels v' dt along its heading and the same arc
 * length is removed from distance_to_conflict. A stopped vehicle stays stopped until a positive
 * command arrives. The returned state carries `accel_cmd`.
 *
 * @throws std::invalid_argument on non-finite input or dt <= 0
 */
VehicleState step_vehicle(const VehicleState & state, double accel_cmd, double dt);

/// Moves the pedestrian at the commanded (non-negative) speed for one tick.
PedestrianState step_pedestrian(const PedestrianState & state, double speed_cmd, double dt);

/// Arrival time d / v; absent for a stopped entity or one already at or past the conflict point.
std::optional<double> eta_to_conflict(double distance, double speed);

/// Flips DontWalk to Walk at the first call where `vehicle_eta` is present and <= threshold.
SignalState update_signal(
  const SignalState & signal, std::optional<double> vehicle_eta, double threshold, double now);

}  // namespace twinloop::world

#endif  // TWINLOOP__WORLD__KINEMATICS_HPP_
