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

#include "twinloop/world/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twinloop::world
{

namespace
{

void require_finite(double value, const char * what)
{
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

void require_step(double dt)
{
  require_finite(dt, "dt");
  if (dt <= 0.0) {
    throw std::invalid_argument("dt must be positive");
  }
}

}  // namespace

VehicleState step_vehicle(const VehicleState & state, double accel_cmd, double dt)
{
  require_finite(accel_cmd, "accel_cmd");
  require_finite(state.speed, "speed");
  require_finite(state.distance_to_conflict, "distance_to_conflict");
  if (!state.position.finite() || !state.heading.finite()) {
    throw std::invalid_argument("non-finite vehicle position or heading");
  }
  require_step(dt);

  VehicleState next = state;
  next.speed = std::max(0.0, state.speed + accel_cmd * dt);
  const double travel = next.speed * dt;
  next.position = state.position + state.heading * travel;
  next.distance_to_conflict = state.distance_to_conflict - travel;
  next.accel_cmd = accel_cmd;
  return next;
}

PedestrianState step_pedestrian(const PedestrianState & state, double speed_cmd, double dt)
{
  require_finite(speed_cmd, "speed_cmd");
  require_step(dt);
  if (speed_cmd < 0.0) {
    throw std::invalid_argument("pedestrian speed must be non-negative");
  }

  PedestrianState next = state;
  next.speed = speed_cmd;
  const double travel = speed_cmd * dt;
  next.position = state.position + state.heading * travel;
  next.distance_to_conflict = state.distance_to_conflict - travel;
  return next;
}

std::optional<double> eta_to_conflict(double distance, double speed)
{
  if (!(speed > 0.0) || !(distance > 0.0)) {
    return std::nullopt;
  }
  return distance / speed;
}

SignalState update_signal(
  const SignalState & signal, std::optional<double> vehicle_eta, double threshold, double now)
{
  if (signal.pedestrian_light == PedestrianLight::Walk) {
    return signal;
  }
  if (vehicle_eta && *vehicle_eta <= threshold) {
    return SignalState{PedestrianLight::Walk, now};
  }
  return signal;
}

}  // namespace twinloop::world
