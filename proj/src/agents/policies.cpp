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

#include "twinloop/agents/policies.hpp"

#include "twinloop/world/occlusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace twinloop::agents
{

namespace
{

// Tick times are tick * dt, so an elapsed interval can land an ulp short of the delay.
constexpr double kClockSlack = 1e-9;

bool elapsed(std::optional<double> since, double delay, double now)
{
  return since.has_value() && now - *since + kClockSlack >= delay;
}

}  // namespace

DriverDecision hdv_driver_policy(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  std::span<const world::Obstacle> obstacles, const DriverConfig & config,
  std::optional<double> perceived_at, double now)
{
  if (config.reacts_to != Perception::Sight) {
    throw std::invalid_argument("hdv driver requires a sight-reacting config");
  }
  DriverDecision decision{0.0, perceived_at};
  if (!decision.perceived_at && pedestrian.phase == world::PedestrianPhase::Crossing &&
      world::line_of_sight(vehicle.position, pedestrian.position, obstacles)) {
    decision.perceived_at = now;
  }
  if (vehicle.speed > 0.0 && elapsed(decision.perceived_at, config.perception_reaction_time, now)) {
    decision.accel_cmd = -config.braking_decel;
  }
  return decision;
}

double cv_driver_policy(const world::VehicleState & vehicle, const DriverConfig & config, double now)
{
  if (config.reacts_to != Perception::Warning) {
    throw std::invalid_argument("cv driver requires a warning-reacting config");
  }
  if (vehicle.speed > 0.0 &&
      elapsed(vehicle.warning_received_at, config.perception_reaction_time, now)) {
    return -config.braking_decel;
  }
  return 0.0;
}

PedestrianDecision pedestrian_policy(
  const world::PedestrianState & pedestrian, const world::SignalState & signal,
  const PedestrianConfig & config, double walk_speed, double exit_margin, double now)
{
  using world::PedestrianPhase;
  switch (pedestrian.phase) {
    case PedestrianPhase::Waiting:
      if (signal.pedestrian_light == world::PedestrianLight::Walk) {
        return {PedestrianPhase::Crossing, walk_speed};
      }
      return {PedestrianPhase::Waiting, 0.0};
    case PedestrianPhase::Crossing:
      if (config.reacts_to_warning &&
          elapsed(pedestrian.warning_received_at, config.stop_reaction_time, now)) {
        return {PedestrianPhase::StoppedByWarning, 0.0};
      }
      if (pedestrian.distance_to_conflict <= -exit_margin) {
        return {PedestrianPhase::Crossed, 0.0};
      }
      return {PedestrianPhase::Crossing, walk_speed};
    case PedestrianPhase::StoppedByWarning:
    case PedestrianPhase::Crossed:
      return {pedestrian.phase, 0.0};
  }
  return {pedestrian.phase, 0.0};
}

double human_vehicle_command(double lever, const HumanControlConfig & config)
{
  const double clamped = std::clamp(lever, -1.0, 1.0);
  return clamped >= 0.0 ? clamped * config.max_accel : clamped * config.max_brake;
}

}  // namespace twinloop::agents
