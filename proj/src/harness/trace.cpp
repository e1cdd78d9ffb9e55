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

#include "twinloop/harness/trace.hpp"

#include "twinloop/warning/warning_service.hpp"
#include "twinloop/world/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace twinloop::harness
{

namespace
{

constexpr double kTimeSlack = 1e-9;

bool terminal(world::PedestrianPhase phase)
{
  return phase == world::PedestrianPhase::StoppedByWarning ||
         phase == world::PedestrianPhase::Crossed;
}

}  // namespace

bool in_contact(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  world::Vec2 vehicle_half_extents, double pedestrian_radius)
{
  const world::Vec2 h = vehicle.heading * (1.0 / vehicle.heading.norm());
  const world::Vec2 rel = pedestrian.position - vehicle.position;
  const double along = world::dot(rel, h);
  const double across = world::cross(h, rel);
  return std::abs(along) <= vehicle_half_extents.x + pedestrian_radius &&
         std::abs(across) <= vehicle_half_extents.y + pedestrian_radius;
}

TraceBuilder::TraceBuilder(RunConfig config) : config_(std::move(config))
{
  trace_.dt = config_.scenario.dt;
}

void TraceBuilder::consume_batch(std::span<const bus::Envelope> batch)
{
  if (done()) {
    return;
  }
  std::optional<world::VehicleState> vehicle;
  std::optional<world::PedestrianState> pedestrian;
  std::optional<world::SignalState> signal;
  std::vector<std::string> extra_events;
  std::optional<std::uint64_t> tick;

  for (const auto & e : batch) {
    if (e.topic == bus::topics::kVehicleState) {
      vehicle = e.payload.get<world::VehicleState>();
      tick = e.tick;
    } else if (e.topic == bus::topics::kPedestrianState) {
      pedestrian = e.payload.get<world::PedestrianState>();
      tick = e.tick;
    } else if (e.topic == bus::topics::kSignalState) {
      signal = e.payload.get<world::SignalState>();
    } else if (e.topic == bus::topics::kWarningEvent) {
      const auto event = e.payload.get<warning::WarningEvent>();
      if (event.to_vehicle || event.to_pedestrian) {
        extra_events.emplace_back(events::kWarning);
      }
    } else if (e.topic == bus::topics::kAebEvent) {
      extra_events.emplace_back(events::kAebActivated);
    }
  }
  if (!vehicle && !pedestrian) {
    return;
  }
  if (!vehicle || !pedestrian) {
    throw std::runtime_error(
      "tick " + std::to_string(*tick) + " batch lacks the " +
      (vehicle ? "pedestrian" : "vehicle") + " state");
  }

  TraceRecord r;
  r.tick = *tick;
  r.sim_time = static_cast<double>(*tick) * config_.scenario.dt;
  r.vehicle_speed = vehicle->speed;
  r.vehicle_distance = vehicle->distance_to_conflict;
  r.vehicle_distance_to_zebra = world::distance_to_zebra(config_.scenario, *vehicle);
  r.accel_cmd = vehicle->accel_cmd;
  r.pedestrian_speed = pedestrian->speed;
  r.pedestrian_distance = pedestrian->distance_to_conflict;
  r.pedestrian_phase = pedestrian->phase;
  r.light = signal ? signal->pedestrian_light : last_light_;

  if (r.light == world::PedestrianLight::Walk && last_light_ != world::PedestrianLight::Walk) {
    r.events.emplace_back(events::kSignalWalk);
  }
  for (auto & ev : extra_events) {
    r.events.push_back(std::move(ev));
  }
  if (r.pedestrian_phase != last_phase_) {
    if (r.pedestrian_phase == world::PedestrianPhase::StoppedByWarning) {
      r.events.emplace_back(events::kPedestrianStopped);
    } else if (r.pedestrian_phase == world::PedestrianPhase::Crossed) {
      r.events.emplace_back(events::kPedestrianCrossed);
    }
  }
  const bool stopped = vehicle->speed == 0.0;
  if (stopped && !vehicle_stopped_) {
    r.events.emplace_back(events::kVehicleStopped);
  }
  const bool contact = in_contact(
    *vehicle, *pedestrian, config_.scenario.vehicle_half_extents,
    config_.scenario.pedestrian_radius);
  if (contact) {
    r.events.emplace_back(events::kCollision);
  }

  vehicle_stopped_ = stopped;
  last_phase_ = r.pedestrian_phase;
  last_light_ = r.light;
  const double sim_time = r.sim_time;
  const bool finished = stopped && terminal(r.pedestrian_phase);
  trace_.records.push_back(std::move(r));

  if (contact) {
    trace_.end_reason = "collision";
  } else if (finished) {
    trace_.end_reason = "completed";
  } else if (sim_time + kTimeSlack >= config_.scenario.max_sim_time) {
    trace_.end_reason = "timeout";
  }
}

}  // namespace twinloop::harness
