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

#include "twinloop/warning/warning_service.hpp"

#include "twinloop/world/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace twinloop::warning
{

using nlohmann::json;

TtcResult compute_ttc(double d_veh, double v_veh, double d_ped, double v_ped)
{
  TtcResult result;
  result.t_veh = world::eta_to_conflict(d_veh, v_veh);
  result.t_ped = world::eta_to_conflict(d_ped, v_ped);
  if (result.t_veh && result.t_ped) {
    result.ttc = std::abs(*result.t_veh - *result.t_ped);
  }
  return result;
}

TtcResult compute_ttc(const world::VehicleState & vehicle, const world::PedestrianState & pedestrian)
{
  return compute_ttc(
    vehicle.distance_to_conflict, vehicle.speed, pedestrian.distance_to_conflict, pedestrian.speed);
}

bool evaluate_trigger(const TtcResult & ttc, double threshold)
{
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("TTC threshold must be positive");
  }
  return ttc.ttc.has_value() && *ttc.ttc < threshold;
}

std::optional<WarningEvent> dispatch(
  bool trigger, world::ExperimentKind experiment, std::uint64_t tick, double sim_time,
  std::optional<double> ttc)
{
  if (!trigger || !ttc) {
    return std::nullopt;
  }
  switch (experiment) {
    case world::ExperimentKind::HdvPed:
      return std::nullopt;
    case world::ExperimentKind::AvPed:
      return WarningEvent{tick, sim_time, *ttc, false, false};
    case world::ExperimentKind::CvPed:
      return WarningEvent{tick, sim_time, *ttc, true, true};
  }
  return std::nullopt;
}

WarningService::WarningService(world::ExperimentKind experiment, double threshold)
: experiment_(experiment), threshold_(threshold)
{
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("TTC threshold must be positive");
  }
}

std::optional<WarningEvent> WarningService::on_snapshot(
  std::uint64_t tick, double sim_time, const world::VehicleState & vehicle,
  const world::PedestrianState & pedestrian)
{
  const auto ttc = compute_ttc(vehicle, pedestrian);
  auto event = dispatch(evaluate_trigger(ttc, threshold_), experiment_, tick, sim_time, ttc.ttc);
  if (event) {
    if (event->to_vehicle && !first_vehicle_) {
      first_vehicle_ = sim_time;
    }
    if (event->to_pedestrian && !first_pedestrian_) {
      first_pedestrian_ = sim_time;
    }
  }
  return event;
}

void to_json(json & j, const WarningEvent & e)
{
  json recipients = json::array();
  if (e.to_vehicle) recipients.push_back("vehicle");
  if (e.to_pedestrian) recipients.push_back("pedestrian");
  j = json{{"tick", e.tick}, {"sim_time", e.sim_time}, {"ttc", e.ttc}, {"recipients", recipients}};
}

void from_json(const json & j, WarningEvent & e)
{
  e.tick = j.at("tick").get<std::uint64_t>();
  e.sim_time = j.at("sim_time").get<double>();
  e.ttc = j.at("ttc").get<double>();
  e.to_vehicle = false;
  e.to_pedestrian = false;
  for (const auto & r : j.at("recipients")) {
    const auto name = r.get<std::string>();
    if (name == "vehicle") {
      e.to_vehicle = true;
    } else if (name == "pedestrian") {
      e.to_pedestrian = true;
    } else {
      throw std::invalid_argument("unknown warning recipient: " + name);
    }
  }
}

}  // namespace twinloop::warning
