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

#ifndef TWINLOOP__WARNING__WARNING_SERVICE_HPP_
#define TWINLOOP__WARNING__WARNING_SERVICE_HPP_

#include "twinloop/world/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>

namespace twinloop::warning
{

/// Arrival times at the conflict point and their absolute difference.
struct TtcResult
{
  std::optional<double> t_veh;
  std::optional<double> t_ped;
  std::optional<double> ttc;

  friend bool operator==(const TtcResult &, const TtcResult &) = default;
};

struct WarningEvent
{
  std::uint64_t tick{0};
  double sim_time{0.0};
  double ttc{0.0};
  bool to_vehicle{false};
  bool to_pedestrian{false};

  friend bool operator==(const WarningEvent &, const WarningEvent &) = default;
};

TtcResult compute_ttc(double d_veh, double v_veh, double d_ped, double v_ped);
TtcResult compute_ttc(const world::VehicleState & vehicle, const world::PedestrianState & pedestrian);

/// Strict comparison: a TTC equal to the threshold does not trigger.
bool evaluate_trigger(const TtcResult & ttc, double threshold);

/**
 * @brief route a trigger to its recipients for the running experiment
 *
 * CV_PED warns both vehicle and pedestrian; AV_PED produces a recipient-less event (the AEB
 * consumes the same trigger on board); HDV_PED never emits anything.
 */
std::optional<WarningEvent> dispatch(
  bool trigger, world::ExperimentKind experiment, std::uint64_t tick, double sim_time,
  std::optional<double> ttc);

/// Per-run warning service: evaluates every snapshot and remembers first receipt per entity.
class WarningService
{
public:
  WarningService(world::ExperimentKind experiment, double threshold);

  std::optional<WarningEvent> on_snapshot(
    std::uint64_t tick, double sim_time, const world::VehicleState & vehicle,
    const world::PedestrianState & pedestrian);

  std::optional<double> first_vehicle_warning_at() const { return first_vehicle_; }
  std::optional<double> first_pedestrian_warning_at() const { return first_pedestrian_; }

private:
  world::ExperimentKind experiment_;
  double threshold_;
  std::optional<double> first_vehicle_;
  std::optional<double> first_pedestrian_;
};

void to_json(nlohmann::json & j, const WarningEvent & e);
void from_json(const nlohmann::json & j, WarningEvent & e);

}  // namespace twinloop::warning

#endif  // TWINLOOP__WARNING__WARNING_SERVICE_HPP_
