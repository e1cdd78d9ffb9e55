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

#ifndef TWINLOOP__WORLD__SCENARIO_HPP_
#define TWINLOOP__WORLD__SCENARIO_HPP_

#include "twinloop/world/types.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace twinloop::world
{

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Straight path through the conflict point.
struct PathSpec
{
  Vec2 origin{};
  Vec2 direction{1.0, 0.0};
  Vec2 conflict_point{};

  friend bool operator==(const PathSpec &, const PathSpec &) = default;
};

struct CrossingSpec
{
  Vec2 origin{};
  Vec2 direction{0.0, 1.0};
  Vec2 conflict_point{};
  double zebra_x{0.0};

  friend bool operator==(const CrossingSpec &, const CrossingSpec &) = default;
};

/// Scene geometry and case-study parameters. Speeds are SI; the JSON loader also accepts
/// `v_vehicle_initial_mph` and converts it with the exact mph factor.
struct Scenario
{
  PathSpec vehicle_path;
  CrossingSpec crossing_path;
  std::vector<Obstacle> obstacles;
  double v_vehicle_initial{25.0 * kMetersPerSecondPerMph};
  double v_pedestrian{1.0};
  double ttc_threshold{1.5};
  double signal_eta_trigger{5.0};
  double dt{0.02};
  ExperimentKind experiment{ExperimentKind::HdvPed};

  // Run termination and contact geometry.
  double max_sim_time{30.0};
  double pedestrian_exit_margin{2.0};
  Vec2 vehicle_half_extents{2.25, 0.95};
  double pedestrian_radius{0.3};

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// @throws ScenarioError naming the offending field
void validate(const Scenario & scenario);

Scenario scenario_from_json(const nlohmann::json & j);
nlohmann::json scenario_to_json(const Scenario & scenario);

VehicleState initial_vehicle(const Scenario & scenario);
PedestrianState initial_pedestrian(const Scenario & scenario);

/// Signed distance from the vehicle reference point to the zebra line along the heading.
double distance_to_zebra(const Scenario & scenario, const VehicleState & vehicle);

}  // namespace twinloop::world

#endif  // TWINLOOP__WORLD__SCENARIO_HPP_
