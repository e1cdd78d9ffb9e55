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

#include "twinloop/world/scenario.hpp"

#include <cmath>

namespace twinloop::world
{

using nlohmann::json;

namespace
{

constexpr double kOnPathTolerance = 1e-9;

Vec2 unit(Vec2 v) { return v * (1.0 / v.norm()); }

void require_positive(double value, const char * field)
{
  if (!std::isfinite(value) || value <= 0.0) {
    throw ScenarioError(std::string(field) + " must be a positive finite number");
  }
}

void require_on_path(Vec2 origin, Vec2 direction, Vec2 conflict, const char * path)
{
  if (!origin.finite() || !direction.finite() || !conflict.finite()) {
    throw ScenarioError(std::string(path) + ": non-finite coordinates");
  }
  if (direction.norm() == 0.0) {
    throw ScenarioError(std::string(path) + ".direction must be non-zero");
  }
  const Vec2 dir = unit(direction);
  const Vec2 offset = conflict - origin;
  if (std::abs(cross(dir, offset)) > kOnPathTolerance * std::max(1.0, offset.norm())) {
    throw ScenarioError(std::string(path) + ": conflict point is not on the path");
  }
  if (dot(dir, offset) < 0.0) {
    throw ScenarioError(std::string(path) + ": conflict point lies behind the origin");
  }
}

template <typename T>
void read_if_present(const json & j, const char * key, T & out)
{
  if (const auto it = j.find(key); it != j.end()) {
    out = it->get<T>();
  }
}

}  // namespace

void validate(const Scenario & s)
{
  require_positive(s.dt, "dt");
  require_positive(s.v_vehicle_initial, "v_vehicle_initial");
  require_positive(s.v_pedestrian, "v_pedestrian");
  require_positive(s.ttc_threshold, "ttc_threshold");
  require_positive(s.signal_eta_trigger, "signal_eta_trigger");
  require_positive(s.max_sim_time, "max_sim_time");
  require_positive(s.vehicle_half_extents.x, "vehicle_half_extents.x");
  require_positive(s.vehicle_half_extents.y, "vehicle_half_extents.y");
  if (!std::isfinite(s.pedestrian_exit_margin) || s.pedestrian_exit_margin < 0.0) {
    throw ScenarioError("pedestrian_exit_margin must be non-negative");
  }
  if (!std::isfinite(s.pedestrian_radius) || s.pedestrian_radius < 0.0) {
    throw ScenarioError("pedestrian_radius must be non-negative");
  }
  require_on_path(
    s.vehicle_path.origin, s.vehicle_path.direction, s.vehicle_path.conflict_point,
    "vehicle_path");
  require_on_path(
    s.crossing_path.origin, s.crossing_path.direction, s.crossing_path.conflict_point,
    "crossing_path");
  if (s.vehicle_path.conflict_point != s.crossing_path.conflict_point) {
    throw ScenarioError("vehicle_path and crossing_path disagree on the conflict point");
  }
  if (s.vehicle_path.direction.x == 0.0) {
    throw ScenarioError("vehicle_path.direction must have an x component to reach the zebra line");
  }
  if (!std::isfinite(s.crossing_path.zebra_x)) {
    throw ScenarioError("crossing_path.zebra_x must be finite");
  }
  for (const auto & obstacle : s.obstacles) {
    if (!obstacle.center.finite() || !(obstacle.half_extents.x > 0.0) ||
        !(obstacle.half_extents.y > 0.0) || !obstacle.half_extents.finite()) {
      throw ScenarioError("obstacle half_extents must be positive and finite");
    }
  }
}

Scenario scenario_from_json(const json & j)
{
  Scenario s;
  try {
    const auto & vp = j.at("vehicle_path");
    s.vehicle_path.origin = vp.at("origin").get<Vec2>();
    s.vehicle_path.direction = vp.at("direction").get<Vec2>();
    s.vehicle_path.conflict_point = vp.at("conflict_point").get<Vec2>();

    const auto & cp = j.at("crossing_path");
    s.crossing_path.origin = cp.at("origin").get<Vec2>();
    s.crossing_path.direction = cp.at("direction").get<Vec2>();
    s.crossing_path.conflict_point = cp.at("conflict_point").get<Vec2>();
    s.crossing_path.zebra_x = cp.value("zebra_x", s.crossing_path.conflict_point.x);

    read_if_present(j, "obstacles", s.obstacles);
    if (const auto it = j.find("v_vehicle_initial_mph"); it != j.end()) {
      s.v_vehicle_initial = it->get<double>() * kMetersPerSecondPerMph;
    }
    read_if_present(j, "v_vehicle_initial", s.v_vehicle_initial);
    read_if_present(j, "v_pedestrian", s.v_pedestrian);
    read_if_present(j, "ttc_threshold", s.ttc_threshold);
    read_if_present(j, "signal_eta_trigger", s.signal_eta_trigger);
    read_if_present(j, "dt", s.dt);
    if (const auto it = j.find("experiment"); it != j.end()) {
      s.experiment = parse_experiment(it->get<std::string>());
    }
    read_if_present(j, "max_sim_time", s.max_sim_time);
    read_if_present(j, "pedestrian_exit_margin", s.pedestrian_exit_margin);
    read_if_present(j, "vehicle_half_extents", s.vehicle_half_extents);
    read_if_present(j, "pedestrian_radius", s.pedestrian_radius);
  } catch (const json::exception & e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  } catch (const std::invalid_argument & e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  validate(s);
  return s;
}

json scenario_to_json(const Scenario & s)
{
  return json{
    {"vehicle_path",
     {{"origin", s.vehicle_path.origin},
      {"direction", s.vehicle_path.direction},
      {"conflict_point", s.vehicle_path.conflict_point}}},
    {"crossing_path",
     {{"origin", s.crossing_path.origin},
      {"direction", s.crossing_path.direction},
      {"conflict_point", s.crossing_path.conflict_point},
      {"zebra_x", s.crossing_path.zebra_x}}},
    {"obstacles", s.obstacles},
    {"v_vehicle_initial", s.v_vehicle_initial},
    {"v_pedestrian", s.v_pedestrian},
    {"ttc_threshold", s.ttc_threshold},
    {"signal_eta_trigger", s.signal_eta_trigger},
    {"dt", s.dt},
    {"experiment", to_string(s.experiment)},
    {"max_sim_time", s.max_sim_time},
    {"pedestrian_exit_margin", s.pedestrian_exit_margin},
    {"vehicle_half_extents", s.vehicle_half_extents},
    {"pedestrian_radius", s.pedestrian_radius},
  };
}

VehicleState initial_vehicle(const Scenario & s)
{
  VehicleState v;
  v.kind = vehicle_kind_for(s.experiment);
  v.position = s.vehicle_path.origin;
  v.heading = unit(s.vehicle_path.direction);
  v.speed = s.v_vehicle_initial;
  v.distance_to_conflict = (s.vehicle_path.conflict_point - s.vehicle_path.origin).norm();
  return v;
}

PedestrianState initial_pedestrian(const Scenario & s)
{
  PedestrianState p;
  p.position = s.crossing_path.origin;
  p.heading = unit(s.crossing_path.direction);
  p.distance_to_conflict = (s.crossing_path.conflict_point - s.crossing_path.origin).norm();
  return p;
}

double distance_to_zebra(const Scenario & s, const VehicleState & vehicle)
{
  return (s.crossing_path.zebra_x - vehicle.position.x) / vehicle.heading.x;
}

}  // namespace twinloop::world
