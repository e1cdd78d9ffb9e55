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

#ifndef TWINLOOP__WORLD__TYPES_HPP_
#define TWINLOOP__WORLD__TYPES_HPP_

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::world
{

/// Exact unit conversions applied at the boundary only.
inline constexpr double kMetersPerSecondPerMph = 0.44704;
inline constexpr double kMetersPerFoot = 0.3048;

/// Planar world frame. Vehicles travel along +x, pedestrians cross along y.
struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

enum class VehicleKind { HDV, AV, CV };
enum class ExperimentKind { HdvPed, AvPed, CvPed };
enum class PedestrianPhase { Waiting, Crossing, StoppedByWarning, Crossed };
enum class PedestrianLight { DontWalk, Walk };

std::string_view to_string(VehicleKind kind);
std::string_view to_string(ExperimentKind kind);
std::string_view to_string(PedestrianPhase phase);
std::string_view to_string(PedestrianLight light);

/// Parsers accept the canonical names above; they throw std::invalid_argument otherwise.
ExperimentKind parse_experiment(std::string_view text);
VehicleKind parse_vehicle_kind(std::string_view text);
PedestrianPhase parse_phase(std::string_view text);
PedestrianLight parse_light(std::string_view text);

VehicleKind vehicle_kind_for(ExperimentKind experiment);

/// External kinematic state of the vehicle avatar.
///
/// `distance_to_conflict` is the arc length along the path to the conflict point and goes
/// negative once the vehicle has passed it. `accel_cmd` is the command that produced this
/// state (applied over the preceding tick).
struct VehicleState
{
  std::string id{"vehicle"};
  VehicleKind kind{VehicleKind::HDV};
  Vec2 position{};
  Vec2 heading{1.0, 0.0};
  double speed{0.0};
  double accel_cmd{0.0};
  double distance_to_conflict{0.0};
  std::optional<double> warning_received_at;
  std::optional<double> aeb_activated_at;
  std::optional<double> braking_started_at;

  friend bool operator==(const VehicleState &, const VehicleState &) = default;
};

struct PedestrianState
{
  std::string id{"pedestrian"};
  Vec2 position{};
  Vec2 heading{0.0, 1.0};
  double speed{0.0};
  double distance_to_conflict{0.0};
  PedestrianPhase phase{PedestrianPhase::Waiting};
  std::optional<double> warning_received_at;

  friend bool operator==(const PedestrianState &, const PedestrianState &) = default;
};

/// Axis-aligned rectangular footprint (a parked bus in the default scene).
struct Obstacle
{
  Vec2 center{};
  Vec2 half_extents{};

  friend bool operator==(const Obstacle &, const Obstacle &) = default;
};

struct SignalState
{
  PedestrianLight pedestrian_light{PedestrianLight::DontWalk};
  std::optional<double> changed_at;

  friend bool operator==(const SignalState &, const SignalState &) = default;
};

/// Tick-stamped snapshot of the whole scene.
struct WorldState
{
  std::uint64_t tick{0};
  double sim_time{0.0};
  VehicleState vehicle;
  PedestrianState pedestrian;
  SignalState signal;
  bool warning_active{false};

  friend bool operator==(const WorldState &, const WorldState &) = default;
};

void to_json(nlohmann::json & j, const Vec2 & v);
void from_json(const nlohmann::json & j, Vec2 & v);
void to_json(nlohmann::json & j, const VehicleState & s);
void from_json(const nlohmann::json & j, VehicleState & s);
void to_json(nlohmann::json & j, const PedestrianState & s);
void from_json(const nlohmann::json & j, PedestrianState & s);
void to_json(nlohmann::json & j, const Obstacle & o);
void from_json(const nlohmann::json & j, Obstacle & o);
void to_json(nlohmann::json & j, const SignalState & s);
void from_json(const nlohmann::json & j, SignalState & s);

}  // namespace twinloop::world

#endif  // TWINLOOP__WORLD__TYPES_HPP_
