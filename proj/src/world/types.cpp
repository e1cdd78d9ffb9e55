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

#include "twinloop/world/types.hpp"

#include <stdexcept>

namespace twinloop::world
{

using nlohmann::json;

namespace
{

json optional_to_json(const std::optional<double> & value)
{
  return value ? json(*value) : json(nullptr);
}

std::optional<double> optional_from_json(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<double>();
}

}  // namespace

std::string_view to_string(VehicleKind kind)
{
  switch (kind) {
    case VehicleKind::HDV:
      return "HDV";
    case VehicleKind::AV:
      return "AV";
    case VehicleKind::CV:
      return "CV";
  }
  return "HDV";
}

std::string_view to_string(ExperimentKind kind)
{
  switch (kind) {
    case ExperimentKind::HdvPed:
      return "HDV_PED";
    case ExperimentKind::AvPed:
      return "AV_PED";
    case ExperimentKind::CvPed:
      return "CV_PED";
  }
  return "HDV_PED";
}

std::string_view to_string(PedestrianPhase phase)
{
  switch (phase) {
    case PedestrianPhase::Waiting:
      return "Waiting";
    case PedestrianPhase::Crossing:
      return "Crossing";
    case PedestrianPhase::StoppedByWarning:
      return "StoppedByWarning";
    case PedestrianPhase::Crossed:
      return "Crossed";
  }
  return "Waiting";
}

std::string_view to_string(PedestrianLight light)
{
  return light == PedestrianLight::Walk ? "Walk" : "DontWalk";
}

ExperimentKind parse_experiment(std::string_view text)
{
  if (text == "HDV_PED" || text == "hdv") return ExperimentKind::HdvPed;
  if (text == "AV_PED" || text == "av") return ExperimentKind::AvPed;
  if (text == "CV_PED" || text == "cv") return ExperimentKind::CvPed;
  throw std::invalid_argument("unknown experiment: " + std::string(text));
}

VehicleKind parse_vehicle_kind(std::string_view text)
{
  if (text == "HDV") return VehicleKind::HDV;
  if (text == "AV") return VehicleKind::AV;
  if (text == "CV") return VehicleKind::CV;
  throw std::invalid_argument("unknown vehicle kind: " + std::string(text));
}

PedestrianPhase parse_phase(std::string_view text)
{
  if (text == "Waiting") return PedestrianPhase::Waiting;
  if (text == "Crossing") return PedestrianPhase::Crossing;
  if (text == "StoppedByWarning") return PedestrianPhase::StoppedByWarning;
  if (text == "Crossed") return PedestrianPhase::Crossed;
  throw std::invalid_argument("unknown pedestrian phase: " + std::string(text));
}

PedestrianLight parse_light(std::string_view text)
{
  if (text == "DontWalk") return PedestrianLight::DontWalk;
  if (text == "Walk") return PedestrianLight::Walk;
  throw std::invalid_argument("unknown pedestrian light: " + std::string(text));
}

VehicleKind vehicle_kind_for(ExperimentKind experiment)
{
  switch (experiment) {
    case ExperimentKind::HdvPed:
      return VehicleKind::HDV;
    case ExperimentKind::AvPed:
      return VehicleKind::AV;
    case ExperimentKind::CvPed:
      return VehicleKind::CV;
  }
  return VehicleKind::HDV;
}

void to_json(json & j, const Vec2 & v) { j = json::array({v.x, v.y}); }

void from_json(const json & j, Vec2 & v)
{
  if (j.is_array()) {
    if (j.size() != 2) {
      throw std::invalid_argument("Vec2 expects two components");
    }
    v.x = j.at(0).get<double>();
    v.y = j.at(1).get<double>();
  } else {
    v.x = j.at("x").get<double>();
    v.y = j.at("y").get<double>();
  }
}

void to_json(json & j, const VehicleState & s)
{
  j = json{
    {"id", s.id},
    {"kind", to_string(s.kind)},
    {"position", s.position},
    {"heading", s.heading},
    {"speed", s.speed},
    {"accel_cmd", s.accel_cmd},
    {"distance_to_conflict", s.distance_to_conflict},
    {"warning_received_at", optional_to_json(s.warning_received_at)},
    {"aeb_activated_at", optional_to_json(s.aeb_activated_at)},
    {"braking_started_at", optional_to_json(s.braking_started_at)},
  };
}

void from_json(const json & j, VehicleState & s)
{
  s.id = j.at("id").get<std::string>();
  s.kind = parse_vehicle_kind(j.at("kind").get<std::string>());
  s.position = j.at("position").get<Vec2>();
  s.heading = j.at("heading").get<Vec2>();
  s.speed = j.at("speed").get<double>();
  s.accel_cmd = j.at("accel_cmd").get<double>();
  s.distance_to_conflict = j.at("distance_to_conflict").get<double>();
  s.warning_received_at = optional_from_json(j, "warning_received_at");
  s.aeb_activated_at = optional_from_json(j, "aeb_activated_at");
  s.braking_started_at = optional_from_json(j, "braking_started_at");
}

void to_json(json & j, const PedestrianState & s)
{
  j = json{
    {"id", s.id},
    {"position", s.position},
    {"heading", s.heading},
    {"speed", s.speed},
    {"distance_to_conflict", s.distance_to_conflict},
    {"phase", to_string(s.phase)},
    {"warning_received_at", optional_to_json(s.warning_received_at)},
  };
}

void from_json(const json & j, PedestrianState & s)
{
  s.id = j.at("id").get<std::string>();
  s.position = j.at("position").get<Vec2>();
  s.heading = j.at("heading").get<Vec2>();
  s.speed = j.at("speed").get<double>();
  s.distance_to_conflict = j.at("distance_to_conflict").get<double>();
  s.phase = parse_phase(j.at("phase").get<std::string>());
  s.warning_received_at = optional_from_json(j, "warning_received_at");
}

void to_json(json & j, const Obstacle & o)
{
  j = json{{"center", o.center}, {"half_extents", o.half_extents}};
}

void from_json(const json & j, Obstacle & o)
{
  o.center = j.at("center").get<Vec2>();
  o.half_extents = j.at("half_extents").get<Vec2>();
}

void to_json(json & j, const SignalState & s)
{
  j = json{
    {"pedestrian_light", to_string(s.pedestrian_light)},
    {"changed_at", optional_to_json(s.changed_at)},
  };
}

void from_json(const json & j, SignalState & s)
{
  s.pedestrian_light = parse_light(j.at("pedestrian_light").get<std::string>());
  s.changed_at = optional_from_json(j, "changed_at");
}

}  // namespace twinloop::world
