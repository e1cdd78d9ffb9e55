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

#include "twinloop/agents/config.hpp"

#include <cmath>
#include <string>

namespace twinloop::agents
{

using nlohmann::json;

namespace
{

Perception parse_perception(const std::string & text)
{
  if (text == "Sight") return Perception::Sight;
  if (text == "Warning") return Perception::Warning;
  throw AgentConfigError("unknown reacts_to: " + text);
}

const char * to_string(Perception p) { return p == Perception::Sight ? "Sight" : "Warning"; }

DriverConfig driver_from_json(const json & j, DriverConfig out)
{
  out.perception_reaction_time = j.value("perception_reaction_time", out.perception_reaction_time);
  out.braking_decel = j.value("braking_decel", out.braking_decel);
  if (const auto it = j.find("reacts_to"); it != j.end()) {
    out.reacts_to = parse_perception(it->get<std::string>());
  }
  return out;
}

json driver_to_json(const DriverConfig & c)
{
  return json{
    {"perception_reaction_time", c.perception_reaction_time},
    {"braking_decel", c.braking_decel},
    {"reacts_to", to_string(c.reacts_to)},
  };
}

}  // namespace

void validate(const DriverConfig & c)
{
  if (!std::isfinite(c.perception_reaction_time) || c.perception_reaction_time < 0.0) {
    throw AgentConfigError("perception_reaction_time must be non-negative");
  }
  if (!std::isfinite(c.braking_decel) || c.braking_decel <= 0.0 ||
      c.braking_decel > kMaxDeceleration) {
    throw AgentConfigError("braking_decel must lie in (0, 9.8] m/s^2");
  }
}

void validate(const PedestrianConfig & c)
{
  if (!std::isfinite(c.stop_reaction_time) || c.stop_reaction_time < 0.0) {
    throw AgentConfigError("stop_reaction_time must be non-negative");
  }
}

void validate(const AgentParams & p)
{
  validate(p.hdv_driver);
  validate(p.cv_driver);
  validate(p.pedestrian);
  if (p.hdv_driver.reacts_to != Perception::Sight) {
    throw AgentConfigError("hdv_driver must react to Sight");
  }
  if (p.cv_driver.reacts_to != Perception::Warning) {
    throw AgentConfigError("cv_driver must react to Warning");
  }
  if (!(p.human.max_accel >= 0.0) || !(p.human.max_brake > 0.0) ||
      p.human.max_brake > kMaxDeceleration) {
    throw AgentConfigError("human.max_brake must lie in (0, 9.8] and max_accel be non-negative");
  }
}

AgentParams agent_params_from_json(const json & j)
{
  AgentParams p;
  try {
    if (const auto it = j.find("hdv_driver"); it != j.end()) {
      p.hdv_driver = driver_from_json(*it, p.hdv_driver);
    }
    if (const auto it = j.find("cv_driver"); it != j.end()) {
      p.cv_driver = driver_from_json(*it, p.cv_driver);
    }
    if (const auto it = j.find("pedestrian"); it != j.end()) {
      p.pedestrian.reacts_to_warning = it->value("reacts_to_warning", p.pedestrian.reacts_to_warning);
      p.pedestrian.stop_reaction_time =
        it->value("stop_reaction_time", p.pedestrian.stop_reaction_time);
    }
    if (const auto it = j.find("human"); it != j.end()) {
      p.human.max_accel = it->value("max_accel", p.human.max_accel);
      p.human.max_brake = it->value("max_brake", p.human.max_brake);
    }
  } catch (const json::exception & e) {
    throw AgentConfigError(std::string("malformed agents section: ") + e.what());
  }
  validate(p);
  return p;
}

json agent_params_to_json(const AgentParams & p)
{
  return json{
    {"hdv_driver", driver_to_json(p.hdv_driver)},
    {"cv_driver", driver_to_json(p.cv_driver)},
    {"pedestrian",
     {{"reacts_to_warning", p.pedestrian.reacts_to_warning},
      {"stop_reaction_time", p.pedestrian.stop_reaction_time}}},
    {"human", {{"max_accel", p.human.max_accel}, {"max_brake", p.human.max_brake}}},
  };
}

}  // namespace twinloop::agents
