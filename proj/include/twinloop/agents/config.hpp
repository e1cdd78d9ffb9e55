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

#ifndef TWINLOOP__AGENTS__CONFIG_HPP_
#define TWINLOOP__AGENTS__CONFIG_HPP_

#include <json.hpp>

#include <stdexcept>

namespace twinloop::agents
{

/// Hard ceiling on any commanded deceleration, m/s^2.
inline constexpr double kMaxDeceleration = 9.8;

enum class Perception { Sight, Warning };

struct DriverConfig
{
  double perception_reaction_time{1.0};
  double braking_decel{7.5};
  Perception reacts_to{Perception::Sight};

  friend bool operator==(const DriverConfig &, const DriverConfig &) = default;
};

struct PedestrianConfig
{
  bool reacts_to_warning{true};
  double stop_reaction_time{0.5};

  friend bool operator==(const PedestrianConfig &, const PedestrianConfig &) = default;
};

/// Console lever scaling.
struct HumanControlConfig
{
  double max_accel{3.0};
  double max_brake{8.0};

  friend bool operator==(const HumanControlConfig &, const HumanControlConfig &) = default;
};

/// The `agents` section of a scenario file.
struct AgentParams
{
  DriverConfig hdv_driver{1.0, 7.5, Perception::Sight};
  DriverConfig cv_driver{1.0, 6.2, Perception::Warning};
  PedestrianConfig pedestrian{};
  HumanControlConfig human{};

  friend bool operator==(const AgentParams &, const AgentParams &) = default;
};

class AgentConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

void validate(const DriverConfig & config);
void validate(const PedestrianConfig & config);
void validate(const AgentParams & params);

AgentParams agent_params_from_json(const nlohmann::json & j);
nlohmann::json agent_params_to_json(const AgentParams & params);

}  // namespace twinloop::agents

#endif  // TWINLOOP__AGENTS__CONFIG_HPP_
