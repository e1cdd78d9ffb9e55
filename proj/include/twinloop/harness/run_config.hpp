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

#ifndef TWINLOOP__HARNESS__RUN_CONFIG_HPP_
#define TWINLOOP__HARNESS__RUN_CONFIG_HPP_

#include "twinloop/agents/config.hpp"
#include "twinloop/pose/locomotion.hpp"
#include "twinloop/world/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>

namespace twinloop::harness
{

/// Where the pedestrian's motion comes from when no console drives it.
enum class PedestrianSource {
  /// pedestrian_policy inside the pedestrian world
  Scripted,
  /// a seeded synthetic participant streaming leg-tracker samples and pose frames
  Tracker,
};

/// Everything one run needs: scene, agent parameters, metric settings. This is the scenario
/// file: scene fields at top level plus `agents` and `harness` sections.
struct RunConfig
{
  world::Scenario scenario;
  agents::AgentParams agents;
  double braking_onset_threshold{0.5};
  PedestrianSource pedestrian_source{PedestrianSource::Scripted};
  pose::LocomotionParams locomotion{};
  std::uint64_t seed{0};
};

RunConfig run_config_from_json(const nlohmann::json & j);
nlohmann::json run_config_to_json(const RunConfig & config);

/// @throws world::ScenarioError / agents::AgentConfigError / std::runtime_error on I/O
RunConfig load_run_config(const std::filesystem::path & path);

}  // namespace twinloop::harness

#endif  // TWINLOOP__HARNESS__RUN_CONFIG_HPP_
