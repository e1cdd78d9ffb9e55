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

#include "twinloop/harness/run_config.hpp"

#include <cmath>
#include <fstream>

namespace twinloop::harness
{

using nlohmann::json;

RunConfig run_config_from_json(const json & j)
{
  RunConfig config;
  config.scenario = world::scenario_from_json(j);
  if (const auto it = j.find("agents"); it != j.end()) {
    config.agents = agents::agent_params_from_json(*it);
  }
  if (const auto it = j.find("harness"); it != j.end()) {
    try {
      config.braking_onset_threshold =
        it->value("braking_onset_threshold", config.braking_onset_threshold);
      const auto source = it->value("pedestrian_source", std::string("scripted"));
      if (source == "scripted") {
        config.pedestrian_source = PedestrianSource::Scripted;
      } else if (source == "tracker") {
        config.pedestrian_source = PedestrianSource::Tracker;
      } else {
        throw world::ScenarioError("harness.pedestrian_source must be 'scripted' or 'tracker'");
      }
      if (const auto loc = it->find("locomotion"); loc != it->end()) {
        config.locomotion.window_length =
          loc->value("window_length", config.locomotion.window_length);
        config.locomotion.amplitude_threshold =
          loc->value("amplitude_threshold", config.locomotion.amplitude_threshold);
        config.locomotion.step_speed = loc->value("step_speed", config.locomotion.step_speed);
      }
      config.seed = it->value("seed", config.seed);
    } catch (const json::exception & e) {
      throw world::ScenarioError(std::string("malformed harness section: ") + e.what());
    }
  }
  if (!std::isfinite(config.braking_onset_threshold) || config.braking_onset_threshold <= 0.0) {
    throw world::ScenarioError("harness.braking_onset_threshold must be positive");
  }
  if (!(config.locomotion.window_length > 0.0) || !(config.locomotion.amplitude_threshold > 0.0) ||
      !(config.locomotion.step_speed >= 0.0)) {
    throw world::ScenarioError("harness.locomotion parameters must be positive");
  }
  return config;
}

json run_config_to_json(const RunConfig & config)
{
  json j = world::scenario_to_json(config.scenario);
  j["agents"] = agents::agent_params_to_json(config.agents);
  j["harness"] = json{
    {"braking_onset_threshold", config.braking_onset_threshold},
    {"pedestrian_source",
     config.pedestrian_source == PedestrianSource::Scripted ? "scripted" : "tracker"},
    {"locomotion",
     {{"window_length", config.locomotion.window_length},
      {"amplitude_threshold", config.locomotion.amplitude_threshold},
      {"step_speed", config.locomotion.step_speed}}},
    {"seed", config.seed},
  };
  return j;
}

RunConfig load_run_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & e) {
    throw world::ScenarioError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace twinloop::harness
