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
#include "twinloop/world/scenario.hpp"

#include <gtest/gtest.h>

namespace twinloop::world
{
namespace
{

const std::string kDefaultScenario = std::string(TWINLOOP_SOURCE_DIR) + "/scenarios/default.json";

nlohmann::json minimal()
{
  return nlohmann::json::parse(R"({
    "vehicle_path": {"origin": [-50, 0], "direction": [1, 0], "conflict_point": [0, 0]},
    "crossing_path": {"origin": [0, -4], "direction": [0, 1], "conflict_point": [0, 0]}
  })");
}

TEST(Scenario, DefaultFileLoads)
{
  const auto config = harness::load_run_config(kDefaultScenario);
  const auto & s = config.scenario;
  EXPECT_DOUBLE_EQ(s.v_vehicle_initial, 25.0 * 0.44704);
  EXPECT_DOUBLE_EQ(s.v_pedestrian, 1.0);
  EXPECT_DOUBLE_EQ(s.ttc_threshold, 1.5);
  EXPECT_DOUBLE_EQ(s.signal_eta_trigger, 5.0);
  EXPECT_DOUBLE_EQ(s.dt, 0.02);
  EXPECT_EQ(s.obstacles.size(), 2U);
  EXPECT_NO_THROW(validate(s));
}

TEST(Scenario, DefaultsApplyToMinimalDocument)
{
  const auto s = scenario_from_json(minimal());
  EXPECT_DOUBLE_EQ(s.v_vehicle_initial, 11.176);
  EXPECT_EQ(s.experiment, ExperimentKind::HdvPed);
  EXPECT_TRUE(s.obstacles.empty());
  EXPECT_DOUBLE_EQ(s.crossing_path.zebra_x, 0.0);
}

TEST(Scenario, JsonRoundTrip)
{
  auto s = scenario_from_json(minimal());
  s.obstacles.push_back({{-5.0, -2.0}, {1.0, 0.5}});
  s.experiment = ExperimentKind::CvPed;
  EXPECT_EQ(scenario_from_json(scenario_to_json(s)), s);
}

TEST(Scenario, ConflictPointOffPathRejected)
{
  auto j = minimal();
  j["vehicle_path"]["conflict_point"] = {0, 1};
  EXPECT_THROW(scenario_from_json(j), ScenarioError);
}

TEST(Scenario, MalformedFieldRejected)
{
  auto j = minimal();
  j["dt"] = "fast";
  EXPECT_THROW(scenario_from_json(j), ScenarioError);
  j = minimal();
  j["dt"] = 0.0;
  EXPECT_THROW(scenario_from_json(j), ScenarioError);
  j = minimal();
  j.erase("crossing_path");
  EXPECT_THROW(scenario_from_json(j), ScenarioError);
}

TEST(Scenario, InitialStatesAndZebraDistance)
{
  const auto s = scenario_from_json(minimal());
  const auto v = initial_vehicle(s);
  const auto p = initial_pedestrian(s);
  EXPECT_DOUBLE_EQ(v.distance_to_conflict, 50.0);
  EXPECT_DOUBLE_EQ(v.speed, 11.176);
  EXPECT_DOUBLE_EQ(p.distance_to_conflict, 4.0);
  EXPECT_EQ(p.phase, PedestrianPhase::Waiting);
  EXPECT_DOUBLE_EQ(distance_to_zebra(s, v), 50.0);
}

TEST(Scenario, ExperimentNames)
{
  EXPECT_EQ(parse_experiment("cv"), ExperimentKind::CvPed);
  EXPECT_EQ(parse_experiment("AV_PED"), ExperimentKind::AvPed);
  EXPECT_EQ(to_string(ExperimentKind::HdvPed), "HDV_PED");
  EXPECT_THROW(parse_experiment("bus"), std::invalid_argument);
}

TEST(RunConfig, RoundTripAndHarnessSection)
{
  auto config = harness::load_run_config(kDefaultScenario);
  config.pedestrian_source = harness::PedestrianSource::Tracker;
  config.seed = 42;
  const auto back = harness::run_config_from_json(harness::run_config_to_json(config));
  EXPECT_EQ(back.scenario, config.scenario);
  EXPECT_EQ(back.agents, config.agents);
  EXPECT_EQ(back.pedestrian_source, harness::PedestrianSource::Tracker);
  EXPECT_EQ(back.seed, 42U);

  auto j = harness::run_config_to_json(config);
  j["harness"]["pedestrian_source"] = "telepathy";
  EXPECT_THROW(harness::run_config_from_json(j), ScenarioError);
  j["harness"]["pedestrian_source"] = "scripted";
  j["harness"]["braking_onset_threshold"] = -1.0;
  EXPECT_THROW(harness::run_config_from_json(j), ScenarioError);
}

}  // namespace
}  // namespace twinloop::world
