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


#include "twinloop/harness/experiment.hpp"
#include "twinloop/harness/nodes.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

namespace twinloop::harness
{
namespace
{

using world::ExperimentKind;

RunConfig config_for(ExperimentKind kind)
{
  auto config = load_run_config(std::string(TWINLOOP_SOURCE_DIR) + "/scenarios/default.json");
  config.scenario.experiment = kind;
  return config;
}

bool has_event(const RunTrace & trace, std::string_view name)
{
  return std::any_of(trace.records.begin(), trace.records.end(), [&](const TraceRecord & r) {
    return std::find(r.events.begin(), r.events.end(), name) != r.events.end();
  });
}

RunOptions processes()
{
  RunOptions options;
  options.mode = BusMode::Processes;
  options.node_executable = TWINLOOP_CLI_PATH;
  return options;
}

class ExperimentOutcomes : public ::testing::Test
{
protected:
  static void SetUpTestSuite()
  {
    hdv_ = new RunResult(run_experiment(config_for(ExperimentKind::HdvPed)));
    av_ = new RunResult(run_experiment(config_for(ExperimentKind::AvPed)));
    cv_ = new RunResult(run_experiment(config_for(ExperimentKind::CvPed)));
  }
  static void TearDownTestSuite()
  {
    delete hdv_;
    delete av_;
    delete cv_;
  }
  static RunResult * hdv_;
  static RunResult * av_;
  static RunResult * cv_;
};

RunResult * ExperimentOutcomes::hdv_ = nullptr;
RunResult * ExperimentOutcomes::av_ = nullptr;
RunResult * ExperimentOutcomes::cv_ = nullptr;

TEST_F(ExperimentOutcomes, AllStopWithoutCollision)
{
  for (const RunResult * r : {hdv_, av_, cv_}) {
    EXPECT_FALSE(r->metrics.collision);
    EXPECT_TRUE(r->metrics.v2p_distance.has_value());
    EXPECT_GT(*r->metrics.v2p_distance, 0.0);
    EXPECT_EQ(r->trace.end_reason, "completed");
  }
}

TEST_F(ExperimentOutcomes, WarningOrdersTheOutcomes)
{
  EXPECT_LT(*hdv_->metrics.braking_point, *av_->metrics.braking_point);
  EXPECT_LT(*av_->metrics.braking_point, *cv_->metrics.braking_point);
  EXPECT_LT(*hdv_->metrics.v2p_distance, *av_->metrics.v2p_distance);
  EXPECT_LT(*av_->metrics.v2p_distance, *cv_->metrics.v2p_distance);
}

TEST_F(ExperimentOutcomes, PedestrianBehaviour)
{
  EXPECT_TRUE(hdv_->metrics.pedestrian_reached_conflict);
  EXPECT_TRUE(av_->metrics.pedestrian_reached_conflict);
  EXPECT_FALSE(cv_->metrics.pedestrian_reached_conflict);
  EXPECT_TRUE(has_event(cv_->trace, events::kPedestrianStopped));
  EXPECT_FALSE(has_event(hdv_->trace, events::kPedestrianStopped));
}

TEST_F(ExperimentOutcomes, AebFiresOnlyForTheAutomatedVehicle)
{
  EXPECT_TRUE(has_event(av_->trace, events::kAebActivated));
  EXPECT_FALSE(has_event(hdv_->trace, events::kAebActivated));
  EXPECT_FALSE(has_event(cv_->trace, events::kAebActivated));
  EXPECT_EQ(*av_->metrics.max_deceleration, 7.0104);
  EXPECT_LT(*av_->metrics.avg_deceleration, *av_->metrics.max_deceleration);
}

TEST_F(ExperimentOutcomes, LogStartsWithConfigAndIsTickOrdered)
{
  for (const RunResult * r : {hdv_, av_, cv_}) {
    ASSERT_FALSE(r->log.empty());
    EXPECT_EQ(r->log.front().topic, "run.config");
    EXPECT_TRUE(std::is_sorted(r->log.begin(), r->log.end(), [](const auto & a, const auto & b) {
      return a.tick < b.tick;
    }));
    const auto stops = std::count_if(r->log.begin(), r->log.end(), [](const auto & e) {
      return e.topic == "run.stop";
    });
    EXPECT_EQ(stops, 1);
    const auto stop = std::find_if(r->log.begin(), r->log.end(), [](const auto & e) {
      return e.topic == "run.stop";
    });
    ASSERT_NE(stop, r->log.end());
    EXPECT_EQ(stop->tick, r->log.back().tick);
  }
}

TEST_F(ExperimentOutcomes, ReplayReproducesEverything)
{
  for (const RunResult * r : {hdv_, av_, cv_}) {
    const auto text = envelope_log_text(r->log);
    const auto again = replay(r->log);
    EXPECT_EQ(again.metrics, r->metrics);
    EXPECT_EQ(again.trace.records, r->trace.records);
    EXPECT_EQ(envelope_log_text(again.log), text);
  }
}

TEST_F(ExperimentOutcomes, InProcessRunsAreDeterministic)
{
  const auto again = run_experiment(config_for(ExperimentKind::AvPed));
  EXPECT_EQ(envelope_log_text(again.log), envelope_log_text(av_->log));
}

TEST_F(ExperimentOutcomes, ProcessModeMatchesInProcess)
{
  const auto r = run_experiment(config_for(ExperimentKind::CvPed), processes());
  EXPECT_EQ(r.metrics, cv_->metrics);
  EXPECT_EQ(speed_time_csv(r.trace), speed_time_csv(cv_->trace));
  EXPECT_EQ(envelope_log_text(r.log), envelope_log_text(cv_->log));
}

TEST_F(ExperimentOutcomes, OutputsRoundTripThroughDisk)
{
  const auto dir = std::filesystem::temp_directory_path() / "twinloop_test_outputs";
  std::filesystem::remove_all(dir);
  write_run_outputs(*hdv_, dir);
  for (const char * f : {"metrics.json", "speed_time.csv", "space_time.csv", "envelopes.log"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto back = replay(read_envelope_log(dir / "envelopes.log"));
  EXPECT_EQ(back.metrics, hdv_->metrics);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, TrackerDrivenPedestrian)
{
  auto config = config_for(ExperimentKind::CvPed);
  config.pedestrian_source = PedestrianSource::Tracker;
  config.seed = 11;
  const auto r = run_experiment(config);
  EXPECT_FALSE(r.metrics.collision);
  EXPECT_FALSE(r.metrics.pedestrian_reached_conflict);
  EXPECT_TRUE(has_event(r.trace, events::kPedestrianStopped));
  const bool any_avatar = std::any_of(r.log.begin(), r.log.end(), [](const bus::Envelope & e) {
    return e.topic == "pedestrian.state" && e.payload.contains("avatar");
  });
  EXPECT_TRUE(any_avatar);
  EXPECT_EQ(envelope_log_text(run_experiment(config).log), envelope_log_text(r.log));
}

TEST(Experiment, RejectsInvalidConfig)
{
  auto config = config_for(ExperimentKind::HdvPed);
  config.scenario.dt = -1.0;
  EXPECT_ANY_THROW(run_experiment(config));
}

TEST(Experiment, MissingNodeExecutableFailsTheRun)
{
  RunOptions options = processes();
  options.node_executable = "/nonexistent/twinloop";
  options.barrier_timeout = std::chrono::milliseconds{500};
  EXPECT_THROW(run_experiment(config_for(ExperimentKind::HdvPed), options), RunFailure);
}

TEST(Experiment, ReplayWithoutConfigFails)
{
  EXPECT_THROW(replay({}), std::runtime_error);
}

TEST(Nodes, WorldNodeIds)
{
  auto config = config_for(ExperimentKind::HdvPed);
  auto ids = world_node_ids(config);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "participant"), 0);
  config.pedestrian_source = PedestrianSource::Tracker;
  ids = world_node_ids(config);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "participant"), 1);
  EXPECT_THROW(make_world_node("harness", config), std::invalid_argument);
}

}  // namespace
}  // namespace twinloop::harness
