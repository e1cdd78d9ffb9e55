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


#include "twinloop/aeb/aeb_controller.hpp"
#include "twinloop/world/kinematics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace twinloop::aeb
{
namespace
{

constexpr double kV0 = 11.176;

TEST(AebDeceleration, ProfileValues)
{
  EXPECT_NEAR(aeb_deceleration(0.10), 0.0, 1e-9);
  EXPECT_NEAR(aeb_deceleration(0.425), 11.4975 * 0.3048, 1e-9);
  EXPECT_NEAR(aeb_deceleration(0.425), 3.5044, 5e-5);
  EXPECT_NEAR(aeb_deceleration(1.0), 7.0104, 1e-9);
  EXPECT_EQ(aeb_deceleration(1.0), 7.0104);
  EXPECT_EQ(aeb_deceleration(0.25), 0.0);
  EXPECT_EQ(aeb_deceleration(0.6), kPeakDeceleration);
}

TEST(AebDeceleration, MatchesOracleAndIsMonotone)
{
  double previous = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = i * 0.001;
    const double d = aeb_deceleration(t);
    EXPECT_NEAR(d, oracle::aeb_profile(t), 1e-9) << t;
    EXPECT_GE(d, previous);
    previous = d;
  }
}

TEST(AebDeceleration, RejectsNegativeTime)
{
  EXPECT_THROW(aeb_deceleration(-0.01), std::invalid_argument);
}

TEST(AebStep, LatchesOnlyWhenDetectedAndTriggered)
{
  const auto close = warning::compute_ttc(10.0, 10.0, 1.2, 1.0);
  const auto far = warning::compute_ttc(40.0, 10.0, 1.0, 1.0);

  auto cmd = aeb_step(AebState{}, close, false, 1.5, 1.0);
  EXPECT_FALSE(cmd.state.latched);
  EXPECT_EQ(cmd.accel_cmd, 0.0);

  cmd = aeb_step(AebState{}, far, true, 1.5, 1.0);
  EXPECT_FALSE(cmd.state.latched);

  cmd = aeb_step(AebState{}, close, true, 1.5, 1.0);
  EXPECT_TRUE(cmd.state.latched);
  EXPECT_EQ(cmd.state.activated_at, 1.0);
  EXPECT_EQ(cmd.accel_cmd, 0.0);
  EXPECT_FALSE(std::signbit(cmd.accel_cmd));

  // Stays latched through loss of detection and trigger.
  cmd = aeb_step(cmd.state, far, false, 1.5, 2.0);
  EXPECT_TRUE(cmd.state.latched);
  EXPECT_EQ(cmd.state.activated_at, 1.0);
  EXPECT_EQ(cmd.accel_cmd, -kPeakDeceleration);
}

TEST(DetectPedestrian, OcclusionGates)
{
  world::VehicleState v;
  v.position = {-30.0, 0.0};
  world::PedestrianState p;
  p.position = {0.0, -4.0};
  const std::vector<world::Obstacle> bus{{{-9.0, -3.25}, {6.0, 1.25}}};
  EXPECT_FALSE(detect_pedestrian(v, p, bus));
  p.position = {0.0, 0.0};
  EXPECT_TRUE(detect_pedestrian(v, p, bus));
}

TEST(AebStep, StoppingDistanceMatchesFineStepOracle)
{
  constexpr double dt = 0.02;
  world::VehicleState v;
  v.speed = kV0;
  v.distance_to_conflict = 100.0;
  AebState state;
  const auto trigger = warning::compute_ttc(10.0, 10.0, 1.0, 1.0);
  int tick = 0;
  while (v.speed > 0.0) {
    const auto cmd = aeb_step(state, trigger, true, 1.5, tick * dt);
    state = cmd.state;
    v = world::step_vehicle(v, cmd.accel_cmd, dt);
    ++tick;
  }
  const double simulated = 100.0 - v.distance_to_conflict;
  const auto reference = oracle::aeb_stop(kV0, 1e-4);
  EXPECT_NEAR(simulated, reference.distance, 0.01 * reference.distance);
}

}  // namespace
}  // namespace twinloop::aeb
