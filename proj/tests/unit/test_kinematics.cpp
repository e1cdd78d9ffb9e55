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


#include "twinloop/world/kinematics.hpp"
#include "twinloop/world/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace twinloop::world
{
namespace
{

constexpr double kDt = 0.02;
constexpr double kV25Mph = 25.0 * kMetersPerSecondPerMph;

VehicleState moving(double speed, double distance)
{
  VehicleState v;
  v.speed = speed;
  v.distance_to_conflict = distance;
  return v;
}

TEST(StepVehicle, ConstantSpeedAdvancesAlongHeading)
{
  const auto next = step_vehicle(moving(10.0, 50.0), 0.0, kDt);
  EXPECT_DOUBLE_EQ(next.speed, 10.0);
  EXPECT_DOUBLE_EQ(next.position.x, 0.2);
  EXPECT_DOUBLE_EQ(next.position.y, 0.0);
  EXPECT_DOUBLE_EQ(next.distance_to_conflict, 49.8);
  EXPECT_DOUBLE_EQ(next.accel_cmd, 0.0);
}

TEST(StepVehicle, BrakingClampsAtZeroAndStaysStopped)
{
  auto v = step_vehicle(moving(0.05, 10.0), -7.5, kDt);
  EXPECT_EQ(v.speed, 0.0);
  EXPECT_DOUBLE_EQ(v.distance_to_conflict, 10.0);
  v = step_vehicle(v, -7.5, kDt);
  EXPECT_EQ(v.speed, 0.0);
  EXPECT_DOUBLE_EQ(v.distance_to_conflict, 10.0);
}

TEST(StepVehicle, DistanceGoesNegativePastConflict)
{
  const auto v = step_vehicle(moving(10.0, 0.1), 0.0, kDt);
  EXPECT_NEAR(v.distance_to_conflict, -0.1, 1e-12);
}

TEST(StepVehicle, RejectsBadInput)
{
  EXPECT_THROW(step_vehicle(moving(1.0, 1.0), 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(step_vehicle(moving(1.0, 1.0), 0.0, -kDt), std::invalid_argument);
  EXPECT_THROW(
    step_vehicle(moving(1.0, 1.0), std::numeric_limits<double>::quiet_NaN(), kDt),
    std::invalid_argument);
  EXPECT_THROW(
    step_vehicle(moving(std::numeric_limits<double>::infinity(), 1.0), 0.0, kDt),
    std::invalid_argument);
}

TEST(StepVehicle, ConstantDecelStopWithinOneTickOfClosedForm)
{
  const double decel = 23.0 * kMetersPerFoot;
  const double closed_form = kV25Mph * kV25Mph / (2.0 * decel);
  EXPECT_NEAR(closed_form, 8.908, 5e-4);

  auto v = moving(kV25Mph, 100.0);
  while (v.speed > 0.0) {
    v = step_vehicle(v, -decel, kDt);
  }
  const double travelled = 100.0 - v.distance_to_conflict;
  EXPECT_NEAR(travelled, closed_form, kV25Mph * kDt);
}

TEST(StepPedestrian, WalksAlongHeading)
{
  PedestrianState p;
  p.distance_to_conflict = 5.0;
  const auto next = step_pedestrian(p, 1.0, kDt);
  EXPECT_DOUBLE_EQ(next.position.y, 0.02);
  EXPECT_DOUBLE_EQ(next.distance_to_conflict, 4.98);
  EXPECT_DOUBLE_EQ(next.speed, 1.0);
  EXPECT_THROW(step_pedestrian(p, -1.0, kDt), std::invalid_argument);
}

TEST(EtaToConflict, ExampleAndAbsentCases)
{
  const auto eta = eta_to_conflict(55.88, kV25Mph);
  ASSERT_TRUE(eta.has_value());
  EXPECT_NEAR(*eta, 5.0, 1e-12);
  EXPECT_FALSE(eta_to_conflict(10.0, 0.0).has_value());
  EXPECT_FALSE(eta_to_conflict(0.0, 5.0).has_value());
  EXPECT_FALSE(eta_to_conflict(-3.0, 5.0).has_value());
}

TEST(UpdateSignal, FlipsOnceAtThreshold)
{
  SignalState s;
  s = update_signal(s, 5.2, 5.0, 1.0);
  EXPECT_EQ(s.pedestrian_light, PedestrianLight::DontWalk);
  EXPECT_FALSE(s.changed_at);
  s = update_signal(s, 5.0, 5.0, 1.5);
  EXPECT_EQ(s.pedestrian_light, PedestrianLight::Walk);
  EXPECT_EQ(s.changed_at, 1.5);
  s = update_signal(s, 9.0, 5.0, 2.0);
  EXPECT_EQ(s.pedestrian_light, PedestrianLight::Walk);
  EXPECT_EQ(s.changed_at, 1.5);
  s = update_signal(SignalState{}, std::nullopt, 5.0, 3.0);
  EXPECT_EQ(s.pedestrian_light, PedestrianLight::DontWalk);
}

TEST(UpdateSignal, WalkAtFirstTickWithinFiveSeconds)
{
  auto v = moving(kV25Mph, 80.0);
  SignalState s;
  int tick = 0;
  while (s.pedestrian_light == PedestrianLight::DontWalk) {
    ++tick;
    v = step_vehicle(v, 0.0, kDt);
    s = update_signal(s, eta_to_conflict(v.distance_to_conflict, v.speed), 5.0, tick * kDt);
  }
  EXPECT_LE(v.distance_to_conflict, 55.88 + 1e-9);
  EXPECT_GT(v.distance_to_conflict, 55.88 - kV25Mph * kDt);
}

}  // namespace
}  // namespace twinloop::world
