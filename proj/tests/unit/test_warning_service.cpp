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


#include "twinloop/warning/warning_service.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace twinloop::warning
{
namespace
{

using world::ExperimentKind;

TEST(ComputeTtc, ArrivalTimeDifference)
{
  const auto r = compute_ttc(55.88, 11.176, 5.0, 1.0);
  ASSERT_TRUE(r.ttc.has_value());
  EXPECT_NEAR(*r.t_veh, 5.0, 1e-12);
  EXPECT_NEAR(*r.t_ped, 5.0, 1e-12);
  EXPECT_NEAR(*r.ttc, 0.0, 1e-12);
  EXPECT_NEAR(*compute_ttc(20.0, 10.0, 3.0, 1.0).ttc, 1.0, 1e-12);
}

TEST(ComputeTtc, UndefinedWhenEitherCannotArrive)
{
  EXPECT_FALSE(compute_ttc(20.0, 0.0, 3.0, 1.0).ttc.has_value());
  EXPECT_FALSE(compute_ttc(20.0, 10.0, 3.0, 0.0).ttc.has_value());
  EXPECT_FALSE(compute_ttc(-1.0, 10.0, 3.0, 1.0).ttc.has_value());
  EXPECT_FALSE(compute_ttc(20.0, 10.0, -0.5, 1.0).ttc.has_value());
}

TEST(EvaluateTrigger, StrictlyBelowThreshold)
{
  EXPECT_TRUE(evaluate_trigger(compute_ttc(20.0, 10.0, 3.0, 1.0), 1.5));
  EXPECT_FALSE(evaluate_trigger(compute_ttc(25.0, 10.0, 1.0, 1.0), 1.5));
  EXPECT_FALSE(evaluate_trigger(TtcResult{}, 1.5));
  EXPECT_THROW(evaluate_trigger(TtcResult{}, 0.0), std::invalid_argument);
}

TEST(Dispatch, RecipientsPerExperiment)
{
  const auto cv = dispatch(true, ExperimentKind::CvPed, 7, 0.14, 0.5);
  ASSERT_TRUE(cv.has_value());
  EXPECT_TRUE(cv->to_vehicle);
  EXPECT_TRUE(cv->to_pedestrian);
  EXPECT_EQ(cv->tick, 7U);

  const auto av = dispatch(true, ExperimentKind::AvPed, 7, 0.14, 0.5);
  ASSERT_TRUE(av.has_value());
  EXPECT_FALSE(av->to_vehicle);
  EXPECT_FALSE(av->to_pedestrian);

  EXPECT_FALSE(dispatch(true, ExperimentKind::HdvPed, 7, 0.14, 0.5).has_value());
  EXPECT_FALSE(dispatch(false, ExperimentKind::CvPed, 7, 0.14, 0.5).has_value());
}

TEST(WarningEvent, JsonRoundTrip)
{
  const WarningEvent e{12, 0.24, 0.75, true, false};
  EXPECT_EQ(nlohmann::json(e).get<WarningEvent>(), e);
  auto bad = nlohmann::json(e);
  bad["recipients"] = {"bus"};
  EXPECT_THROW(bad.get<WarningEvent>(), std::invalid_argument);
}

TEST(WarningService, RemembersFirstReceipt)
{
  WarningService service(ExperimentKind::CvPed, 1.5);
  world::VehicleState v;
  world::PedestrianState p;
  v.speed = 10.0;
  v.distance_to_conflict = 80.0;
  p.speed = 1.0;
  p.distance_to_conflict = 4.0;
  EXPECT_FALSE(service.on_snapshot(1, 0.02, v, p).has_value());
  v.distance_to_conflict = 40.0;
  EXPECT_TRUE(service.on_snapshot(2, 0.04, v, p).has_value());
  EXPECT_TRUE(service.on_snapshot(3, 0.06, v, p).has_value());
  EXPECT_EQ(service.first_vehicle_warning_at(), 0.04);
  EXPECT_EQ(service.first_pedestrian_warning_at(), 0.04);
}

TEST(WarningService, MatchesOracleOnGrid)
{
  const std::vector<double> distances{-5.0, -0.5, 0.0, 0.3, 2.0, 4.0, 9.5, 20.0, 41.0, 80.0};
  const std::vector<double> veh_speeds{0.0, 0.5, 3.0, 8.0, 11.176, 20.0};
  const std::vector<double> ped_distances{-2.0, -0.1, 0.0, 0.5, 1.0, 2.5, 4.0, 5.0, 7.5, 12.0};
  const std::vector<double> ped_speeds{0.0, 0.4, 1.0, 1.5, 2.0, 3.3};
  std::size_t cases = 0;
  for (const auto experiment : {ExperimentKind::HdvPed, ExperimentKind::AvPed, ExperimentKind::CvPed}) {
    for (double dv : distances) {
      for (double vv : veh_speeds) {
        for (double dp : ped_distances) {
          for (double vp : ped_speeds) {
            ++cases;
            const auto r = compute_ttc(dv, vv, dp, vp);
            const auto o = oracle::ttc(dv, vv, dp, vp);
            ASSERT_EQ(r.ttc.has_value(), o.defined);
            if (o.defined) {
              ASSERT_EQ(*r.ttc, o.value);
            }
            const bool fire = oracle::triggers(dv, vv, dp, vp, 1.5);
            ASSERT_EQ(evaluate_trigger(r, 1.5), fire);
            const auto event = dispatch(fire, experiment, 0, 0.0, r.ttc);
            ASSERT_EQ(event.has_value(), fire && experiment != ExperimentKind::HdvPed);
          }
        }
      }
    }
  }
  EXPECT_GE(cases, 10000U);
}

}  // namespace
}  // namespace twinloop::warning
