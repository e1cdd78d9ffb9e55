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

#include "twinloop/world/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twinloop::aeb
{

bool detect_pedestrian(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  std::span<const world::Obstacle> obstacles)
{
  return world::line_of_sight(vehicle.position, pedestrian.position, obstacles);
}

double aeb_deceleration(double t)
{
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("time since AEB activation must be finite and non-negative");
  }
  if (t < kDeadTime) {
    return 0.0;
  }
  if (t < kRampEnd) {
    return kRampSlopeFtPerS3 * (t - kDeadTime) * world::kMetersPerFoot;
  }
  return kPeakDeceleration;
}

AebCommand aeb_step(
  const AebState & state, const warning::TtcResult & ttc, bool detected, double threshold,
  double now)
{
  AebCommand out{state, 0.0};
  if (!state.latched) {
    if (!(detected && warning::evaluate_trigger(ttc, threshold))) {
      return out;
    }
    out.state.latched = true;
    out.state.activated_at = now;
  }
  // Guard against a clock that reads slightly before activation through rounding.
  const double elapsed = std::max(0.0, now - *out.state.activated_at);
  const double decel = aeb_deceleration(elapsed);
  out.accel_cmd = decel > 0.0 ? -decel : 0.0;
  return out;
}

}  // namespace twinloop::aeb
