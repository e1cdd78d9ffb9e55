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

#ifndef TWINLOOP__AEB__AEB_CONTROLLER_HPP_
#define TWINLOOP__AEB__AEB_CONTROLLER_HPP_

#include "twinloop/warning/warning_service.hpp"
#include "twinloop/world/types.hpp"

#include <optional>
#include <span>

namespace twinloop::aeb
{

// Dry-road gradient braking profile, ft/s^2.
inline constexpr double kDeadTime = 0.25;
inline constexpr double kRampEnd = 0.6;
inline constexpr double kRampSlopeFtPerS3 = 65.7;
inline constexpr double kPlateauFtPerS2 = 23.0;
/// Plateau in m/s^2, formed from integers so it is the double nearest to 23 * 0.3048.
inline constexpr double kPeakDeceleration = (23.0 * 3048.0) / 10000.0;

struct AebState
{
  std::optional<double> activated_at;
  bool latched{false};

  friend bool operator==(const AebState &, const AebState &) = default;
};

struct AebCommand
{
  AebState state;
  double accel_cmd{0.0};
};

/// Lidar stand-in: the pedestrian is detected iff the line of sight is unobstructed.
bool detect_pedestrian(
  const world::VehicleState & vehicle, const world::PedestrianState & pedestrian,
  std::span<const world::Obstacle> obstacles);

/**
 * @brief braking profile magnitude at `t` seconds after activation, in m/s^2
 *
 * 0 during the 0.25 s dead time, a 65.7 ft/s^3 ramp until 0.6 s, then 23 ft/s^2. The point
 * t = 0.6 belongs to the plateau so the profile stays monotone.
 *
 * @throws std::invalid_argument for negative or non-finite t
 */
double aeb_deceleration(double t);

/// Latches on the first call with `detected` and TTC below threshold; afterwards follows the
/// profile regardless of detection. `now` is the time of the observation being acted on.
AebCommand aeb_step(
  const AebState & state, const warning::TtcResult & ttc, bool detected, double threshold,
  double now);

}  // namespace twinloop::aeb

#endif  // TWINLOOP__AEB__AEB_CONTROLLER_HPP_
