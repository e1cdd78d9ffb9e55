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

#include "twinloop/pose/locomotion.hpp"

#include "twinloop/pose/keypoint_frame.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace twinloop::pose
{

namespace
{

// Sample clocks are sums of float periods; a window of nominal length may fall short by ulps.
constexpr double kSpanSlack = 1e-9;

void check_window(std::span<const TrackerSample> window, const LocomotionParams & params)
{
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto & s = window[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.vertical) || !std::isfinite(s.horizontal_heading)) {
      throw PoseError(PoseErrorKind::InvalidField, "non-finite tracker sample");
    }
    if (i > 0 && !(s.t > window[i - 1].t)) {
      throw PoseError(PoseErrorKind::UnorderedWindow, "tracker samples must be time-ordered");
    }
  }
  if (window.size() < 2 || window.back().t - window.front().t + kSpanSlack < params.window_length) {
    throw PoseError(
      PoseErrorKind::WindowTooShort,
      "tracker window must span at least " + std::to_string(params.window_length) + " s");
  }
}

}  // namespace

LocomotionState detect_locomotion(
  std::span<const TrackerSample> window, const LocomotionParams & params)
{
  check_window(window, params);

  double sum = 0.0;
  double sum_sin = 0.0;
  double sum_cos = 0.0;
  double lo = window.front().vertical;
  double hi = window.front().vertical;
  for (const auto & s : window) {
    sum += s.vertical;
    sum_sin += std::sin(s.horizontal_heading);
    sum_cos += std::cos(s.horizontal_heading);
    lo = std::min(lo, s.vertical);
    hi = std::max(hi, s.vertical);
  }
  const double mean = sum / static_cast<double>(window.size());

  int crossings = 0;
  int previous_sign = 0;
  std::optional<double> last_upward;
  for (const auto & s : window) {
    const double offset = s.vertical - mean;
    const int sign = offset > 0.0 ? 1 : (offset < 0.0 ? -1 : 0);
    if (sign == 0) {
      continue;
    }
    if (previous_sign != 0 && sign != previous_sign) {
      ++crossings;
      if (sign > 0) {
        last_upward = s.t;
      }
    }
    previous_sign = sign;
  }

  LocomotionState state;
  state.heading = std::atan2(sum_sin, sum_cos);
  state.walking = (hi - lo) >= params.amplitude_threshold && crossings >= 2;
  state.speed = state.walking ? params.step_speed : 0.0;
  state.last_step_at = last_upward;
  return state;
}

void LocomotionDetector::push(const TrackerSample & sample)
{
  if (!samples_.empty() && !(sample.t > samples_.back().t)) {
    throw PoseError(PoseErrorKind::UnorderedWindow, "tracker samples must be time-ordered");
  }
  samples_.push_back(sample);
  while (samples_.size() > 2 &&
         samples_.back().t - samples_[1].t + kSpanSlack >= params_.window_length) {
    samples_.pop_front();
  }
}

std::optional<LocomotionState> LocomotionDetector::state() const
{
  if (samples_.size() < 2 ||
      samples_.back().t - samples_.front().t + kSpanSlack < params_.window_length) {
    return std::nullopt;
  }
  const std::vector<TrackerSample> window(samples_.begin(), samples_.end());
  return detect_locomotion(window, params_);
}

void to_json(nlohmann::json & j, const TrackerSample & s)
{
  j = nlohmann::json{{"t", s.t}, {"vertical", s.vertical}, {"horizontal_heading", s.horizontal_heading}};
}

void from_json(const nlohmann::json & j, TrackerSample & s)
{
  s.t = j.at("t").get<double>();
  s.vertical = j.at("vertical").get<double>();
  s.horizontal_heading = j.at("horizontal_heading").get<double>();
}

}  // namespace twinloop::pose
