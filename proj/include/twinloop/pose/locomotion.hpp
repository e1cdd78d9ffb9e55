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

#ifndef TWINLOOP__POSE__LOCOMOTION_HPP_
#define TWINLOOP__POSE__LOCOMOTION_HPP_

#include <json.hpp>

#include <deque>
#include <optional>
#include <span>

namespace twinloop::pose
{

/// One leg-tracker reading: height above its resting level and horizontal swing heading.
struct TrackerSample
{
  double t{0.0};
  double vertical{0.0};
  double horizontal_heading{0.0};

  friend bool operator==(const TrackerSample &, const TrackerSample &) = default;
};

struct LocomotionParams
{
  double window_length{0.8};
  double amplitude_threshold{0.05};
  double step_speed{1.0};
};

struct LocomotionState
{
  bool walking{false};
  double heading{0.0};
  double speed{0.0};
  std::optional<double> last_step_at;

  friend bool operator==(const LocomotionState &, const LocomotionState &) = default;
};

/**
 * @brief step-in-place detection over one window of leg-tracker samples
 *
 * Walking when the vertical peak-to-trough range reaches `amplitude_threshold` and the signal
 * crosses its window mean at least twice (one up/down pair). Heading is the circular mean of
 * the horizontal headings. Speed is binary: `step_speed` while walking, else 0.
 *
 * @throws PoseError(UnorderedWindow) when times are not strictly increasing,
 * PoseError(WindowTooShort) when the window spans less than `window_length`
 */
LocomotionState detect_locomotion(
  std::span<const TrackerSample> window, const LocomotionParams & params = {});

/// Sliding-window detector for one pedestrian; keeps just enough history for one window.
class LocomotionDetector
{
public:
  explicit LocomotionDetector(LocomotionParams params = {}) : params_(params) {}

  /// @throws PoseError(UnorderedWindow) if `sample` is not later than the previous one
  void push(const TrackerSample & sample);

  /// Absent until the buffered samples span a full window.
  std::optional<LocomotionState> state() const;

private:
  LocomotionParams params_;
  std::deque<TrackerSample> samples_;
};

void to_json(nlohmann::json & j, const TrackerSample & s);
void from_json(const nlohmann::json & j, TrackerSample & s);

}  // namespace twinloop::pose

#endif  // TWINLOOP__POSE__LOCOMOTION_HPP_
