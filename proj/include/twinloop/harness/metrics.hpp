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

#ifndef TWINLOOP__HARNESS__METRICS_HPP_
#define TWINLOOP__HARNESS__METRICS_HPP_

#include "twinloop/harness/trace.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace twinloop::harness
{

/// Distances are measured from the vehicle reference point to the zebra line.
struct ExperimentMetrics
{
  std::optional<double> v2p_distance;
  std::optional<double> braking_point;
  std::optional<double> avg_deceleration;
  std::optional<double> max_deceleration;
  bool pedestrian_reached_conflict{false};
  bool collision{false};

  friend bool operator==(const ExperimentMetrics &, const ExperimentMetrics &) = default;
};

/**
 * @brief Table-style metrics of one run
 *
 * Braking onset is the first record whose commanded deceleration reaches `onset_threshold`;
 * that command was issued at the previous record, which supplies the braking point and the
 * onset speed and time. The period ends at the first zero-speed record, with the stop instant
 * interpolated inside the final tick. avg_deceleration is onset speed over period duration.
 * v2p_distance is only present once the vehicle has stopped.
 *
 * @throws std::invalid_argument for an empty trace or non-positive threshold
 */
ExperimentMetrics compute_metrics(const RunTrace & trace, double onset_threshold = 0.5);

nlohmann::json metrics_to_json(const ExperimentMetrics & metrics);

/// Shortest round-trip decimal text, "-0" normalized to "0".
std::string format_number(double value);

std::string speed_time_csv(const RunTrace & trace);
/// Vehicle distance positive, pedestrian distance negated.
std::string space_time_csv(const RunTrace & trace);

/// Writes speed_time.csv and space_time.csv into `out_dir`.
/// @throws std::runtime_error naming the path on I/O failure
void emit_traces(const RunTrace & trace, const std::filesystem::path & out_dir);

/// @throws std::runtime_error naming the path on I/O failure
void write_text_file(const std::filesystem::path & path, const std::string & text);

}  // namespace twinloop::harness

#endif  // TWINLOOP__HARNESS__METRICS_HPP_
