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

#include "twinloop/harness/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace twinloop::harness
{

namespace
{

nlohmann::json optional_number(const std::optional<double> & v)
{
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

ExperimentMetrics compute_metrics(const RunTrace & trace, double onset_threshold)
{
  if (trace.records.empty()) {
    throw std::invalid_argument("compute_metrics: empty trace");
  }
  if (!(onset_threshold > 0.0)) {
    throw std::invalid_argument("compute_metrics: onset threshold must be positive");
  }
  const auto & rs = trace.records;

  ExperimentMetrics m;
  m.pedestrian_reached_conflict = std::any_of(
    rs.begin(), rs.end(), [](const TraceRecord & r) { return r.pedestrian_distance <= 0.0; });
  m.collision = std::any_of(rs.begin(), rs.end(), [](const TraceRecord & r) {
    return std::find(r.events.begin(), r.events.end(), events::kCollision) != r.events.end();
  });

  std::size_t onset = 0;
  while (onset < rs.size() && -rs[onset].accel_cmd < onset_threshold) {
    ++onset;
  }
  if (onset == rs.size() || onset == 0) {
    return m;
  }
  const TraceRecord & start = rs[onset - 1];
  m.braking_point = start.vehicle_distance_to_zebra;

  std::size_t stop = onset;
  while (stop < rs.size() && rs[stop].vehicle_speed > 0.0) {
    ++stop;
  }
  const std::size_t last = std::min(stop, rs.size() - 1);

  double peak = 0.0;
  for (std::size_t i = onset; i <= last; ++i) {
    peak = std::max(peak, -rs[i].accel_cmd);
  }
  m.max_deceleration = peak;

  double end_time = rs[last].sim_time;
  double speed_drop = start.vehicle_speed - rs[last].vehicle_speed;
  if (stop < rs.size()) {
    m.v2p_distance = rs[stop].vehicle_distance_to_zebra;
    const TraceRecord & before = rs[stop - 1];
    const double decel = -rs[stop].accel_cmd;
    if (decel > 0.0) {
      end_time = std::min(rs[stop].sim_time, before.sim_time + before.vehicle_speed / decel);
    }
    speed_drop = start.vehicle_speed;
  }
  const double duration = end_time - start.sim_time;
  if (duration > 0.0) {
    m.avg_deceleration = speed_drop / duration;
  }
  return m;
}

nlohmann::json metrics_to_json(const ExperimentMetrics & m)
{
  return nlohmann::json{
    {"v2p_distance", optional_number(m.v2p_distance)},
    {"braking_point", optional_number(m.braking_point)},
    {"avg_deceleration", optional_number(m.avg_deceleration)},
    {"max_deceleration", optional_number(m.max_deceleration)},
    {"pedestrian_reached_conflict", m.pedestrian_reached_conflict},
    {"collision", m.collision},
  };
}

std::string format_number(double value)
{
  if (value == 0.0) {
    return "0";
  }
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_number: conversion failed");
  }
  return std::string(buf.data(), end);
}

std::string speed_time_csv(const RunTrace & trace)
{
  std::string out = "sim_time,vehicle_speed,pedestrian_speed\n";
  for (const auto & r : trace.records) {
    out += format_number(r.sim_time) + ',' + format_number(r.vehicle_speed) + ',' +
           format_number(r.pedestrian_speed) + '\n';
  }
  return out;
}

std::string space_time_csv(const RunTrace & trace)
{
  std::string out = "sim_time,vehicle_distance_to_conflict,pedestrian_distance_to_conflict\n";
  for (const auto & r : trace.records) {
    out += format_number(r.sim_time) + ',' + format_number(r.vehicle_distance) + ',' +
           format_number(-r.pedestrian_distance) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

void emit_traces(const RunTrace & trace, const std::filesystem::path & out_dir)
{
  write_text_file(out_dir / "speed_time.csv", speed_time_csv(trace));
  write_text_file(out_dir / "space_time.csv", space_time_csv(trace));
}

}  // namespace twinloop::harness
