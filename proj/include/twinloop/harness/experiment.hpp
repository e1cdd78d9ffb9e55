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

#ifndef TWINLOOP__HARNESS__EXPERIMENT_HPP_
#define TWINLOOP__HARNESS__EXPERIMENT_HPP_

#include "twinloop/bus/bus_core.hpp"
#include "twinloop/harness/metrics.hpp"
#include "twinloop/harness/run_config.hpp"
#include "twinloop/harness/trace.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twinloop::harness
{

enum class BusMode {
  /// every node on its own thread over one BusCore
  InProcess,
  /// world nodes as child processes over the loopback socket transport
  Processes,
};

struct RunOptions
{
  BusMode mode{BusMode::InProcess};
  /// 0 runs as fast as the barrier allows.
  double ticks_per_second{0.0};
  /// Opens the WebSocket bridge; 0 picks an ephemeral port.
  std::optional<unsigned short> ws_port;
  /// Called with the bound bridge port before the first tick.
  std::function<void(unsigned short)> on_bridge_ready;
  std::chrono::milliseconds barrier_timeout{bus::kDefaultBarrierTimeout};
  /// The twinloop executable that hosts child nodes (`twinloop node ...`).
  std::filesystem::path node_executable;
};

struct RunResult
{
  RunConfig config;
  RunTrace trace;
  ExperimentMetrics metrics;
  std::vector<bus::Envelope> log;
};

/// A run that could not complete: bus desync, barrier timeout, or a failed node.
class RunFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// @throws RunFailure
RunResult run_experiment(const RunConfig & config, const RunOptions & options = {});

/// Re-derives trace and metrics from a recorded envelope log.
/// @throws std::runtime_error when the log has no run.config envelope
RunResult replay(std::vector<bus::Envelope> log);

std::string envelope_log_text(std::span<const bus::Envelope> log);
std::vector<bus::Envelope> read_envelope_log(const std::filesystem::path & path);

/// metrics.json, speed_time.csv, space_time.csv and, when `with_log`, envelopes.log.
void write_run_outputs(
  const RunResult & result, const std::filesystem::path & out_dir, bool with_log = true);

}  // namespace twinloop::harness

#endif  // TWINLOOP__HARNESS__EXPERIMENT_HPP_
