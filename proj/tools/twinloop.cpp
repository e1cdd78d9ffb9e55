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

#include "twinloop/bus/socket_transport.hpp"
#include "twinloop/harness/experiment.hpp"
#include "twinloop/harness/nodes.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace
{

namespace harness = twinloop::harness;

std::filesystem::path self_executable(const char * argv0)
{
  std::error_code ec;
  auto path = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (ec) {
    path = std::filesystem::absolute(argv0);
  }
  return path;
}

int run_command(
  const std::string & scenario_path, const std::string & experiment, const std::string & out_dir,
  bool processes, std::optional<std::uint64_t> seed, double ticks_per_second, int ws_port, const char * argv0)
{
  auto config = harness::load_run_config(scenario_path);
  config.scenario.experiment = twinloop::world::parse_experiment(experiment);
  if (seed) {
    config.seed = *seed;
  }

  harness::RunOptions options;
  options.mode = processes ? harness::BusMode::Processes : harness::BusMode::InProcess;
  options.ticks_per_second = ticks_per_second;
  options.node_executable = self_executable(argv0);
  if (ws_port >= 0) {
    options.ws_port = static_cast<unsigned short>(ws_port);
    options.on_bridge_ready = [](unsigned short port) {
      std::cerr << "websocket bridge listening on ws://127.0.0.1:" << port << "\n";
    };
  }
  const auto result = harness::run_experiment(config, options);
  harness::write_run_outputs(result, out_dir);
  std::cout << harness::metrics_to_json(result.metrics).dump(2) << "\n";
  return 0;
}

int replay_command(const std::string & log_path, const std::string & out_dir)
{
  auto result = harness::replay(harness::read_envelope_log(log_path));
  if (!out_dir.empty()) {
    harness::write_run_outputs(result, out_dir);
  }
  std::cout << harness::metrics_to_json(result.metrics).dump(2) << "\n";
  return 0;
}

int node_command(const std::string & role, const std::string & endpoint, const std::string & config_json)
{
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("--connect expects host:port");
  }
  const auto host = endpoint.substr(0, colon);
  const auto port = static_cast<unsigned short>(std::stoul(endpoint.substr(colon + 1)));
  const auto config = harness::run_config_from_json(nlohmann::json::parse(config_json));
  auto node = harness::make_world_node(role, config);
  twinloop::bus::SocketClient client(host, port, role);
  harness::run_node(*node, client);
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"twinloop: lockstep digital-twin crossing experiments"};
  app.require_subcommand(1);

  std::string scenario;
  std::string experiment;
  std::string out_dir;
  bool processes = false;
  std::optional<std::uint64_t> seed;
  double ticks_per_second = 0.0;
  int ws_port = -1;
  auto * run = app.add_subcommand("run", "run one experiment and write its outputs");
  run->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--experiment", experiment, "hdv, av or cv")
    ->required()
    ->check(CLI::IsMember({"hdv", "av", "cv", "HDV_PED", "AV_PED", "CV_PED"}));
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--processes", processes, "host world nodes in child processes over TCP");
  run->add_option("--seed", seed, "seed for the synthetic tracker participant");
  run->add_option("--ticks-per-second", ticks_per_second, "wall-clock pacing, 0 = unpaced")
    ->check(CLI::NonNegativeNumber);
  run->add_option("--ws-port", ws_port, "open the WebSocket bridge on this port (0 = any)")
    ->check(CLI::Range(0, 65535));

  std::string log_path;
  std::string replay_out;
  auto * replay = app.add_subcommand("replay", "re-derive trace and metrics from a recording");
  replay->add_option("--log", log_path, "envelopes.log of a previous run")
    ->required()
    ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "write metrics and CSVs here");

  std::string role;
  std::string endpoint;
  std::string config_json;
  auto * node = app.add_subcommand("node", "host one world node (used by --processes)");
  node->add_option("--role", role, "vehicle, pedestrian, warning or participant")->required();
  node->add_option("--connect", endpoint, "bus server host:port")->required();
  node->add_option("--config-json", config_json, "run configuration")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return run_command(
        scenario, experiment, out_dir, processes, seed, ticks_per_second, ws_port, argv[0]);
    }
    if (*replay) {
      return replay_command(log_path, replay_out);
    }
    return node_command(role, endpoint, config_json);
  } catch (const std::exception & e) {
    std::cerr << "twinloop: " << e.what() << "\n";
    return 2;
  }
}
