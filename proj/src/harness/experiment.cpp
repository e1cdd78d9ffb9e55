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

#include "twinloop/harness/experiment.hpp"

#include "twinloop/bus/client.hpp"
#include "twinloop/bus/socket_transport.hpp"
#include "twinloop/bus/ws_bridge.hpp"
#include "twinloop/harness/nodes.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <csignal>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

extern char ** environ;

namespace twinloop::harness
{

namespace
{

/// First failure wins, except that a bus abort never hides the error that caused it.
class FailureSlot
{
public:
  void record(std::exception_ptr error)
  {
    std::lock_guard lock(mutex_);
    if (!error_ || (aborted(error_) && !aborted(error))) {
      error_ = std::move(error);
    }
  }

  void rethrow_if_failed(const bus::BusCore & core)
  {
    std::lock_guard lock(mutex_);
    if (error_ && !aborted(error_)) {
      throw RunFailure(describe(error_));
    }
    if (const auto failure = core.failure()) {
      throw RunFailure(
        std::string(bus::to_string(failure->first)) + ": " + failure->second);
    }
    if (error_) {
      throw RunFailure(describe(error_));
    }
  }

private:
  static bool aborted(const std::exception_ptr & e)
  {
    try {
      std::rethrow_exception(e);
    } catch (const bus::BusError & err) {
      return err.kind() == bus::BusErrorKind::Aborted;
    } catch (...) {
      return false;
    }
  }

  static std::string describe(const std::exception_ptr & e)
  {
    try {
      std::rethrow_exception(e);
    } catch (const bus::BusError & err) {
      return std::string(bus::to_string(err.kind())) + ": " + err.what();
    } catch (const std::exception & err) {
      return err.what();
    } catch (...) {
      return "unknown error";
    }
  }

  std::mutex mutex_;
  std::exception_ptr error_;
};

/// Runs a node on its own in-process client; the client outlives the handler so the root
/// cause is recorded before the disconnect aborts the other nodes.
void host_in_process(bus::BusCore & core, Node & node, FailureSlot & failures)
{
  std::unique_ptr<bus::InProcessClient> client;
  try {
    client = std::make_unique<bus::InProcessClient>(core, node.id());
    run_node(node, *client);
  } catch (...) {
    failures.record(std::current_exception());
  }
}

class ChildProcesses
{
public:
  ~ChildProcesses() { kill_all(); }

  void spawn(const std::vector<std::string> & args)
  {
    std::vector<char *> argv;
    for (const auto & a : args) {
      argv.push_back(const_cast<char *>(a.c_str()));
    }
    argv.push_back(nullptr);
    pid_t pid = 0;
    const int rc = posix_spawn(&pid, argv[0], nullptr, nullptr, argv.data(), environ);
    if (rc != 0) {
      throw RunFailure("cannot spawn " + args[0] + ": " + std::strerror(rc));
    }
    children_.push_back(pid);
  }

  /// @return description of the first child that did not exit cleanly, or ""
  std::string wait_all()
  {
    std::string problem;
    for (const pid_t pid : children_) {
      int status = 0;
      if (waitpid(pid, &status, 0) < 0) {
        continue;
      }
      if (problem.empty() && !(WIFEXITED(status) && WEXITSTATUS(status) == 0)) {
        problem = "node process " + std::to_string(pid) + " exited abnormally";
      }
    }
    children_.clear();
    return problem;
  }

  void kill_all()
  {
    for (const pid_t pid : children_) {
      ::kill(pid, SIGTERM);
    }
    wait_all();
  }

private:
  std::vector<pid_t> children_;
};

RunResult finish(const RunConfig & config, const RecorderNode & recorder)
{
  RunResult result;
  result.config = config;
  result.trace = recorder.builder().trace();
  result.log = recorder.log();
  if (result.trace.records.empty()) {
    throw RunFailure("run produced no trace records");
  }
  result.metrics = compute_metrics(result.trace, config.braking_onset_threshold);
  return result;
}

}  // namespace

RunResult run_experiment(const RunConfig & config, const RunOptions & options)
{
  world::validate(config.scenario);
  agents::validate(config.agents);

  const auto world_ids = world_node_ids(config);
  std::set<std::string> expected(world_ids.begin(), world_ids.end());
  expected.emplace(node_ids::kRecorder);
  if (options.ws_port) {
    expected.emplace(node_ids::kBridge);
  }
  auto core = std::make_shared<bus::BusCore>(expected, options.barrier_timeout);

  std::unique_ptr<bus::WsBridge> bridge;
  std::unique_ptr<BridgeNode> bridge_node;
  if (options.ws_port) {
    bridge = std::make_unique<bus::WsBridge>(*options.ws_port);
    bridge_node = std::make_unique<BridgeNode>(*bridge);
    if (options.on_bridge_ready) {
      options.on_bridge_ready(bridge->port());
    }
  }

  FailureSlot failures;
  RecorderNode recorder(config, options.ticks_per_second);
  std::vector<std::unique_ptr<Node>> local_nodes;
  std::vector<std::thread> threads;
  std::unique_ptr<bus::BusServer> server;
  ChildProcesses children;

  if (options.mode == BusMode::InProcess) {
    for (const auto & id : world_ids) {
      local_nodes.push_back(make_world_node(id, config));
    }
  } else {
    if (options.node_executable.empty()) {
      throw RunFailure("multi-process mode needs the node executable path");
    }
    server = std::make_unique<bus::BusServer>(core);
    const std::string endpoint = "127.0.0.1:" + std::to_string(server->port());
    const std::string config_text = run_config_to_json(config).dump();
    for (const auto & id : world_ids) {
      children.spawn(
        {options.node_executable.string(), "node", "--role", id, "--connect", endpoint,
         "--config-json", config_text});
    }
  }
  if (bridge_node) {
    local_nodes.push_back(std::move(bridge_node));
  }
  for (auto & node : local_nodes) {
    threads.emplace_back([&core, &failures, n = node.get()] { host_in_process(*core, *n, failures); });
  }

  host_in_process(*core, recorder, failures);

  for (auto & t : threads) {
    t.join();
  }
  std::string child_problem;
  if (server) {
    if (core->failure()) {
      children.kill_all();
    } else {
      child_problem = children.wait_all();
    }
  }
  // Checked before stopping the transports, whose shutdown aborts the core.
  failures.rethrow_if_failed(*core);
  if (!child_problem.empty()) {
    throw RunFailure(child_problem);
  }
  if (server) {
    server->stop();
  }
  if (bridge) {
    bridge->stop();
  }
  return finish(config, recorder);
}

RunResult replay(std::vector<bus::Envelope> log)
{
  const auto it = std::find_if(log.begin(), log.end(), [](const bus::Envelope & e) {
    return e.topic == bus::topics::kRunConfig;
  });
  if (it == log.end()) {
    throw std::runtime_error("envelope log has no run.config envelope");
  }
  const RunConfig config = run_config_from_json(it->payload);
  TraceBuilder builder(config);
  std::size_t begin = 0;
  while (begin < log.size()) {
    std::size_t end = begin;
    while (end < log.size() && log[end].tick == log[begin].tick) {
      ++end;
    }
    builder.consume_batch(std::span<const bus::Envelope>(log.data() + begin, end - begin));
    begin = end;
  }
  RunResult result;
  result.config = config;
  result.trace = builder.trace();
  if (result.trace.records.empty()) {
    throw std::runtime_error("envelope log holds no world states");
  }
  result.metrics = compute_metrics(result.trace, config.braking_onset_threshold);
  result.log = std::move(log);
  return result;
}

std::string envelope_log_text(std::span<const bus::Envelope> log)
{
  std::string out;
  for (const auto & e : log) {
    out += bus::encode_line(e);
  }
  return out;
}

std::vector<bus::Envelope> read_envelope_log(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open envelope log " + path.string());
  }
  std::vector<bus::Envelope> log;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) {
      continue;
    }
    try {
      log.push_back(bus::decode_line(line));
    } catch (const bus::BusError & e) {
      throw std::runtime_error(
        path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return log;
}

void write_run_outputs(
  const RunResult & result, const std::filesystem::path & out_dir, bool with_log)
{
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  }
  write_text_file(out_dir / "metrics.json", metrics_to_json(result.metrics).dump(2) + "\n");
  emit_traces(result.trace, out_dir);
  if (with_log) {
    write_text_file(out_dir / "envelopes.log", envelope_log_text(result.log));
  }
}

}  // namespace twinloop::harness
