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


#include "twinloop/agents/policies.hpp"
#include "twinloop/bus/ws_bridge.hpp"
#include "twinloop/harness/experiment.hpp"
#include "twinloop/harness/nodes.hpp"
#include "ws_client.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <memory>
#include <thread>

namespace twinloop
{
namespace
{

using bus::WsBridge;
using testing::WsClient;
using namespace std::chrono_literals;

TEST(WsBridge, ClaimsAreExclusive)
{
  WsBridge bridge;
  WsClient first(bridge.port());
  WsClient second(bridge.port());

  first.claim("vehicle");
  const auto claimed = first.read();
  ASSERT_TRUE(claimed);
  EXPECT_EQ(claimed->at("topic"), "bus.claimed");
  EXPECT_EQ(claimed->at("payload").at("role"), "vehicle");

  second.claim("vehicle");
  const auto refused = second.read();
  ASSERT_TRUE(refused);
  EXPECT_EQ(refused->at("topic"), "bus.error");
  EXPECT_EQ(refused->at("payload").at("kind"), "role_conflict");

  second.claim("pedestrian");
  EXPECT_EQ(second.read()->at("topic"), "bus.claimed");
}

TEST(WsBridge, ControlNeedsTheRole)
{
  WsBridge bridge;
  WsClient console(bridge.port());
  console.send(WsClient::frame("control.vehicle", {{"throttle", -1.0}}));
  const auto reply = console.read();
  ASSERT_TRUE(reply);
  EXPECT_EQ(reply->at("payload").at("kind"), "role_not_claimed");
  EXPECT_TRUE(bridge.take_inputs().empty());
}

TEST(WsBridge, RejectsBadInput)
{
  WsBridge bridge;
  WsClient console(bridge.port());
  console.claim("vehicle");
  console.read();
  console.send(WsClient::frame("control.vehicle", {{"throttle", 3.0}}));
  EXPECT_EQ(console.read()->at("payload").at("kind"), "protocol");
  console.send(WsClient::frame("vehicle.state", {}));
  EXPECT_EQ(console.read()->at("payload").at("kind"), "protocol");
  EXPECT_EQ(bus::validate_console_input("control.pedestrian", {{"walk", true}}), "");
  EXPECT_NE(bus::validate_console_input("control.pedestrian", {{"walk", 1}}), "");
  EXPECT_EQ(bus::required_role("control.vehicle"), "vehicle");
  EXPECT_EQ(bus::required_role("pedestrian.pose"), "pedestrian");
  EXPECT_EQ(bus::required_role("warning.event"), "");
}

TEST(WsBridge, LatestControlWins)
{
  WsBridge bridge;
  WsClient console(bridge.port());
  console.claim("vehicle");
  console.read();
  console.send(WsClient::frame("control.vehicle", {{"throttle", 0.2}}));
  console.send(WsClient::frame("control.vehicle", {{"throttle", -0.5}}));
  // A rejected frame is answered in order, so both controls have been handled by then.
  console.send(WsClient::frame("control.vehicle", {{"throttle", "x"}}));
  console.read();
  const auto inputs = bridge.take_inputs();
  ASSERT_EQ(inputs.size(), 1U);
  EXPECT_EQ(inputs[0].topic, "control.vehicle");
  EXPECT_EQ(inputs[0].payload.at("throttle"), -0.5);
  EXPECT_TRUE(bridge.take_inputs().empty());
}

TEST(WsBridge, ReleasedRoleCanBeReclaimed)
{
  WsBridge bridge;
  {
    WsClient first(bridge.port());
    first.claim("pedestrian");
    first.read();
  }
  WsClient second(bridge.port());
  for (int i = 0; i < 100; ++i) {
    second.claim("pedestrian");
    if (second.read()->at("topic") == "bus.claimed") {
      SUCCEED();
      return;
    }
    std::this_thread::sleep_for(10ms);
  }
  FAIL() << "role never released";
}

TEST(WsBridge, BroadcastReachesEveryConsole)
{
  WsBridge bridge;
  WsClient a(bridge.port());
  WsClient b(bridge.port());
  for (int i = 0; i < 200 && bridge.session_count() < 2; ++i) {
    std::this_thread::sleep_for(5ms);
  }
  ASSERT_EQ(bridge.session_count(), 2U);
  const bus::Envelope e{"vehicle.state", 12, 0, "vehicle", {{"speed", 3.5}}};
  bridge.broadcast(e);
  EXPECT_EQ(a.read()->get<bus::Envelope>(), e);
  EXPECT_EQ(b.read()->get<bus::Envelope>(), e);
}

TEST(WsBridge, StreamedPoseInputsAreQueued)
{
  WsBridge bridge;
  WsClient console(bridge.port());
  console.claim("pedestrian");
  console.read();
  console.send(WsClient::frame("pedestrian.tracker", {{"samples", nlohmann::json::array()}}));
  console.send(WsClient::frame("pedestrian.tracker", {{"samples", nlohmann::json::array()}}));
  console.send(WsClient::frame("control.pedestrian", {{"walk", "yes"}}));
  console.read();
  EXPECT_EQ(bridge.take_inputs().size(), 2U);
}

harness::RunConfig default_config(world::ExperimentKind kind)
{
  auto config = harness::load_run_config(std::string(TWINLOOP_SOURCE_DIR) + "/scenarios/default.json");
  config.scenario.experiment = kind;
  return config;
}

TEST(WsBridgeLoop, ConsoleBrakeActsOnTheNextTick)
{
  const auto config = default_config(world::ExperimentKind::HdvPed);
  std::unique_ptr<std::thread> console_thread;
  std::atomic<bool> sent{false};

  harness::RunOptions options;
  options.ws_port = 0;
  options.ticks_per_second = 400.0;
  options.on_bridge_ready = [&](unsigned short port) {
    auto console = std::make_shared<WsClient>(port);
    console_thread = std::make_unique<std::thread>([console, &sent] {
      console->claim("vehicle");
      while (auto frame = console->read()) {
        if (!sent && frame->at("topic") == "vehicle.state" && frame->at("tick") >= 20) {
          console->send(WsClient::frame("control.vehicle", {{"throttle", -1.0}}));
          sent = true;
        }
      }
    });
  };
  const auto result = harness::run_experiment(config, options);
  console_thread->join();
  ASSERT_TRUE(sent);

  std::optional<std::uint64_t> control_tick;
  for (const auto & e : result.log) {
    if (e.topic == "control.vehicle") {
      EXPECT_EQ(e.sender, "ws-bridge");
      control_tick = e.tick;
      break;
    }
  }
  ASSERT_TRUE(control_tick);
  const double expected = agents::human_vehicle_command(-1.0, config.agents.human);
  ASSERT_LT(expected, 0.0);
  const auto & records = result.trace.records;
  ASSERT_GT(records.size(), *control_tick + 1);
  EXPECT_EQ(records[*control_tick].tick, *control_tick);
  EXPECT_GE(records[*control_tick].accel_cmd, 0.0);
  EXPECT_DOUBLE_EQ(records[*control_tick + 1].accel_cmd, expected);
}

TEST(WsBridgeLoop, PassiveViewerChangesNothing)
{
  const auto config = default_config(world::ExperimentKind::AvPed);
  const auto plain = harness::run_experiment(config);

  std::unique_ptr<std::thread> viewer_thread;
  std::atomic<int> frames{0};
  harness::RunOptions options;
  options.ws_port = 0;
  options.on_bridge_ready = [&](unsigned short port) {
    auto viewer = std::make_shared<WsClient>(port);
    viewer_thread = std::make_unique<std::thread>([viewer, &frames] {
      while (viewer->read()) {
        ++frames;
      }
    });
  };
  const auto watched = harness::run_experiment(config, options);
  viewer_thread->join();

  EXPECT_GT(frames.load(), 0);
  EXPECT_EQ(watched.metrics, plain.metrics);
  EXPECT_EQ(harness::speed_time_csv(watched.trace), harness::speed_time_csv(plain.trace));
  EXPECT_EQ(harness::space_time_csv(watched.trace), harness::space_time_csv(plain.trace));
  EXPECT_EQ(harness::envelope_log_text(watched.log), harness::envelope_log_text(plain.log));
}

}  // namespace
}  // namespace twinloop
