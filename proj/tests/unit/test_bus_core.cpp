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


#include "twinloop/bus/bus_core.hpp"
#include "twinloop/bus/client.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace twinloop::bus
{
namespace
{

using namespace std::chrono_literals;

BusErrorKind kind_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const BusError & e) {
    return e.kind();
  }
  ADD_FAILURE() << "no BusError thrown";
  return BusErrorKind::Aborted;
}

TEST(BusCore, SequenceNumbersPerTopicAndSender)
{
  BusCore core({"a", "b"});
  InProcessClient a(core, "a");
  InProcessClient b(core, "b");
  EXPECT_EQ(a.publish("t", {}), 0U);
  EXPECT_EQ(a.publish("t", {}), 1U);
  EXPECT_EQ(a.publish("u", {}), 0U);
  EXPECT_EQ(b.publish("t", {}), 0U);
}

TEST(BusCore, UnknownNodeRejected)
{
  BusCore core({"a"});
  EXPECT_EQ(kind_of([&] { core.register_node("ghost"); }), BusErrorKind::UnregisteredNode);
  EXPECT_EQ(kind_of([&] { core.publish("ghost", "t", {}, 0); }), BusErrorKind::UnregisteredNode);
}

TEST(BusCore, StaleAndFutureTicksRejected)
{
  BusCore core({"solo"});
  InProcessClient c(core, "solo");
  c.arrive();
  c.arrive();
  ASSERT_EQ(c.tick(), 2U);
  EXPECT_EQ(kind_of([&] { c.publish("t", {}, 1); }), BusErrorKind::StaleTick);
  EXPECT_EQ(kind_of([&] { c.publish("t", {}, 3); }), BusErrorKind::FutureTick);
  EXPECT_EQ(kind_of([&] { core.publish("solo", "t", {}, 0); }), BusErrorKind::StaleTick);
  EXPECT_EQ(kind_of([&] { c.publish("bus.grant", {}); }), BusErrorKind::ReservedTopic);
}

TEST(BusCore, SingleNodeDeliversNextTick)
{
  BusCore core({"solo"});
  InProcessClient c(core, "solo");
  c.subscribe("t");
  c.publish("t", {{"v", 1}});
  const auto grant = c.arrive();
  EXPECT_EQ(grant.tick, 1U);
  ASSERT_EQ(grant.messages.size(), 1U);
  EXPECT_EQ(grant.messages[0].tick, 0U);
  EXPECT_EQ(grant.messages[0].payload.at("v"), 1);
  EXPECT_TRUE(c.arrive().messages.empty());
}

TEST(BusCore, ReleaseOrderIsSenderTopicSeq)
{
  BusCore core({"zeta", "alpha", "reader"});
  InProcessClient zeta(core, "zeta");
  InProcessClient alpha(core, "alpha");
  InProcessClient reader(core, "reader");
  reader.subscribe("*");
  zeta.publish("b", {});
  alpha.publish("b", {});
  zeta.publish("a", {});
  alpha.publish("a", {});
  alpha.publish("a", {});

  std::thread tz([&] { zeta.arrive(); });
  std::thread ta([&] { alpha.arrive(); });
  const auto grant = reader.arrive();
  tz.join();
  ta.join();

  std::vector<std::string> order;
  for (const auto & e : grant.messages) {
    order.push_back(e.sender + "/" + e.topic + "/" + std::to_string(e.seq));
  }
  EXPECT_EQ(order, (std::vector<std::string>{
                     "alpha/a/0", "alpha/a/1", "alpha/b/0", "zeta/a/0", "zeta/b/0"}));
}

TEST(BusCore, LateSubscriberSeesCurrentTickOnwards)
{
  BusCore core({"pub", "sub"});
  InProcessClient pub(core, "pub");
  InProcessClient sub(core, "sub");
  pub.publish("t", {{"n", 0}});
  std::thread tp([&] { pub.arrive(); });
  EXPECT_TRUE(sub.arrive().messages.empty());
  tp.join();

  pub.publish("t", {{"n", 1}});
  sub.subscribe("t");
  std::thread tp2([&] { pub.arrive(); });
  const auto grant = sub.arrive();
  tp2.join();
  ASSERT_EQ(grant.messages.size(), 1U);
  EXPECT_EQ(grant.messages[0].payload.at("n"), 1);
}

TEST(BusCore, ReRegistrationAbortsWithDesync)
{
  BusCore core({"a", "b"});
  InProcessClient a(core, "a");
  EXPECT_EQ(kind_of([&] { core.register_node("a"); }), BusErrorKind::Desync);
  ASSERT_TRUE(core.failure().has_value());
  EXPECT_EQ(core.failure()->first, BusErrorKind::Desync);
  EXPECT_EQ(kind_of([&] { a.publish("t", {}); }), BusErrorKind::Desync);
}

TEST(BusCore, BarrierTimeoutNamesLaggingNode)
{
  BusCore core({"fast", "slow"}, 150ms);
  InProcessClient fast(core, "fast");
  InProcessClient slow(core, "slow");
  const auto started = std::chrono::steady_clock::now();
  try {
    fast.arrive();
    FAIL() << "barrier released without slow";
  } catch (const BusError & e) {
    EXPECT_EQ(e.kind(), BusErrorKind::BarrierTimeout);
    EXPECT_NE(std::string(e.what()).find("slow"), std::string::npos) << e.what();
    EXPECT_EQ(std::string(e.what()).find("fast"), std::string::npos) << e.what();
  }
  EXPECT_GE(std::chrono::steady_clock::now() - started, 150ms);
  EXPECT_EQ(kind_of([&] { slow.arrive(); }), BusErrorKind::BarrierTimeout);
}

TEST(BusCore, UnannouncedDisconnectAbortsOthers)
{
  BusCore core({"a", "b"}, 5s);
  InProcessClient a(core, "a");
  std::thread t([&] {
    InProcessClient b(core, "b");
    std::this_thread::sleep_for(50ms);
  });
  EXPECT_EQ(kind_of([&] { a.arrive(); }), BusErrorKind::Desync);
  t.join();
}

TEST(BusCore, LeaveReleasesWaitingNodes)
{
  BusCore core({"a", "b"}, 5s);
  InProcessClient a(core, "a");
  InProcessClient b(core, "b");
  std::thread t([&] {
    std::this_thread::sleep_for(50ms);
    b.leave();
  });
  EXPECT_EQ(a.arrive().tick, 1U);
  t.join();
  EXPECT_EQ(a.arrive().tick, 2U);
  EXPECT_FALSE(core.failure().has_value());
}

std::vector<std::string> thousand_tick_transcript()
{
  const std::vector<std::string> names{"n0", "n1", "n2", "n3"};
  BusCore core({names.begin(), names.end()}, 5s);
  std::vector<std::string> transcript;
  std::vector<std::thread> threads;
  std::atomic<bool> violation{false};
  std::mutex mutex;
  for (const auto & name : names) {
    threads.emplace_back([&, name] {
      InProcessClient c(core, name);
      c.subscribe("*");
      for (int k = 0; k < 1000; ++k) {
        c.publish("x", {{"k", k}});
        c.publish("y", {{"k", k}});
        const auto grant = c.arrive();
        for (const auto & e : grant.messages) {
          if (e.tick + 1 != grant.tick) {
            violation = true;
          }
        }
        if (name == "n0") {
          std::lock_guard lock(mutex);
          for (const auto & e : grant.messages) {
            transcript.push_back(encode_line(e));
          }
        }
      }
      c.leave();
    });
  }
  for (auto & t : threads) {
    t.join();
  }
  EXPECT_FALSE(violation);
  return transcript;
}

TEST(BusCore, ThousandTicksDeterministic)
{
  const auto first = thousand_tick_transcript();
  EXPECT_EQ(first.size(), 8000U);
  EXPECT_EQ(first, thousand_tick_transcript());
}

}  // namespace
}  // namespace twinloop::bus
