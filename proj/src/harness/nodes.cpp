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

#include "twinloop/harness/nodes.hpp"

#include "twinloop/agents/policies.hpp"
#include "twinloop/world/kinematics.hpp"
#include "twinloop/world/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace twinloop::harness
{

using nlohmann::json;

namespace
{

constexpr double kClockSlack = 1e-9;

std::string topic(std::string_view t) { return std::string(t); }

bool has_stop(std::span<const bus::Envelope> inbox)
{
  return std::any_of(inbox.begin(), inbox.end(), [](const bus::Envelope & e) {
    return e.topic == bus::topics::kRunStop;
  });
}

double tick_time(std::uint64_t tick, double dt) { return static_cast<double>(tick) * dt; }

}  // namespace

void run_node(Node & node, bus::BusClient & client)
{
  for (const auto & t : node.subscriptions()) {
    client.subscribe(t);
  }
  std::vector<bus::Envelope> inbox;
  for (;;) {
    node.on_tick(client.tick(), inbox, client);
    if (has_stop(inbox)) {
      break;
    }
    inbox = client.arrive().messages;
  }
  client.leave();
}

// ---------------------------------------------------------------------------------------------

VehicleWorldNode::VehicleWorldNode(const RunConfig & config)
: config_(config),
  vehicle_(world::initial_vehicle(config.scenario)),
  pedestrian_(world::initial_pedestrian(config.scenario))
{
}

std::vector<std::string> VehicleWorldNode::subscriptions() const
{
  return {
    topic(bus::topics::kPedestrianState), topic(bus::topics::kWarningEvent),
    topic(bus::topics::kControlVehicle), topic(bus::topics::kRunStop)};
}

double VehicleWorldNode::choose_command(double now, bus::BusClient & bus, std::uint64_t tick)
{
  if (human_command_) {
    return *human_command_;
  }
  const auto & s = config_.scenario;
  switch (s.experiment) {
    case world::ExperimentKind::HdvPed: {
      const auto d = agents::hdv_driver_policy(
        vehicle_, pedestrian_, s.obstacles, config_.agents.hdv_driver, perceived_at_, now);
      perceived_at_ = d.perceived_at;
      return d.accel_cmd;
    }
    case world::ExperimentKind::AvPed: {
      const auto ttc = warning::compute_ttc(vehicle_, pedestrian_);
      const bool detected = aeb::detect_pedestrian(vehicle_, pedestrian_, s.obstacles);
      const bool was_latched = aeb_.latched;
      const auto cmd = aeb::aeb_step(aeb_, ttc, detected, s.ttc_threshold, now);
      aeb_ = cmd.state;
      if (aeb_.latched && !was_latched) {
        vehicle_.aeb_activated_at = aeb_.activated_at;
        bus.publish(
          topic(bus::topics::kAebEvent),
          json{{"tick", tick}, {"sim_time", now}, {"ttc", ttc.ttc ? json(*ttc.ttc) : json()}});
      }
      return cmd.accel_cmd;
    }
    case world::ExperimentKind::CvPed:
      return agents::cv_driver_policy(vehicle_, config_.agents.cv_driver, now);
  }
  return 0.0;
}

void VehicleWorldNode::publish_state(bus::BusClient & bus)
{
  bus.publish(topic(bus::topics::kVehicleState), json(vehicle_));
  bus.publish(topic(bus::topics::kSignalState), json(signal_));
}

void VehicleWorldNode::on_tick(
  std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  const auto & s = config_.scenario;
  if (tick == 0) {
    signal_ = world::update_signal(
      signal_, world::eta_to_conflict(vehicle_.distance_to_conflict, vehicle_.speed),
      s.signal_eta_trigger, 0.0);
    publish_state(bus);
    return;
  }
  for (const auto & e : inbox) {
    if (e.topic == bus::topics::kPedestrianState) {
      pedestrian_ = e.payload.get<world::PedestrianState>();
    } else if (e.topic == bus::topics::kWarningEvent) {
      const auto event = e.payload.get<warning::WarningEvent>();
      if (event.to_vehicle && !vehicle_.warning_received_at) {
        vehicle_.warning_received_at = event.sim_time;
      }
    } else if (e.topic == bus::topics::kControlVehicle) {
      human_command_ =
        agents::human_vehicle_command(e.payload.at("throttle").get<double>(), config_.agents.human);
    }
  }

  const double now = tick_time(tick - 1, s.dt);
  const double accel = std::max(choose_command(now, bus, tick), -agents::kMaxDeceleration);
  if (accel < 0.0 && !vehicle_.braking_started_at) {
    vehicle_.braking_started_at = now;
  }
  vehicle_ = world::step_vehicle(vehicle_, accel, s.dt);
  signal_ = world::update_signal(
    signal_, world::eta_to_conflict(vehicle_.distance_to_conflict, vehicle_.speed),
    s.signal_eta_trigger, tick_time(tick, s.dt));
  publish_state(bus);
}

// ---------------------------------------------------------------------------------------------

PedestrianWorldNode::PedestrianWorldNode(const RunConfig & config)
: config_(config),
  pedestrian_(world::initial_pedestrian(config.scenario)),
  locomotion_(config.locomotion),
  skeleton_(pose::blazepose_keypoint_names())
{
}

std::vector<std::string> PedestrianWorldNode::subscriptions() const
{
  return {
    topic(bus::topics::kSignalState),      topic(bus::topics::kWarningEvent),
    topic(bus::topics::kControlPedestrian), topic(bus::topics::kPedestrianPose),
    topic(bus::topics::kPedestrianTracker), topic(bus::topics::kRunStop)};
}

agents::PedestrianDecision PedestrianWorldNode::tracker_decision() const
{
  using world::PedestrianPhase;
  const auto state = locomotion_.state();
  const bool walking = state && state->walking;
  const double speed = walking ? state->speed : 0.0;
  const double margin = config_.scenario.pedestrian_exit_margin;
  switch (pedestrian_.phase) {
    case PedestrianPhase::Waiting:
      return walking ? agents::PedestrianDecision{PedestrianPhase::Crossing, speed}
                     : agents::PedestrianDecision{PedestrianPhase::Waiting, 0.0};
    case PedestrianPhase::Crossing:
      if (pedestrian_.distance_to_conflict <= -margin) {
        return {PedestrianPhase::Crossed, 0.0};
      }
      if (!walking) {
        return {
          pedestrian_.warning_received_at ? PedestrianPhase::StoppedByWarning
                                          : PedestrianPhase::Crossing,
          0.0};
      }
      return {PedestrianPhase::Crossing, speed};
    case PedestrianPhase::StoppedByWarning:
    case PedestrianPhase::Crossed:
      break;
  }
  return {pedestrian_.phase, 0.0};
}

agents::PedestrianDecision PedestrianWorldNode::console_decision(bool walk) const
{
  using world::PedestrianPhase;
  if (pedestrian_.phase == PedestrianPhase::Crossed) {
    return {PedestrianPhase::Crossed, 0.0};
  }
  if (!walk) {
    return {pedestrian_.phase, 0.0};
  }
  if (pedestrian_.distance_to_conflict <= -config_.scenario.pedestrian_exit_margin) {
    return {PedestrianPhase::Crossed, 0.0};
  }
  return {PedestrianPhase::Crossing, config_.scenario.v_pedestrian};
}

void PedestrianWorldNode::on_tick(
  std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  const auto & s = config_.scenario;
  avatar_.reset();
  for (const auto & e : inbox) {
    if (e.topic == bus::topics::kSignalState) {
      signal_ = e.payload.get<world::SignalState>();
    } else if (e.topic == bus::topics::kWarningEvent) {
      const auto event = e.payload.get<warning::WarningEvent>();
      if (event.to_pedestrian && !pedestrian_.warning_received_at) {
        pedestrian_.warning_received_at = event.sim_time;
      }
    } else if (e.topic == bus::topics::kControlPedestrian) {
      console_walk_ = e.payload.at("walk").get<bool>();
    } else if (e.topic == bus::topics::kPedestrianTracker) {
      try {
        for (const auto & sample : e.payload.at("samples")) {
          locomotion_.push(sample.get<pose::TrackerSample>());
        }
      } catch (const std::exception &) {
        ++rejected_pose_frames_;
      }
    } else if (e.topic == bus::topics::kPedestrianPose) {
      try {
        const auto frame = pose::keypoint_frame_from_json(e.payload);
        const auto bones = pose::map_to_avatar(frame, std::span<const std::string>(skeleton_));
        avatar_ = pose::bones_to_json(bones);
      } catch (const std::exception &) {
        ++rejected_pose_frames_;
      }
    }
  }

  if (tick > 0) {
    const double now = tick_time(tick - 1, s.dt);
    agents::PedestrianDecision decision;
    if (console_walk_) {
      decision = console_decision(*console_walk_);
    } else if (config_.pedestrian_source == PedestrianSource::Tracker) {
      decision = tracker_decision();
    } else {
      decision = agents::pedestrian_policy(
        pedestrian_, signal_, config_.agents.pedestrian, s.v_pedestrian,
        s.pedestrian_exit_margin, now);
    }
    pedestrian_ = world::step_pedestrian(pedestrian_, decision.speed_cmd, s.dt);
    pedestrian_.phase = decision.phase;
  }

  json payload = pedestrian_;
  if (avatar_) {
    payload["avatar"] = *avatar_;
  }
  bus.publish(topic(bus::topics::kPedestrianState), std::move(payload));
}

// ---------------------------------------------------------------------------------------------

WarningServiceNode::WarningServiceNode(const RunConfig & config)
: dt_(config.scenario.dt), service_(config.scenario.experiment, config.scenario.ttc_threshold)
{
}

std::vector<std::string> WarningServiceNode::subscriptions() const
{
  return {
    topic(bus::topics::kVehicleState), topic(bus::topics::kPedestrianState),
    topic(bus::topics::kRunStop)};
}

void WarningServiceNode::on_tick(
  std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  std::optional<world::VehicleState> vehicle;
  std::optional<world::PedestrianState> pedestrian;
  for (const auto & e : inbox) {
    if (e.topic == bus::topics::kVehicleState) {
      vehicle = e.payload.get<world::VehicleState>();
    } else if (e.topic == bus::topics::kPedestrianState) {
      pedestrian = e.payload.get<world::PedestrianState>();
    }
  }
  if (!vehicle || !pedestrian) {
    return;
  }
  if (const auto event = service_.on_snapshot(tick, tick_time(tick, dt_), *vehicle, *pedestrian)) {
    bus.publish(topic(bus::topics::kWarningEvent), json(*event));
  }
}

// ---------------------------------------------------------------------------------------------

ParticipantNode::ParticipantNode(const RunConfig & config, std::uint64_t pose_period)
: config_(config),
  pose_period_(std::max<std::uint64_t>(pose_period, 1)),
  rng_(config.seed),
  position_(config.scenario.crossing_path.origin)
{
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  phase_offset_ = phase(rng_);
}

std::vector<std::string> ParticipantNode::subscriptions() const
{
  return {
    topic(bus::topics::kSignalState), topic(bus::topics::kWarningEvent),
    topic(bus::topics::kPedestrianState), topic(bus::topics::kRunStop)};
}

void ParticipantNode::on_tick(
  std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  constexpr double kStepHz = 2.0;
  constexpr double kStepAmplitude = 0.08;
  constexpr double kSensorNoise = 0.002;
  constexpr double kHeadingNoise = 0.02;

  for (const auto & e : inbox) {
    if (e.topic == bus::topics::kSignalState) {
      walk_seen_ = walk_seen_ || e.payload.get<world::SignalState>().pedestrian_light ==
                                   world::PedestrianLight::Walk;
    } else if (e.topic == bus::topics::kWarningEvent) {
      const auto event = e.payload.get<warning::WarningEvent>();
      if (event.to_pedestrian && !warned_at_) {
        warned_at_ = event.sim_time;
      }
    } else if (e.topic == bus::topics::kPedestrianState) {
      const auto state = e.payload.get<world::PedestrianState>();
      position_ = state.position;
      done_ = done_ || state.phase == world::PedestrianPhase::Crossed;
    }
  }

  const double now = tick_time(tick, config_.scenario.dt);
  const bool heeds_warning = config_.agents.pedestrian.reacts_to_warning && warned_at_ &&
                             now - *warned_at_ + kClockSlack >=
                               config_.agents.pedestrian.stop_reaction_time;
  const bool stepping = walk_seen_ && !done_ && !heeds_warning;
  if (stepping && !stepping_since_) {
    stepping_since_ = now;
  } else if (!stepping) {
    stepping_since_.reset();
  }

  double vertical = kSensorNoise * noise_(rng_);
  if (stepping_since_) {
    vertical += kStepAmplitude *
                std::sin(2.0 * std::numbers::pi * kStepHz * (now - *stepping_since_) + phase_offset_);
  }
  const auto dir = config_.scenario.crossing_path.direction;
  const double heading = std::atan2(dir.y, dir.x) + kHeadingNoise * noise_(rng_);
  bus.publish(
    topic(bus::topics::kPedestrianTracker),
    json{{"samples", json::array({json(pose::TrackerSample{now, vertical, heading})})}});

  if (tick % pose_period_ == 0) {
    pose::KeypointFrame frame;
    frame.tick = tick;
    const auto & names = pose::blazepose_keypoint_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const double height = 1.7 * (1.0 - static_cast<double>(i) / static_cast<double>(names.size()));
      frame.keypoints.push_back(pose::Keypoint{
        names[i],
        pose::Vec3{
          position_.x + 0.01 * noise_(rng_), position_.y + 0.01 * noise_(rng_),
          height + 0.01 * noise_(rng_)},
        pose::Quaternion{}});
    }
    bus.publish(topic(bus::topics::kPedestrianPose), pose::keypoint_frame_to_json(frame));
  }
}

// ---------------------------------------------------------------------------------------------

RecorderNode::RecorderNode(const RunConfig & config, double ticks_per_second)
: config_(config), ticks_per_second_(ticks_per_second), builder_(config)
{
}

std::vector<std::string> RecorderNode::subscriptions() const { return {topic(bus::topics::kAll)}; }

void RecorderNode::on_tick(
  std::uint64_t tick, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  if (tick == 0) {
    started_ = std::chrono::steady_clock::now();
    bus.publish(topic(bus::topics::kRunConfig), run_config_to_json(config_));
  }
  log_.insert(log_.end(), inbox.begin(), inbox.end());
  builder_.consume_batch(inbox);
  if (builder_.done() && !stop_sent_) {
    bus.publish(topic(bus::topics::kRunStop), json{{"reason", builder_.trace().end_reason}});
    stop_sent_ = true;
  }
  if (ticks_per_second_ > 0.0) {
    const auto due = started_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(
                                    static_cast<double>(tick) / ticks_per_second_));
    std::this_thread::sleep_until(due);
  }
}

// ---------------------------------------------------------------------------------------------

std::vector<std::string> BridgeNode::subscriptions() const { return {topic(bus::topics::kAll)}; }

void BridgeNode::on_tick(
  std::uint64_t /*tick*/, std::span<const bus::Envelope> inbox, bus::BusClient & bus)
{
  for (const auto & e : inbox) {
    bridge_.broadcast(e);
  }
  for (auto & input : bridge_.take_inputs()) {
    bus.publish(input.topic, std::move(input.payload));
  }
}

// ---------------------------------------------------------------------------------------------

std::unique_ptr<Node> make_world_node(const std::string & role, const RunConfig & config)
{
  if (role == node_ids::kVehicle) {
    return std::make_unique<VehicleWorldNode>(config);
  }
  if (role == node_ids::kPedestrian) {
    return std::make_unique<PedestrianWorldNode>(config);
  }
  if (role == node_ids::kWarning) {
    return std::make_unique<WarningServiceNode>(config);
  }
  if (role == node_ids::kParticipant) {
    return std::make_unique<ParticipantNode>(config);
  }
  throw std::invalid_argument("unknown node role: " + role);
}

std::vector<std::string> world_node_ids(const RunConfig & config)
{
  std::vector<std::string> ids{
    std::string(node_ids::kVehicle), std::string(node_ids::kPedestrian),
    std::string(node_ids::kWarning)};
  if (config.pedestrian_source == PedestrianSource::Tracker) {
    ids.emplace_back(node_ids::kParticipant);
  }
  return ids;
}

}  // namespace twinloop::harness
