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

#ifndef TWINLOOP__BUS__ENVELOPE_HPP_
#define TWINLOOP__BUS__ENVELOPE_HPP_

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::bus
{

namespace topics
{
inline constexpr std::string_view kVehicleState = "vehicle.state";
inline constexpr std::string_view kPedestrianState = "pedestrian.state";
inline constexpr std::string_view kPedestrianPose = "pedestrian.pose";
inline constexpr std::string_view kPedestrianTracker = "pedestrian.tracker";
inline constexpr std::string_view kSignalState = "signal.state";
inline constexpr std::string_view kWarningEvent = "warning.event";
inline constexpr std::string_view kAebEvent = "aeb.event";
inline constexpr std::string_view kControlVehicle = "control.vehicle";
inline constexpr std::string_view kControlPedestrian = "control.pedestrian";
inline constexpr std::string_view kRunConfig = "run.config";
inline constexpr std::string_view kRunStop = "run.stop";
/// Subscribing to this receives every topic.
inline constexpr std::string_view kAll = "*";
/// Prefix reserved for transport control frames; never published by nodes.
inline constexpr std::string_view kReservedPrefix = "bus.";
}  // namespace topics

struct Envelope
{
  std::string topic;
  std::uint64_t tick{0};
  std::uint64_t seq{0};
  std::string sender;
  nlohmann::json payload;

  friend bool operator==(const Envelope &, const Envelope &) = default;
};

enum class BusErrorKind {
  UnregisteredNode,
  StaleTick,
  FutureTick,
  BarrierTimeout,
  Desync,
  Protocol,
  ReservedTopic,
  Aborted,
};

std::string_view to_string(BusErrorKind kind);
BusErrorKind parse_bus_error_kind(std::string_view text);

class BusError : public std::runtime_error
{
public:
  BusError(BusErrorKind kind, const std::string & message)
  : std::runtime_error(message), kind_(kind)
  {
  }

  BusErrorKind kind() const { return kind_; }

private:
  BusErrorKind kind_;
};

void to_json(nlohmann::json & j, const Envelope & e);
void from_json(const nlohmann::json & j, Envelope & e);

/// One envelope as a single line of compact JSON terminated by '\n'.
std::string encode_line(const Envelope & e);

/// @throws BusError(Protocol) on malformed input
Envelope decode_line(std::string_view line);

/// Envelopes of one topic, preserving order.
std::vector<Envelope> filter_topic(const std::vector<Envelope> & messages, std::string_view topic);

bool is_reserved(std::string_view topic);

}  // namespace twinloop::bus

#endif  // TWINLOOP__BUS__ENVELOPE_HPP_
