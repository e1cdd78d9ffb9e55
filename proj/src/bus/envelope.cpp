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

#include "twinloop/bus/envelope.hpp"

#include <algorithm>

namespace twinloop::bus
{

using nlohmann::json;

std::string_view to_string(BusErrorKind kind)
{
  switch (kind) {
    case BusErrorKind::UnregisteredNode:
      return "unregistered_node";
    case BusErrorKind::StaleTick:
      return "stale_tick";
    case BusErrorKind::FutureTick:
      return "future_tick";
    case BusErrorKind::BarrierTimeout:
      return "barrier_timeout";
    case BusErrorKind::Desync:
      return "desync";
    case BusErrorKind::Protocol:
      return "protocol";
    case BusErrorKind::ReservedTopic:
      return "reserved_topic";
    case BusErrorKind::Aborted:
      return "aborted";
  }
  return "aborted";
}

BusErrorKind parse_bus_error_kind(std::string_view text)
{
  for (auto kind :
       {BusErrorKind::UnregisteredNode, BusErrorKind::StaleTick, BusErrorKind::FutureTick,
        BusErrorKind::BarrierTimeout, BusErrorKind::Desync, BusErrorKind::Protocol,
        BusErrorKind::ReservedTopic, BusErrorKind::Aborted}) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  return BusErrorKind::Protocol;
}

void to_json(json & j, const Envelope & e)
{
  j = json{
    {"topic", e.topic}, {"tick", e.tick}, {"seq", e.seq}, {"sender", e.sender},
    {"payload", e.payload}};
}

void from_json(const json & j, Envelope & e)
{
  auto counter = [&j](const char * key) {
    const auto & v = j.at(key);
    if (!v.is_number_unsigned()) {
      throw BusError(BusErrorKind::Protocol, std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };
  e.topic = j.at("topic").get<std::string>();
  e.tick = counter("tick");
  e.seq = counter("seq");
  e.sender = j.at("sender").get<std::string>();
  e.payload = j.contains("payload") ? j.at("payload") : json(nullptr);
}

std::string encode_line(const Envelope & e)
{
  std::string line = json(e).dump();
  line.push_back('\n');
  return line;
}

Envelope decode_line(std::string_view line)
{
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  try {
    return json::parse(line).get<Envelope>();
  } catch (const json::exception & e) {
    throw BusError(BusErrorKind::Protocol, std::string("malformed envelope: ") + e.what());
  }
}

std::vector<Envelope> filter_topic(const std::vector<Envelope> & messages, std::string_view topic)
{
  std::vector<Envelope> out;
  std::copy_if(messages.begin(), messages.end(), std::back_inserter(out), [&](const Envelope & e) {
    return e.topic == topic;
  });
  return out;
}

bool is_reserved(std::string_view topic) { return topic.starts_with(topics::kReservedPrefix); }

}  // namespace twinloop::bus
