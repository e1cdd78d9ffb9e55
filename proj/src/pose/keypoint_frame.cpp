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

#include "twinloop/pose/keypoint_frame.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace twinloop::pose
{

using nlohmann::json;

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

std::string_view to_string(PoseErrorKind kind)
{
  switch (kind) {
    case PoseErrorKind::MalformedJson:
      return "malformed_json";
    case PoseErrorKind::InvalidField:
      return "invalid_field";
    case PoseErrorKind::WrongKeypointCount:
      return "wrong_keypoint_count";
    case PoseErrorKind::DuplicateName:
      return "duplicate_name";
    case PoseErrorKind::NonUnitQuaternion:
      return "non_unit_quaternion";
    case PoseErrorKind::AbsentKeypoint:
      return "absent_keypoint";
    case PoseErrorKind::UnorderedWindow:
      return "unordered_window";
    case PoseErrorKind::WindowTooShort:
      return "window_too_short";
  }
  return "invalid_field";
}

const std::vector<std::string> & blazepose_keypoint_names()
{
  static const std::vector<std::string> names = {
    "nose",           "left_eye_inner",  "left_eye",         "left_eye_outer",
    "right_eye_inner", "right_eye",      "right_eye_outer",  "left_ear",
    "right_ear",      "mouth_left",      "mouth_right",      "left_shoulder",
    "right_shoulder", "left_elbow",      "right_elbow",      "left_wrist",
    "right_wrist",    "left_pinky",      "right_pinky",      "left_index",
    "right_index",    "left_thumb",      "right_thumb",      "left_hip",
    "right_hip",      "left_knee",       "right_knee",       "left_ankle",
    "right_ankle",    "left_heel",       "right_heel",       "left_foot_index",
    "right_foot_index",
  };
  return names;
}

std::vector<std::string> load_keypoint_names(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open keypoint name list " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & e) {
    throw PoseError(PoseErrorKind::MalformedJson, path.string() + ": " + e.what());
  }
  if (!j.is_array()) {
    throw PoseError(PoseErrorKind::InvalidField, path.string() + ": expected an array of names");
  }
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto & entry : j) {
    if (!entry.is_string()) {
      throw PoseError(PoseErrorKind::InvalidField, path.string() + ": names must be strings");
    }
    if (!seen.insert(entry.get<std::string>()).second) {
      throw PoseError(PoseErrorKind::DuplicateName, path.string() + ": duplicate " + entry.dump());
    }
    names.push_back(entry.get<std::string>());
  }
  return names;
}

void validate(const KeypointFrame & frame)
{
  if (frame.keypoints.size() != kKeypointCount) {
    throw PoseError(
      PoseErrorKind::WrongKeypointCount, "expected 33 keypoints, got " +
                                           std::to_string(frame.keypoints.size()));
  }
  std::set<std::string_view> names;
  for (const auto & kp : frame.keypoints) {
    if (!names.insert(kp.name).second) {
      throw PoseError(PoseErrorKind::DuplicateName, "duplicate keypoint name '" + kp.name + "'");
    }
    const auto & q = kp.orientation;
    const auto & p = kp.position;
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw PoseError(PoseErrorKind::InvalidField, "non-finite position for '" + kp.name + "'");
    }
    if (!(std::abs(q.norm() - 1.0) <= kUnitQuaternionTolerance)) {
      throw PoseError(
        PoseErrorKind::NonUnitQuaternion, "orientation of '" + kp.name + "' is not unit-norm");
    }
  }
}

namespace
{

const json & field(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    throw PoseError(PoseErrorKind::InvalidField, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::vector<double> numbers(const json & j, std::size_t count, const char * what)
{
  if (!j.is_array() || j.size() != count) {
    throw PoseError(
      PoseErrorKind::InvalidField,
      std::string(what) + " must be an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  for (const auto & v : j) {
    if (!v.is_number()) {
      throw PoseError(PoseErrorKind::InvalidField, std::string(what) + " must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

KeypointFrame keypoint_frame_from_json(const json & j)
{
  if (!j.is_object()) {
    throw PoseError(PoseErrorKind::InvalidField, "frame must be a JSON object");
  }
  KeypointFrame frame;
  const auto & tick = field(j, "tick");
  if (!tick.is_number_unsigned() && !(tick.is_number_integer() && tick.get<std::int64_t>() >= 0)) {
    throw PoseError(PoseErrorKind::InvalidField, "tick must be a non-negative integer");
  }
  frame.tick = tick.get<std::uint64_t>();
  const auto & keypoints = field(j, "keypoints");
  if (!keypoints.is_array()) {
    throw PoseError(PoseErrorKind::InvalidField, "keypoints must be an array");
  }
  frame.keypoints.reserve(keypoints.size());
  for (const auto & entry : keypoints) {
    if (!entry.is_object()) {
      throw PoseError(PoseErrorKind::InvalidField, "keypoint entries must be objects");
    }
    const auto & name = field(entry, "name");
    if (!name.is_string()) {
      throw PoseError(PoseErrorKind::InvalidField, "keypoint name must be a string");
    }
    const auto p = numbers(field(entry, "position"), 3, "position");
    const auto q = numbers(field(entry, "orientation"), 4, "orientation");
    frame.keypoints.push_back(
      Keypoint{name.get<std::string>(), Vec3{p[0], p[1], p[2]}, Quaternion{q[0], q[1], q[2], q[3]}});
  }
  validate(frame);
  return frame;
}

KeypointFrame parse_keypoint_frame(std::string_view utf8_json)
{
  json j;
  try {
    j = json::parse(utf8_json);
  } catch (const json::exception & e) {
    throw PoseError(PoseErrorKind::MalformedJson, e.what());
  }
  return keypoint_frame_from_json(j);
}

json keypoint_frame_to_json(const KeypointFrame & frame)
{
  json keypoints = json::array();
  for (const auto & kp : frame.keypoints) {
    keypoints.push_back(json{
      {"name", kp.name},
      {"position", {kp.position.x, kp.position.y, kp.position.z}},
      {"orientation", {kp.orientation.w, kp.orientation.x, kp.orientation.y, kp.orientation.z}},
    });
  }
  return json{{"tick", frame.tick}, {"keypoints", std::move(keypoints)}};
}

std::string serialize_keypoint_frame(const KeypointFrame & frame)
{
  return keypoint_frame_to_json(frame).dump();
}

}  // namespace twinloop::pose
