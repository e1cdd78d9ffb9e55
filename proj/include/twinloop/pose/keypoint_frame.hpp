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

#ifndef TWINLOOP__POSE__KEYPOINT_FRAME_HPP_
#define TWINLOOP__POSE__KEYPOINT_FRAME_HPP_

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::pose
{

inline constexpr std::size_t kKeypointCount = 33;
inline constexpr double kUnitQuaternionTolerance = 1e-6;

struct Vec3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

/// Rotation as (w, x, y, z); serialized in that order.
struct Quaternion
{
  double w{1.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  double norm() const;
  friend bool operator==(const Quaternion &, const Quaternion &) = default;
};

struct Keypoint
{
  std::string name;
  Vec3 position;
  Quaternion orientation;

  friend bool operator==(const Keypoint &, const Keypoint &) = default;
};

struct KeypointFrame
{
  std::uint64_t tick{0};
  std::vector<Keypoint> keypoints;

  friend bool operator==(const KeypointFrame &, const KeypointFrame &) = default;
};

enum class PoseErrorKind {
  MalformedJson,
  InvalidField,
  WrongKeypointCount,
  DuplicateName,
  NonUnitQuaternion,
  AbsentKeypoint,
  UnorderedWindow,
  WindowTooShort,
};

std::string_view to_string(PoseErrorKind kind);

class PoseError : public std::runtime_error
{
public:
  PoseError(PoseErrorKind kind, const std::string & message)
  : std::runtime_error(message), kind_(kind)
  {
  }
  PoseErrorKind kind() const { return kind_; }

private:
  PoseErrorKind kind_;
};

/// The 33 BlazePose GHUM landmark names in landmark-index order.
const std::vector<std::string> & blazepose_keypoint_names();

/// Reads a JSON array of landmark names (e.g. data/blazepose_keypoints.json).
std::vector<std::string> load_keypoint_names(const std::filesystem::path & path);

/// Checks count, name uniqueness and unit-norm orientations.
void validate(const KeypointFrame & frame);

/**
 * @brief parse one pose frame
 *
 * Schema: {"tick": n, "keypoints": [{"name": s, "position": [x, y, z],
 * "orientation": [w, x, y, z]}, ...]}. Unknown extra fields are ignored.
 *
 * @throws PoseError with a distinct kind per failure
 */
KeypointFrame parse_keypoint_frame(std::string_view utf8_json);
KeypointFrame keypoint_frame_from_json(const nlohmann::json & j);

nlohmann::json keypoint_frame_to_json(const KeypointFrame & frame);
std::string serialize_keypoint_frame(const KeypointFrame & frame);

}  // namespace twinloop::pose

#endif  // TWINLOOP__POSE__KEYPOINT_FRAME_HPP_
