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

#ifndef TWINLOOP__POSE__AVATAR_HPP_
#define TWINLOOP__POSE__AVATAR_HPP_

#include "twinloop/pose/keypoint_frame.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace twinloop::pose
{

/// Drives avatar bone `bone` from keypoint `keypoint`.
struct BoneBinding
{
  std::string bone;
  std::string keypoint;
  bool optional{false};
};

struct BoneTransform
{
  std::string bone;
  Vec3 position;
  Quaternion orientation;

  friend bool operator==(const BoneTransform &, const BoneTransform &) = default;
};

/**
 * @brief copy keypoint transforms onto avatar bones, in skeleton order
 *
 * An optional binding whose keypoint is missing resolves to the identity transform.
 * @throws PoseError(AbsentKeypoint) when a required binding names a missing keypoint
 */
std::vector<BoneTransform> map_to_avatar(
  const KeypointFrame & frame, std::span<const BoneBinding> skeleton);

/// Skeleton given as bone names equal to keypoint names; every bone is required.
std::vector<BoneTransform> map_to_avatar(
  const KeypointFrame & frame, std::span<const std::string> skeleton);

nlohmann::json bones_to_json(std::span<const BoneTransform> bones);

}  // namespace twinloop::pose

#endif  // TWINLOOP__POSE__AVATAR_HPP_
