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

#include "twinloop/pose/avatar.hpp"

#include <algorithm>
#include <unordered_map>

namespace twinloop::pose
{

std::vector<BoneTransform> map_to_avatar(
  const KeypointFrame & frame, std::span<const BoneBinding> skeleton)
{
  std::unordered_map<std::string_view, const Keypoint *> by_name;
  for (const auto & kp : frame.keypoints) {
    by_name.emplace(kp.name, &kp);
  }
  std::vector<BoneTransform> bones;
  bones.reserve(skeleton.size());
  for (const auto & binding : skeleton) {
    const auto it = by_name.find(binding.keypoint);
    if (it == by_name.end()) {
      if (!binding.optional) {
        throw PoseError(
          PoseErrorKind::AbsentKeypoint,
          "bone '" + binding.bone + "' needs absent keypoint '" + binding.keypoint + "'");
      }
      bones.push_back(BoneTransform{binding.bone, Vec3{}, Quaternion{}});
      continue;
    }
    bones.push_back(BoneTransform{binding.bone, it->second->position, it->second->orientation});
  }
  return bones;
}

std::vector<BoneTransform> map_to_avatar(
  const KeypointFrame & frame, std::span<const std::string> skeleton)
{
  std::vector<BoneBinding> bindings;
  bindings.reserve(skeleton.size());
  std::transform(skeleton.begin(), skeleton.end(), std::back_inserter(bindings), [](const auto & name) {
    return BoneBinding{name, name, false};
  });
  return map_to_avatar(frame, std::span<const BoneBinding>(bindings));
}

nlohmann::json bones_to_json(std::span<const BoneTransform> bones)
{
  nlohmann::json out = nlohmann::json::array();
  for (const auto & b : bones) {
    out.push_back({
      {"bone", b.bone},
      {"position", {b.position.x, b.position.y, b.position.z}},
      {"orientation", {b.orientation.w, b.orientation.x, b.orientation.y, b.orientation.z}},
    });
  }
  return out;
}

}  // namespace twinloop::pose
