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

#ifndef TWINLOOP__WORLD__OCCLUSION_HPP_
#define TWINLOOP__WORLD__OCCLUSION_HPP_

#include "twinloop/world/types.hpp"

#include <optional>
#include <span>
#include <utility>

namespace twinloop::world
{

/**
 * @brief clip the segment a->b against an axis-aligned rectangle (slab method)
 * @return parameter interval [t_enter, t_exit] within [0, 1] where the segment is inside the
 * closed rectangle, or nullopt when the segment misses it
 */
std::optional<std::pair<double, double>> clip_segment(Vec2 a, Vec2 b, const Obstacle & box);

/// True when the segment a->b passes through the rectangle over a non-zero length.
bool segment_intersects(Vec2 a, Vec2 b, const Obstacle & box);

/// True iff the segment observer->target crosses no obstacle. Symmetric in its endpoints.
bool line_of_sight(Vec2 observer, Vec2 target, std::span<const Obstacle> obstacles);

bool contains(const Obstacle & box, Vec2 point);

}  // namespace twinloop::world

#endif  // TWINLOOP__WORLD__OCCLUSION_HPP_
