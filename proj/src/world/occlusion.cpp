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

#include "twinloop/world/occlusion.hpp"

#include <algorithm>
#include <cmath>

namespace twinloop::world
{

namespace
{

// Narrows [t_min, t_max] to the parameters where origin + t * delta lies in [lo, hi].
bool clip_axis(double origin, double delta, double lo, double hi, double & t_min, double & t_max)
{
  if (delta == 0.0) {
    return origin >= lo && origin <= hi;
  }
  double t0 = (lo - origin) / delta;
  double t1 = (hi - origin) / delta;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  t_min = std::max(t_min, t0);
  t_max = std::min(t_max, t1);
  return t_min <= t_max;
}

}  // namespace

std::optional<std::pair<double, double>> clip_segment(Vec2 a, Vec2 b, const Obstacle & box)
{
  const Vec2 lo = box.center - box.half_extents;
  const Vec2 hi = box.center + box.half_extents;
  const Vec2 delta = b - a;
  double t_min = 0.0;
  double t_max = 1.0;
  if (!clip_axis(a.x, delta.x, lo.x, hi.x, t_min, t_max)) {
    return std::nullopt;
  }
  if (!clip_axis(a.y, delta.y, lo.y, hi.y, t_min, t_max)) {
    return std::nullopt;
  }
  return std::make_pair(t_min, t_max);
}

bool segment_intersects(Vec2 a, Vec2 b, const Obstacle & box)
{
  // Canonical endpoint order makes the floating-point result independent of direction.
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) {
    std::swap(a, b);
  }
  const auto clipped = clip_segment(a, b, box);
  if (!clipped) {
    return false;
  }
  // Grazing contact (a single point) does not block sight.
  return clipped->second > clipped->first;
}

bool line_of_sight(Vec2 observer, Vec2 target, std::span<const Obstacle> obstacles)
{
  return std::none_of(obstacles.begin(), obstacles.end(), [&](const Obstacle & box) {
    return segment_intersects(observer, target, box);
  });
}

bool contains(const Obstacle & box, Vec2 point)
{
  return std::abs(point.x - box.center.x) <= box.half_extents.x &&
         std::abs(point.y - box.center.y) <= box.half_extents.y;
}

}  // namespace twinloop::world
