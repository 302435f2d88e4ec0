// Copyright 2026 The wbpose Authors.
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

#include "wbpose/collision.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "wbpose/terrain.h"

namespace wbpose {

// Closest points of two segments, following Ericson, "Real-Time Collision
// Detection", 5.1.9.
double SegmentDistance(const Segment& s1, const Segment& s2) {
  constexpr double kEps = 1e-14;
  const Eigen::Vector3d d1 = s1.b - s1.a;
  const Eigen::Vector3d d2 = s2.b - s2.a;
  const Eigen::Vector3d r = s1.a - s2.a;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= kEps && e <= kEps) {
    return r.norm();
  }
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((s1.a + d1 * s) - (s2.a + d2 * t)).norm();
}

Segment PrimitiveSegment(const CollisionPrimitive& prim,
                         const std::vector<Eigen::Isometry3d>& transforms) {
  const Eigen::Isometry3d& t = transforms[prim.link];
  const Eigen::Vector3d c = t * prim.offset;
  const Eigen::Vector3d h = t.linear() * (prim.axis * prim.half_length);
  return {c - h, c + h};
}

CollisionReport SelfCollision(const RobotModel& model,
                              const std::vector<Eigen::Isometry3d>& transforms,
                              double inflation) {
  const auto& prims = model.collision_primitives();
  std::vector<Segment> segments;
  segments.reserve(prims.size());
  for (const auto& p : prims) segments.push_back(PrimitiveSegment(p, transforms));

  std::map<std::pair<int, int>, double> deepest;
  for (const auto& [i, j] : model.candidate_pairs()) {
    const double reach = prims[i].radius + prims[j].radius + 2.0 * inflation;
    const double dist = SegmentDistance(segments[i], segments[j]);
    if (dist < reach) {
      const std::pair<int, int> key{std::min(prims[i].link, prims[j].link),
                                    std::max(prims[i].link, prims[j].link)};
      double& depth = deepest[key];
      depth = std::max(depth, reach - dist);
    }
  }
  CollisionReport report;
  for (const auto& [key, depth] : deepest) {
    report.pairs.push_back({key.first, key.second, depth});
  }
  report.colliding = !report.pairs.empty();
  return report;
}

CollisionReport SelfCollision(const RobotModel& model, const SE3Pose& base,
                              const JointVector& q, double inflation) {
  return SelfCollision(model, LinkTransforms(model, base.ToIsometry(), q),
                       inflation);
}

bool TerrainClearance(const SE3Pose& pose, const CoarseHeightMap& coarse_map,
                      double margin) {
  const Eigen::Vector3d& p = pose.position();
  return p.z() >= coarse_map.HeightAt(p.x(), p.y()) + margin;
}

}  // namespace wbpose
