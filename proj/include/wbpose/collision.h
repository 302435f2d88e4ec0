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

#ifndef WBPOSE_COLLISION_H_
#define WBPOSE_COLLISION_H_

#include <vector>

#include <Eigen/Core>

#include "wbpose/robot_model.h"
#include "wbpose/se3.h"

namespace wbpose {

class CoarseHeightMap;

struct CollidingPair {
  int link_a = -1;
  int link_b = -1;
  double penetration = 0.0;  // meters, > 0
};

struct CollisionReport {
  bool colliding = false;
  std::vector<CollidingPair> pairs;  // one entry per link pair, deepest overlap
};

struct Segment {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
};

// Closest distance between two segments (degenerate segments allowed).
double SegmentDistance(const Segment& s1, const Segment& s2);

// World-frame axis segment of a primitive.
Segment PrimitiveSegment(const CollisionPrimitive& prim,
                         const std::vector<Eigen::Isometry3d>& transforms);

// Tests every non-excluded primitive pair. `inflation` is added to every
// radius (used to probe monotonicity).
CollisionReport SelfCollision(const RobotModel& model, const SE3Pose& base,
                              const JointVector& q, double inflation = 0.0);
CollisionReport SelfCollision(const RobotModel& model,
                              const std::vector<Eigen::Isometry3d>& transforms,
                              double inflation = 0.0);

// Inclusive clearance test: pose.z >= coarse height at (x, y) + margin.
// Throws ValidationError when (x, y) lies outside the map.
bool TerrainClearance(const SE3Pose& pose, const CoarseHeightMap& coarse_map,
                      double margin);

inline constexpr double kCommandTerrainMargin = 0.08;

}  // namespace wbpose

#endif  // WBPOSE_COLLISION_H_
