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

#ifndef WBPOSE_REPR_AUDIT_H_
#define WBPOSE_REPR_AUDIT_H_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Geometry>

#include "wbpose/pose_repr.h"

namespace wbpose {

// Continuity audit of the orientation deltas along sampled rotation paths.
// Odd-numbered paths pass through pitch = +-pi/2 half-way between two samples.
struct AuditOptions {
  int num_paths = 1000;
  double ds = 1e-3;
  std::uint64_t seed = 0;
  double jump_threshold = 0.5;  // payload step counted as a jump
};

struct PathStats {
  bool crossing = false;
  double path_angle = 0.0;  // total rotation swept, rad
  // Indexed by PoseReprKind.
  std::array<double, 4> max_step{};
  std::array<double, 4> max_ratio{};  // max step / dtheta
  std::array<int, 4> jumps{};
  double aligned_quaternion_max_ratio = 0.0;
};

struct AuditReport {
  std::vector<PathStats> paths;
  int crossing_paths = 0;
  int crossing_with_euler_jump = 0;  // max Euler step > pi/2
  // Empirical Lipschitz constants over all paths.
  double fitted_keypoint = 0.0;
  double fitted_six_d = 0.0;
  double fitted_c = 0.0;        // max of the two
  double crossing_ratio = 0.0;  // max keypoint / 6D ratio on crossing paths
  double bound_keypoint = 0.0;  // analytic Lipschitz bounds
  double bound_six_d = 0.0;
  std::array<int, 4> paths_with_jump{};
};

// Rotation at fraction s of path `i`; exposed for tests.
struct RotationPath {
  bool crossing = false;
  Eigen::Quaterniond start = Eigen::Quaterniond::Identity();
  Eigen::Quaterniond end = Eigen::Quaterniond::Identity();
  // Crossing paths: R(s) = exp((s - s_star) * rate * axis) * mid.
  Eigen::Matrix3d mid = Eigen::Matrix3d::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double rate = 0.0;
  double s_star = 0.5;

  Eigen::Quaterniond At(double s) const;
};

RotationPath MakeAuditPath(int index, const AuditOptions& options);

AuditReport RunContinuityAudit(const AuditOptions& options);

// Lipschitz bound of the keypoint payload with respect to rotation angle.
double KeypointLipschitzBound();

}  // namespace wbpose

#endif  // WBPOSE_REPR_AUDIT_H_
