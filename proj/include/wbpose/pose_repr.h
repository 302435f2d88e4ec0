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

#ifndef WBPOSE_POSE_REPR_H_
#define WBPOSE_POSE_REPR_H_

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "wbpose/se3.h"

namespace wbpose {

// Side length of the keypoint cube.
inline constexpr double kKeypointCubeSide = 0.3;

// Cube vertices (+,+,+), (+,-,-), (-,+,-): pairwise face diagonals, so the
// three points form an equilateral triangle of side s * sqrt(2).
const std::array<Eigen::Vector3d, 3>& CanonicalKeypointVertices();

struct KeypointTriple {
  std::array<Eigen::Vector3d, 3> points;

  const Eigen::Vector3d& operator[](int i) const { return points[i]; }
  Eigen::Vector3d& operator[](int i) { return points[i]; }
  Eigen::Matrix<double, 9, 1> Flatten() const;
};

enum class PoseReprKind { kKeypoint, kQuaternion, kEuler, kSixD };

std::string_view PoseReprKindName(PoseReprKind kind);
PoseReprKind ParsePoseReprKind(std::string_view name);
int PayloadSize(PoseReprKind kind);

struct PoseDelta {
  PoseReprKind kind = PoseReprKind::kKeypoint;
  Eigen::VectorXd payload;
};

KeypointTriple KeypointsOf(const SE3Pose& pose);

// Orthogonal Procrustes fit of the canonical vertices to `kp`. Throws
// ValidationError when the points are not a rigid image of the canonical
// triple within `tolerance` (meters).
SE3Pose PoseFromKeypoints(const KeypointTriple& kp, double tolerance = 1e-6);

// Intrinsic Z-Y-X angles returned as (roll, pitch, yaw); pitch in
// [-pi/2, pi/2], roll and yaw in (-pi, pi].
Eigen::Vector3d EulerZyx(const Eigen::Matrix3d& rotation);

// First two rotation columns stacked (x axis then y axis).
Eigen::Matrix<double, 6, 1> SixDOf(const Eigen::Matrix3d& rotation);
// Gram-Schmidt reconstruction from a (possibly non-orthonormal) 6D vector.
Eigen::Matrix3d RotationFromSixD(const Eigen::Matrix<double, 6, 1>& six_d);

// Wraps to (-pi, pi].
double WrapAngle(double angle);

// Absolute orientation encoding of each representation and its inverse.
// Keypoint encodes the cube vertices at the origin.
Eigen::VectorXd EncodeOrientation(PoseReprKind kind,
                                  const Eigen::Quaterniond& q);
Eigen::Quaterniond DecodeOrientation(PoseReprKind kind,
                                     const Eigen::VectorXd& encoding);

// Command-relative-to-measured delta in each representation:
//   keypoint:   k_cmd - k_meas for the three keypoints (9)
//   quaternion: p_cmd - p_meas, q_cmd * q_meas^-1 on w >= 0 (3 + 4)
//   euler:      p_cmd - p_meas, wrapped Z-Y-X angle differences (3 + 3)
//   six_d:      p_cmd - p_meas, difference of 6D encodings (3 + 6)
PoseDelta EncodeDelta(PoseReprKind kind, const SE3Pose& measured,
                      const SE3Pose& command);

struct PoseErrors {
  double position = 0.0;     // meters
  double orientation = 0.0;  // degrees, [0, 180]
};

PoseErrors ComputePoseErrors(const SE3Pose& measured, const SE3Pose& command);

}  // namespace wbpose

#endif  // WBPOSE_POSE_REPR_H_
