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

#ifndef WBPOSE_SE3_H_
#define WBPOSE_SE3_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wbpose {

// Rigid transform with a unit quaternion stored scalar-first and kept on the
// w >= 0 hemisphere. Every constructor normalizes, so two SE3Pose values that
// describe the same rotation compare equal component-wise.
class SE3Pose {
 public:
  SE3Pose() : position_(Eigen::Vector3d::Zero()), orientation_(1, 0, 0, 0) {}
  SE3Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& q);
  SE3Pose(const Eigen::Vector3d& position, const Eigen::Matrix3d& rotation);
  explicit SE3Pose(const Eigen::Isometry3d& iso);

  static SE3Pose Identity() { return SE3Pose(); }
  static SE3Pose Translation(const Eigen::Vector3d& t) {
    return SE3Pose(t, Eigen::Quaterniond::Identity());
  }
  // Intrinsic Z-Y-X (yaw, pitch, roll).
  static SE3Pose FromXyzRpy(const Eigen::Vector3d& xyz, double roll,
                            double pitch, double yaw);

  const Eigen::Vector3d& position() const { return position_; }
  const Eigen::Quaterniond& orientation() const { return orientation_; }
  Eigen::Matrix3d rotation() const { return orientation_.toRotationMatrix(); }
  Eigen::Isometry3d ToIsometry() const;

  SE3Pose Inverse() const;
  SE3Pose operator*(const SE3Pose& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& point) const;

 private:
  Eigen::Vector3d position_;
  Eigen::Quaterniond orientation_;
};

// Positive-hemisphere normalized copy of `q`.
Eigen::Quaterniond CanonicalQuaternion(const Eigen::Quaterniond& q);

// Rotation angle of `q` in [0, pi].
double QuaternionAngle(const Eigen::Quaterniond& q);

// Rotation matrix for intrinsic Z-Y-X Euler angles.
Eigen::Matrix3d RotationFromRpy(double roll, double pitch, double yaw);

}  // namespace wbpose

#endif  // WBPOSE_SE3_H_
