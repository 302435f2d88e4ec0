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

#include "wbpose/se3.h"

#include <cmath>

namespace wbpose {

Eigen::Quaterniond CanonicalQuaternion(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond out = q;
  // Unit inputs are kept bit-exact so serialized poses round-trip.
  if (std::abs(out.squaredNorm() - 1.0) > 1e-15) out.normalize();
  if (out.w() < 0.0) out.coeffs() *= -1.0;
  return out;
}

double QuaternionAngle(const Eigen::Quaterniond& q) {
  const double v = q.vec().norm();
  return 2.0 * std::atan2(v, std::abs(q.w()));
}

Eigen::Matrix3d RotationFromRpy(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

SE3Pose::SE3Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& q)
    : position_(position), orientation_(CanonicalQuaternion(q)) {}

SE3Pose::SE3Pose(const Eigen::Vector3d& position,
                 const Eigen::Matrix3d& rotation)
    : position_(position),
      orientation_(CanonicalQuaternion(Eigen::Quaterniond(rotation))) {}

SE3Pose::SE3Pose(const Eigen::Isometry3d& iso)
    : SE3Pose(Eigen::Vector3d(iso.translation()),
              Eigen::Matrix3d(iso.linear())) {}

SE3Pose SE3Pose::FromXyzRpy(const Eigen::Vector3d& xyz, double roll,
                            double pitch, double yaw) {
  return SE3Pose(xyz, RotationFromRpy(roll, pitch, yaw));
}

Eigen::Isometry3d SE3Pose::ToIsometry() const {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = rotation();
  iso.translation() = position_;
  return iso;
}

SE3Pose SE3Pose::Inverse() const {
  const Eigen::Quaterniond inv = orientation_.conjugate();
  return SE3Pose(-(inv * position_), inv);
}

SE3Pose SE3Pose::operator*(const SE3Pose& rhs) const {
  return SE3Pose(position_ + orientation_ * rhs.position_,
                 orientation_ * rhs.orientation_);
}

Eigen::Vector3d SE3Pose::operator*(const Eigen::Vector3d& point) const {
  return position_ + orientation_ * point;
}

}  // namespace wbpose
