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

#include "wbpose/pose_repr.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/SVD>

#include "wbpose/common.h"

namespace wbpose {

const std::array<Eigen::Vector3d, 3>& CanonicalKeypointVertices() {
  static const std::array<Eigen::Vector3d, 3> kVertices = {
      Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1),
      Eigen::Vector3d(-1, 1, -1)};
  return kVertices;
}

Eigen::Matrix<double, 9, 1> KeypointTriple::Flatten() const {
  Eigen::Matrix<double, 9, 1> out;
  for (int i = 0; i < 3; ++i) out.segment<3>(3 * i) = points[i];
  return out;
}

std::string_view PoseReprKindName(PoseReprKind kind) {
  switch (kind) {
    case PoseReprKind::kKeypoint:
      return "keypoint";
    case PoseReprKind::kQuaternion:
      return "quaternion";
    case PoseReprKind::kEuler:
      return "euler";
    case PoseReprKind::kSixD:
      return "six_d";
  }
  return "unknown";
}

PoseReprKind ParsePoseReprKind(std::string_view name) {
  if (name == "keypoint") return PoseReprKind::kKeypoint;
  if (name == "quaternion") return PoseReprKind::kQuaternion;
  if (name == "euler") return PoseReprKind::kEuler;
  if (name == "six_d") return PoseReprKind::kSixD;
  throw ValidationError("unknown pose representation '" + std::string(name) + "'");
}

int PayloadSize(PoseReprKind kind) {
  switch (kind) {
    case PoseReprKind::kKeypoint:
      return 9;
    case PoseReprKind::kQuaternion:
      return 7;
    case PoseReprKind::kEuler:
      return 6;
    case PoseReprKind::kSixD:
      return 9;
  }
  return 0;
}

KeypointTriple KeypointsOf(const SE3Pose& pose) {
  const Eigen::Matrix3d r = pose.rotation();
  KeypointTriple kp;
  for (int i = 0; i < 3; ++i) {
    kp[i] = pose.position() +
            r * (0.5 * kKeypointCubeSide * CanonicalKeypointVertices()[i]);
  }
  return kp;
}

SE3Pose PoseFromKeypoints(const KeypointTriple& kp, double tolerance) {
  std::array<Eigen::Vector3d, 3> local;
  for (int i = 0; i < 3; ++i) {
    local[i] = 0.5 * kKeypointCubeSide * CanonicalKeypointVertices()[i];
  }
  double max_dev = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double dev = std::abs((kp[i] - kp[j]).norm() - (local[i] - local[j]).norm());
      max_dev = std::max(max_dev, dev);
    }
  }
  const double area2 = (kp[1] - kp[0]).cross(kp[2] - kp[0]).norm();
  if (max_dev > tolerance || area2 < 1e-9) {
    std::ostringstream os;
    os << "keypoints are not a rigid cube triple: max pairwise-distance deviation "
       << max_dev << " m";
    if (area2 < 1e-9) os << " (points are collinear)";
    throw ValidationError(os.str());
  }

  const Eigen::Vector3d local_c = (local[0] + local[1] + local[2]) / 3.0;
  const Eigen::Vector3d world_c = (kp[0] + kp[1] + kp[2]) / 3.0;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    h += (local[i] - local_c) * (kp[i] - world_c).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  return SE3Pose(world_c - r * local_c, r);
}

Eigen::Vector3d EulerZyx(const Eigen::Matrix3d& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = WrapAngle(std::atan2(r(2, 1), r(2, 2)));
  const double yaw = WrapAngle(std::atan2(r(1, 0), r(0, 0)));
  return {roll, pitch, yaw};
}

Eigen::Matrix<double, 6, 1> SixDOf(const Eigen::Matrix3d& r) {
  Eigen::Matrix<double, 6, 1> out;
  out << r.col(0), r.col(1);
  return out;
}

Eigen::Matrix3d RotationFromSixD(const Eigen::Matrix<double, 6, 1>& six_d) {
  const Eigen::Vector3d a = six_d.head<3>();
  const Eigen::Vector3d b = six_d.tail<3>();
  const Eigen::Vector3d x = a.normalized();
  const Eigen::Vector3d y = (b - x.dot(b) * x).normalized();
  Eigen::Matrix3d r;
  r << x, y, x.cross(y);
  return r;
}

double WrapAngle(double angle) {
  double r = std::fmod(angle + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  r -= kPi;
  return r == -kPi ? kPi : r;
}

Eigen::VectorXd EncodeOrientation(PoseReprKind kind,
                                  const Eigen::Quaterniond& q) {
  const Eigen::Quaterniond c = CanonicalQuaternion(q);
  switch (kind) {
    case PoseReprKind::kKeypoint:
      return KeypointsOf(SE3Pose(Eigen::Vector3d::Zero(), c)).Flatten();
    case PoseReprKind::kQuaternion:
      return Eigen::Vector4d(c.w(), c.x(), c.y(), c.z());
    case PoseReprKind::kEuler:
      return EulerZyx(c.toRotationMatrix());
    case PoseReprKind::kSixD:
      return SixDOf(c.toRotationMatrix());
  }
  return {};
}

Eigen::Quaterniond DecodeOrientation(PoseReprKind kind,
                                     const Eigen::VectorXd& e) {
  switch (kind) {
    case PoseReprKind::kKeypoint: {
      KeypointTriple kp;
      for (int i = 0; i < 3; ++i) kp[i] = e.segment<3>(3 * i);
      return PoseFromKeypoints(kp).orientation();
    }
    case PoseReprKind::kQuaternion:
      return CanonicalQuaternion(Eigen::Quaterniond(e[0], e[1], e[2], e[3]));
    case PoseReprKind::kEuler:
      return CanonicalQuaternion(Eigen::Quaterniond(RotationFromRpy(e[0], e[1], e[2])));
    case PoseReprKind::kSixD:
      return CanonicalQuaternion(
          Eigen::Quaterniond(RotationFromSixD(Eigen::Matrix<double, 6, 1>(e))));
  }
  return Eigen::Quaterniond::Identity();
}

PoseDelta EncodeDelta(PoseReprKind kind, const SE3Pose& measured,
                      const SE3Pose& command) {
  PoseDelta delta;
  delta.kind = kind;
  delta.payload.resize(PayloadSize(kind));
  const Eigen::Vector3d dp = command.position() - measured.position();
  switch (kind) {
    case PoseReprKind::kKeypoint: {
      const KeypointTriple km = KeypointsOf(measured);
      const KeypointTriple kc = KeypointsOf(command);
      for (int i = 0; i < 3; ++i) delta.payload.segment<3>(3 * i) = kc[i] - km[i];
      break;
    }
    case PoseReprKind::kQuaternion: {
      const Eigen::Quaterniond dq = CanonicalQuaternion(
          command.orientation() * measured.orientation().conjugate());
      delta.payload << dp, dq.w(), dq.x(), dq.y(), dq.z();
      break;
    }
    case PoseReprKind::kEuler: {
      const Eigen::Vector3d em = EulerZyx(measured.rotation());
      const Eigen::Vector3d ec = EulerZyx(command.rotation());
      delta.payload << dp, WrapAngle(ec[0] - em[0]), WrapAngle(ec[1] - em[1]),
          WrapAngle(ec[2] - em[2]);
      break;
    }
    case PoseReprKind::kSixD:
      delta.payload << dp, SixDOf(command.rotation()) - SixDOf(measured.rotation());
      break;
  }
  return delta;
}

PoseErrors ComputePoseErrors(const SE3Pose& measured, const SE3Pose& command) {
  PoseErrors e;
  e.position = (command.position() - measured.position()).norm();
  e.orientation = RadToDeg(
      QuaternionAngle(measured.orientation().conjugate() * command.orientation()));
  return e;
}

}  // namespace wbpose
