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

#include "wbpose/repr_audit.h"

#include <algorithm>
#include <cmath>

#include "wbpose/common.h"

namespace wbpose {

namespace {

Eigen::Quaterniond RandomQuaternion(Rng& rng) {
  const double u1 = rng.Uniform();
  const double u2 = rng.Uniform(0.0, 2.0 * kPi);
  const double u3 = rng.Uniform(0.0, 2.0 * kPi);
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return Eigen::Quaterniond(a * std::cos(u2), a * std::sin(u2), b * std::cos(u3),
                            b * std::sin(u3));
}

Eigen::Vector3d RandomUnit(Rng& rng) {
  const double z = rng.Uniform(-1.0, 1.0);
  const double phi = rng.Uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(1.0 - z * z);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

constexpr int kKinds = 4;

}  // namespace

double KeypointLipschitzBound() {
  double sum = 0.0;
  for (const auto& v : CanonicalKeypointVertices()) {
    sum += (0.5 * kKeypointCubeSide * v).squaredNorm();
  }
  return std::sqrt(sum);
}

Eigen::Quaterniond RotationPath::At(double s) const {
  if (!crossing) return start.slerp(s, end);
  return Eigen::Quaterniond(
      Eigen::AngleAxisd((s - s_star) * rate, axis).toRotationMatrix() * mid);
}

RotationPath MakeAuditPath(int index, const AuditOptions& opt) {
  Rng rng = Rng(opt.seed).Split("repr_audit").Split(static_cast<std::uint64_t>(index));
  RotationPath p;
  p.crossing = index % 2 == 1;
  if (!p.crossing) {
    p.start = RandomQuaternion(rng);
    p.end = RandomQuaternion(rng);
    return p;
  }
  // Mid-point rotation with its x axis on +-z: pitch is exactly +-pi/2.
  const double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
  const double psi = rng.Uniform(-kPi, kPi);
  const Eigen::Vector3d x(0.0, 0.0, sign);
  const Eigen::Vector3d y(std::cos(psi), std::sin(psi), 0.0);
  p.mid << x, y, x.cross(y);
  do {
    p.axis = RandomUnit(rng);
  } while (std::abs(p.axis.z()) > 0.9);
  p.rate = rng.Uniform(0.5, 2.0);
  p.s_star = 0.5 + 0.5 * opt.ds;
  return p;
}

AuditReport RunContinuityAudit(const AuditOptions& opt) {
  if (opt.num_paths < 1 || !(opt.ds > 0.0) || opt.ds > 0.5) {
    throw ValidationError("audit: need num_paths >= 1 and ds in (0, 0.5]");
  }
  const int n = static_cast<int>(std::lround(1.0 / opt.ds));
  const SE3Pose reference = SE3Pose::Identity();
  AuditReport rep;
  rep.bound_keypoint = KeypointLipschitzBound();
  rep.bound_six_d = std::sqrt(2.0);

  for (int i = 0; i < opt.num_paths; ++i) {
    const RotationPath path = MakeAuditPath(i, opt);
    PathStats st;
    st.crossing = path.crossing;
    Eigen::Quaterniond prev_q = path.At(0.0);
    std::array<Eigen::VectorXd, kKinds> prev;
    for (int k = 0; k < kKinds; ++k) {
      prev[k] = EncodeDelta(static_cast<PoseReprKind>(k), reference,
                            SE3Pose(Eigen::Vector3d::Zero(), prev_q))
                    .payload;
    }
    Eigen::Vector4d prev_aligned(prev_q.w(), prev_q.x(), prev_q.y(), prev_q.z());
    for (int j = 1; j <= n; ++j) {
      const Eigen::Quaterniond q = path.At(std::min(1.0, j * opt.ds));
      const double dtheta = QuaternionAngle(prev_q.conjugate() * q);
      st.path_angle += dtheta;
      const SE3Pose cmd(Eigen::Vector3d::Zero(), q);
      for (int k = 0; k < kKinds; ++k) {
        Eigen::VectorXd cur = EncodeDelta(static_cast<PoseReprKind>(k), reference, cmd).payload;
        const double step = (cur - prev[k]).norm();
        st.max_step[k] = std::max(st.max_step[k], step);
        if (dtheta > 0.0) st.max_ratio[k] = std::max(st.max_ratio[k], step / dtheta);
        if (step > opt.jump_threshold) st.jumps[k]++;
        prev[k] = std::move(cur);
      }
      // Quaternion kept on the hemisphere of its predecessor.
      Eigen::Vector4d aligned(q.w(), q.x(), q.y(), q.z());
      if (aligned.dot(prev_aligned) < 0.0) aligned = -aligned;
      if (dtheta > 0.0) {
        st.aligned_quaternion_max_ratio =
            std::max(st.aligned_quaternion_max_ratio, (aligned - prev_aligned).norm() / dtheta);
      }
      prev_aligned = aligned;
      prev_q = q;
    }
    const int kp = static_cast<int>(PoseReprKind::kKeypoint);
    const int sd = static_cast<int>(PoseReprKind::kSixD);
    const int eu = static_cast<int>(PoseReprKind::kEuler);
    if (st.crossing) {
      rep.crossing_paths++;
      if (st.max_step[eu] > kPi / 2) rep.crossing_with_euler_jump++;
      rep.crossing_ratio = std::max({rep.crossing_ratio, st.max_ratio[kp], st.max_ratio[sd]});
    }
    rep.fitted_keypoint = std::max(rep.fitted_keypoint, st.max_ratio[kp]);
    rep.fitted_six_d = std::max(rep.fitted_six_d, st.max_ratio[sd]);
    for (int k = 0; k < kKinds; ++k) {
      if (st.jumps[k] > 0) rep.paths_with_jump[k]++;
    }
    rep.paths.push_back(st);
  }
  rep.fitted_c = std::max(rep.fitted_keypoint, rep.fitted_six_d);
  return rep;
}

}  // namespace wbpose
