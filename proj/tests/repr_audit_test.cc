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

#include <gtest/gtest.h>

#include "wbpose/common.h"

namespace wbpose {
namespace {

constexpr int kKp = static_cast<int>(PoseReprKind::kKeypoint);
constexpr int kQuat = static_cast<int>(PoseReprKind::kQuaternion);
constexpr int kEul = static_cast<int>(PoseReprKind::kEuler);
constexpr int kSix = static_cast<int>(PoseReprKind::kSixD);

const AuditReport& Report() {
  static const AuditReport r = [] {
    AuditOptions opt;
    opt.num_paths = 200;
    opt.seed = 2;
    return RunContinuityAudit(opt);
  }();
  return r;
}

TEST(ReprAudit, KeypointBoundIsRootSumOfSquaredRadii) {
  // Three vertices at half-diagonal distance s * sqrt(3) / 2 from the center.
  EXPECT_NEAR(KeypointLipschitzBound(), std::sqrt(3.0) * kKeypointCubeSide * std::sqrt(3.0) / 2,
              1e-15);
}

TEST(ReprAudit, CrossingPathsReachGimbalLock) {
  AuditOptions opt;
  for (int i = 1; i < 40; i += 2) {
    const RotationPath p = MakeAuditPath(i, opt);
    ASSERT_TRUE(p.crossing);
    const Eigen::Matrix3d r = p.At(p.s_star).toRotationMatrix();
    EXPECT_NEAR(std::abs(r(2, 0)), 1.0, 1e-12) << "path " << i;
    // The lock sits strictly between two samples.
    const double before = std::floor(p.s_star / opt.ds) * opt.ds;
    EXPECT_LT(before, p.s_star);
    EXPECT_GT(before + opt.ds, p.s_star);
  }
  EXPECT_FALSE(MakeAuditPath(0, opt).crossing);
}

TEST(ReprAudit, EulerJumpsOnEveryCrossingPath) {
  const AuditReport& r = Report();
  EXPECT_EQ(r.crossing_paths, 100);
  EXPECT_EQ(r.crossing_with_euler_jump, r.crossing_paths);
  for (const PathStats& p : r.paths) {
    if (p.crossing) EXPECT_GT(p.max_step[kEul], kPi / 2);
  }
}

TEST(ReprAudit, EulerJumpSeenIndependently) {
  // Roll and yaw of the samples straddling the lock, recomputed here.
  AuditOptions opt;
  for (int i = 1; i < 20; i += 2) {
    const RotationPath p = MakeAuditPath(i, opt);
    const double s0 = std::floor(p.s_star / opt.ds) * opt.ds;
    auto angles = [](const Eigen::Matrix3d& m) {
      return Eigen::Vector3d(std::atan2(m(2, 1), m(2, 2)), std::asin(-m(2, 0)),
                             std::atan2(m(1, 0), m(0, 0)));
    };
    const Eigen::Vector3d a = angles(p.At(s0).toRotationMatrix());
    const Eigen::Vector3d b = angles(p.At(s0 + opt.ds).toRotationMatrix());
    Eigen::Vector3d d = b - a;
    for (int k = 0; k < 3; ++k) d[k] = std::remainder(d[k], 2 * kPi);
    EXPECT_GT(d.norm(), kPi / 2) << "path " << i;
  }
}

TEST(ReprAudit, ContinuousPayloadsStayLipschitz) {
  const AuditReport& r = Report();
  EXPECT_LE(r.fitted_keypoint, r.bound_keypoint * (1 + 1e-6));
  EXPECT_LE(r.fitted_six_d, r.bound_six_d * (1 + 1e-6));
  EXPECT_EQ(r.fitted_c, std::max(r.fitted_keypoint, r.fitted_six_d));
  for (const PathStats& p : r.paths) {
    EXPECT_LE(p.max_ratio[kKp], r.fitted_c);
    EXPECT_LE(p.max_ratio[kSix], r.fitted_c);
    EXPECT_EQ(p.jumps[kKp], 0);
    EXPECT_EQ(p.jumps[kSix], 0);
  }
  // The fitted constant is attained, not just bounded.
  EXPECT_GT(r.fitted_six_d, 0.9 * r.bound_six_d);
  EXPECT_LE(r.crossing_ratio, r.fitted_c);
  EXPECT_EQ(r.paths_with_jump[kKp], 0);
  EXPECT_EQ(r.paths_with_jump[kSix], 0);
}

TEST(ReprAudit, QuaternionNeedsHemisphereAlignment) {
  const AuditReport& r = Report();
  EXPECT_GT(r.paths_with_jump[kQuat], 0);
  for (const PathStats& p : r.paths) {
    // A hemisphere-aligned unit quaternion moves by at most half the angle.
    EXPECT_LE(p.aligned_quaternion_max_ratio, 0.5 * (1 + 1e-6));
  }
}

TEST(ReprAudit, Deterministic) {
  AuditOptions opt;
  opt.num_paths = 20;
  opt.seed = 5;
  const AuditReport a = RunContinuityAudit(opt);
  const AuditReport b = RunContinuityAudit(opt);
  ASSERT_EQ(a.paths.size(), b.paths.size());
  for (size_t i = 0; i < a.paths.size(); ++i) EXPECT_EQ(a.paths[i].max_step, b.paths[i].max_step);
  EXPECT_EQ(a.fitted_c, b.fitted_c);
  opt.seed = 6;
  EXPECT_NE(RunContinuityAudit(opt).fitted_keypoint, a.fitted_keypoint);
}

TEST(ReprAudit, RejectsBadOptions) {
  AuditOptions opt;
  opt.num_paths = 0;
  EXPECT_THROW(RunContinuityAudit(opt), ValidationError);
  opt.num_paths = 1;
  opt.ds = 0.0;
  EXPECT_THROW(RunContinuityAudit(opt), ValidationError);
}

}  // namespace
}  // namespace wbpose
