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

#include "wbpose/robot_model.h"

#include <map>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_util.h"
#include "wbpose/io.h"

namespace wbpose {
namespace {

using nlohmann::json;
using testing::Robot;

// Independent oracle: walks the description JSON and multiplies plain 4x4
// homogeneous matrices, without touching the library's parser or FK.
class MatrixChainOracle {
 public:
  explicit MatrixChainOracle(const json& d) : d_(d) {
    for (size_t i = 0; i < d["limits"].size(); ++i) {
      index_[d["limits"][i]["joint"].get<std::string>()] = static_cast<int>(i);
    }
    for (const auto& j : d["joints"]) joints_[j["name"].get<std::string>()] = j;
  }

  static Eigen::Matrix4d Rot(const Eigen::Vector3d& axis_in, double a) {
    const Eigen::Vector3d k = axis_in / axis_in.norm();
    Eigen::Matrix3d kx;
    kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() =
        Eigen::Matrix3d::Identity() + std::sin(a) * kx + (1 - std::cos(a)) * kx * kx;
    return m;
  }

  Eigen::Matrix4d LinkMatrix(const std::string& link_name, const JointVector& q) const {
    const json* link = nullptr;
    for (const auto& l : d_["links"]) {
      if (l["name"] == link_name) link = &l;
    }
    if ((*link)["parent"].get<int>() < 0) return Eigen::Matrix4d::Identity();
    const std::string parent = d_["links"][(*link)["parent"].get<int>()]["name"];
    const json& j = joints_.at((*link)["joint"].get<std::string>());
    Eigen::Matrix4d origin = Eigen::Matrix4d::Identity();
    const auto& o = j["origin"];
    for (int i = 0; i < 3; ++i) origin(i, 3) = o["xyz"][i].get<double>();
    if (o.contains("rpy")) {
      const double r = o["rpy"][0], p = o["rpy"][1], y = o["rpy"][2];
      origin = origin * Rot({0, 0, 1}, y) * Rot({0, 1, 0}, p) * Rot({1, 0, 0}, r);
    }
    Eigen::Matrix4d motion = Eigen::Matrix4d::Identity();
    if (j["type"] == "revolute") {
      const Eigen::Vector3d axis(j["axis"][0].get<double>(), j["axis"][1].get<double>(),
                                 j["axis"][2].get<double>());
      motion = Rot(axis, q[index_.at(j["name"].get<std::string>())]);
    }
    return LinkMatrix(parent, q) * origin * motion;
  }

 private:
  json d_;
  std::map<std::string, int> index_;
  std::map<std::string, json> joints_;
};

json DefaultDescription() { return json::parse(ReadFile(DefaultRobotPath())); }

TEST(RobotModel, BundledModelCounts) {
  const RobotModel& m = Robot();
  EXPECT_EQ(m.joint_names().size(), 18u);
  EXPECT_EQ(m.foot_link_ids().size(), 4u);
  EXPECT_GE(m.ee_link_id(), 0);
  int revolute = 0;
  for (const Link& l : m.links()) revolute += l.joint_type == JointType::kRevolute;
  EXPECT_EQ(revolute, 18);
}

TEST(RobotModel, LimitsWellOrderedAndDefaultStrictlyInside) {
  const RobotModel& m = Robot();
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& l = m.joint_limits()[i];
    EXPECT_LT(l.lower, l.upper);
    EXPECT_GT(m.default_config()[i], l.lower);
    EXPECT_LT(m.default_config()[i], l.upper);
  }
}

TEST(RobotModel, EqualLimitsRejected) {
  json d = DefaultDescription();
  d["limits"][4]["lower"] = d["limits"][4]["upper"];
  EXPECT_THROW(ParseRobotDescription(d.dump()), ValidationError);
}

TEST(RobotModel, CyclicParentsRejected) {
  json d = DefaultDescription();
  d["links"][1]["parent"] = 3;  // LF_HIP <- LF_SHANK <- LF_THIGH <- LF_HIP
  EXPECT_THROW(ParseRobotDescription(d.dump()), ValidationError);
}

TEST(RobotModel, ParseErrorNamesFieldPath) {
  json d = DefaultDescription();
  d["joints"][2].erase("axis");
  try {
    ParseRobotDescription(d.dump());
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("joints[2]"), std::string::npos) << e.what();
  }
}

TEST(RobotModel, ForwardKinematicsMatchesMatrixChainOracle) {
  const RobotModel& m = Robot();
  const MatrixChainOracle oracle(DefaultDescription());
  Rng rng(11);
  std::vector<JointVector> configs = {JointVector::Zero(), m.default_config()};
  for (int i = 0; i < 20; ++i) configs.push_back(testing::RandomConfig(m, rng));
  for (const JointVector& q : configs) {
    const auto poses = ForwardKinematics(m, SE3Pose::Identity(), q);
    for (int l = 0; l < m.num_links(); ++l) {
      const Eigen::Matrix4d ref = oracle.LinkMatrix(m.link(l).name, q);
      EXPECT_LT((poses[l].position() - ref.topRightCorner<3, 1>()).norm(), 1e-9);
      EXPECT_LT((poses[l].rotation() - ref.topLeftCorner<3, 3>()).norm(), 1e-9);
    }
  }
}

TEST(RobotModel, DefaultEePoseGoldenValue) {
  // Frozen from the matrix-chain oracle on the bundled description.
  const Eigen::Vector3d kPosition(0.7387736104116401, 0.0, 0.3098218286297406);
  // The arm pitch joints cancel at the default configuration.
  const Eigen::Quaterniond kOrientation(1.0, 0.0, 0.0, 0.0);
  const SE3Pose p0 = EePoseInBase(Robot(), Robot().default_config());
  EXPECT_LT((p0.position() - kPosition).norm(), 1e-9);
  EXPECT_LT(QuaternionAngle(p0.orientation().conjugate() * kOrientation), 1e-9);
  const MatrixChainOracle oracle(DefaultDescription());
  const Eigen::Matrix4d ref = oracle.LinkMatrix("ee", Robot().default_config());
  EXPECT_LT((ref.topRightCorner<3, 1>() - kPosition).norm(), 1e-9);
}

TEST(RobotModel, BaseLinkEqualsBaseAndTranslationShiftsAllLinks) {
  const RobotModel& m = Robot();
  Rng rng(3);
  const JointVector q = testing::RandomConfig(m, rng);
  const SE3Pose base = testing::RandomPose(rng);
  const Eigen::Vector3d t(0.3, -1.2, 2.5);
  const auto a = ForwardKinematics(m, base, q);
  const auto b = ForwardKinematics(m, SE3Pose::Translation(t) * base, q);
  EXPECT_LT((a[m.base_link_id()].position() - base.position()).norm(), 1e-12);
  EXPECT_LT(QuaternionAngle(a[m.base_link_id()].orientation().conjugate() * base.orientation()),
            1e-9);
  for (int l = 0; l < m.num_links(); ++l) {
    EXPECT_LT((b[l].position() - a[l].position() - t).norm(), 1e-12);
  }
}

TEST(RobotModel, LeftEquivariance) {
  const RobotModel& m = Robot();
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const JointVector q = testing::RandomConfig(m, rng);
    const SE3Pose base = testing::RandomPose(rng);
    const SE3Pose t = testing::RandomPose(rng, 3.0);
    const auto a = ForwardKinematics(m, t * base, q);
    const auto b = ForwardKinematics(m, base, q);
    for (int l = 0; l < m.num_links(); ++l) {
      const SE3Pose tb = t * b[l];
      EXPECT_LT((a[l].position() - tb.position()).norm(), 1e-9);
      EXPECT_LT((a[l].rotation() - tb.rotation()).norm(), 1e-9);
    }
  }
}

TEST(RobotModel, EePoseInBaseIndependentOfBase) {
  const RobotModel& m = Robot();
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const JointVector q = testing::RandomConfig(m, rng);
    const SE3Pose ref = EePoseInBase(m, q);
    const SE3Pose base = testing::RandomPose(rng, 2.0);
    const SE3Pose rel = base.Inverse() * ForwardKinematics(m, base, q)[m.ee_link_id()];
    EXPECT_LT((rel.position() - ref.position()).norm(), 1e-12);
    EXPECT_LT((rel.rotation() - ref.rotation()).norm(), 1e-12);
  }
}

TEST(RobotModel, QuaternionsUnitAndUpperHemisphere) {
  const RobotModel& m = Robot();
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    for (const SE3Pose& p : ForwardKinematics(m, testing::RandomPose(rng), testing::RandomConfig(m, rng))) {
      EXPECT_NEAR(p.orientation().norm(), 1.0, 1e-9);
      EXPECT_GE(p.orientation().w(), 0.0);
    }
  }
}

TEST(RobotModel, PointJacobianMatchesCentralDifferences) {
  const RobotModel& m = Robot();
  Rng rng(7);
  constexpr double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const JointVector q = testing::RandomConfig(m, rng);
    const SE3Pose base = testing::RandomPose(rng);
    const int ee = m.ee_link_id();
    const auto tf = LinkTransforms(m, base.ToIsometry(), q);
    const Eigen::Vector3d local(0.15, -0.15, 0.15);
    const Eigen::Vector3d p = tf[ee] * local;
    const auto jac = PointJacobian(m, tf, ee, p);
    auto point = [&](const SE3Pose& b, const JointVector& qq) {
      return (LinkTransforms(m, b.ToIsometry(), qq)[ee] * local).eval();
    };
    for (int c = 0; c < 6 + kNumJoints; ++c) {
      Eigen::Vector3d fd;
      if (c < 3) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[c] = h;
        fd = (point(SE3Pose(base.position() + e, base.orientation()), q) -
              point(SE3Pose(base.position() - e, base.orientation()), q)) / (2 * h);
      } else if (c < 6) {
        const Eigen::Vector3d axis = Eigen::Vector3d::Unit(c - 3);
        const Eigen::Matrix3d rp = Eigen::AngleAxisd(h, axis).toRotationMatrix() * base.rotation();
        const Eigen::Matrix3d rm = Eigen::AngleAxisd(-h, axis).toRotationMatrix() * base.rotation();
        fd = (point(SE3Pose(base.position(), rp), q) - point(SE3Pose(base.position(), rm), q)) /
             (2 * h);
      } else {
        JointVector qp = q, qm = q;
        qp[c - 6] += h;
        qm[c - 6] -= h;
        fd = (point(base, qp) - point(base, qm)) / (2 * h);
      }
      EXPECT_LT((jac.col(c) - fd).norm(), 1e-5) << "column " << c;
    }
  }
}

TEST(RobotModel, ArmPerturbationMovesEeByOrderOfStep) {
  const RobotModel& m = Robot();
  const JointVector q = m.default_config();
  const SE3Pose p0 = EePoseInBase(m, q);
  JointVector q1 = q;
  for (int i = kNumLegJoints; i < kNumJoints; ++i) q1[i] += 1e-6;
  const SE3Pose p1 = EePoseInBase(m, q1);
  const double dp = (p1.position() - p0.position()).norm();
  const double dr = QuaternionAngle(p0.orientation().conjugate() * p1.orientation());
  EXPECT_GT(dp + dr, 1e-8);
  EXPECT_LT(dp, 1e-5);
  EXPECT_LT(dr, 1e-5);
}

TEST(RobotModel, ClampAndWithinLimits) {
  const RobotModel& m = Robot();
  JointVector q = m.default_config();
  q[0] = 10.0;
  q[17] = -10.0;
  EXPECT_FALSE(m.WithinLimits(q));
  const JointVector c = m.ClampToLimits(q);
  EXPECT_TRUE(m.WithinLimits(c));
  EXPECT_EQ(c[0], m.joint_limits()[0].upper);
  EXPECT_EQ(c[17], m.joint_limits()[17].lower);
}

TEST(RobotModel, FindLink) {
  EXPECT_EQ(Robot().FindLink("ee"), Robot().ee_link_id());
  EXPECT_EQ(Robot().FindLink("no_such_link"), -1);
}

}  // namespace
}  // namespace wbpose
