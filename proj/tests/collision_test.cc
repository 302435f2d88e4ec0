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

#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "wbpose/io.h"
#include "wbpose/terrain.h"

namespace wbpose {
namespace {

using testing::Robot;

TEST(Collision, SegmentDistanceCases) {
  const Segment x{{-1, 0, 0}, {1, 0, 0}};
  EXPECT_NEAR(SegmentDistance(x, {{0, -1, 1}, {0, 1, 1}}), 1.0, 1e-12);   // skew, crossing
  EXPECT_NEAR(SegmentDistance(x, {{-1, 0.5, 0}, {1, 0.5, 0}}), 0.5, 1e-12);  // parallel
  EXPECT_NEAR(SegmentDistance(x, {{3, 0, 0}, {4, 0, 0}}), 2.0, 1e-12);   // collinear gap
  EXPECT_NEAR(SegmentDistance(x, {{2, 1, 0}, {2, 1, 0}}), std::sqrt(2.0), 1e-12);  // point
  EXPECT_NEAR(SegmentDistance(x, {{0, 0, 0}, {0, 0, 2}}), 0.0, 1e-12);   // touching
}

TEST(Collision, DefaultConfigIsCollisionFree) {
  const CollisionReport r = SelfCollision(Robot(), SE3Pose::Identity(), Robot().default_config());
  EXPECT_FALSE(r.colliding);
  EXPECT_TRUE(r.pairs.empty());
}

TEST(Collision, CandidatePairsMatchDescription) {
  const testing::SamplingOracle oracle(Robot());
  std::set<std::pair<int, int>> a(oracle.pairs.begin(), oracle.pairs.end());
  std::set<std::pair<int, int>> b;
  for (auto [i, j] : Robot().candidate_pairs()) b.insert({std::min(i, j), std::max(i, j)});
  EXPECT_EQ(a, b);
}

TEST(Collision, WristAtBaseCenterCollides) {
  const RobotModel& m = Robot();
  auto tf = LinkTransforms(m, Eigen::Isometry3d::Identity(), m.default_config());
  const int wrist = m.FindLink("wrist");
  ASSERT_GE(wrist, 0);
  const CollisionPrimitive* wp = nullptr;
  for (const auto& p : m.collision_primitives()) {
    if (p.link == wrist) wp = &p;
  }
  ASSERT_NE(wp, nullptr);
  const Eigen::Vector3d base_center = tf[m.base_link_id()] * Eigen::Vector3d::Zero();
  tf[wrist] = Eigen::Translation3d(base_center - wp->offset) * Eigen::Isometry3d::Identity();
  const CollisionReport r = SelfCollision(m, tf);
  EXPECT_TRUE(r.colliding);
  bool found = false;
  for (const auto& p : r.pairs) {
    EXPECT_GT(p.penetration, 0.0);
    found |= (p.link_a == m.base_link_id() && p.link_b == wrist) ||
             (p.link_b == m.base_link_id() && p.link_a == wrist);
  }
  EXPECT_TRUE(found);
}

TEST(Collision, AgreesWithSamplingOracleOnRandomConfigs) {
  const RobotModel& m = Robot();
  const testing::SamplingOracle oracle(m);
  Rng rng(21);
  int colliding = 0, free = 0, ambiguous = 0;
  for (int trial = 0; trial < 500; ++trial) {
    JointVector q = m.default_config();
    // Half the configs sweep the full range, half stay near the default.
    if (trial % 2 == 0) {
      q = testing::RandomConfig(m, rng);
    } else {
      for (int i = 0; i < kNumJoints; ++i) q[i] += rng.Uniform(-0.8, 0.8);
      q = m.ClampToLimits(q);
    }
    const auto tf = LinkTransforms(m, Eigen::Isometry3d::Identity(), q);
    const double clearance = oracle.MinClearance(m, tf);
    const bool got = SelfCollision(m, tf).colliding;
    if (std::abs(clearance) <= 2e-3) {
      ++ambiguous;
      continue;
    }
    EXPECT_EQ(got, clearance < 0.0) << "trial " << trial << " clearance " << clearance;
    (clearance < 0 ? colliding : free)++;
  }
  // The sample must exercise both outcomes.
  EXPECT_GT(colliding, 50);
  EXPECT_GT(free, 50);
  EXPECT_LT(ambiguous, 50);
}

TEST(Collision, InvariantUnderRigidMotionOfWholeRobot) {
  const RobotModel& m = Robot();
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const JointVector q = testing::RandomConfig(m, rng);
    const CollisionReport a = SelfCollision(m, SE3Pose::Identity(), q);
    const CollisionReport b = SelfCollision(m, testing::RandomPose(rng, 5.0), q);
    EXPECT_EQ(a.colliding, b.colliding);
    ASSERT_EQ(a.pairs.size(), b.pairs.size());
    for (size_t i = 0; i < a.pairs.size(); ++i) {
      EXPECT_EQ(a.pairs[i].link_a, b.pairs[i].link_a);
      EXPECT_EQ(a.pairs[i].link_b, b.pairs[i].link_b);
    }
  }
}

TEST(Collision, InflationIsMonotone) {
  const RobotModel& m = Robot();
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const JointVector q = testing::RandomConfig(m, rng);
    const CollisionReport a = SelfCollision(m, SE3Pose::Identity(), q);
    const CollisionReport b = SelfCollision(m, SE3Pose::Identity(), q, rng.Uniform(1e-4, 0.05));
    std::set<std::pair<int, int>> inflated;
    for (const auto& p : b.pairs) inflated.insert({p.link_a, p.link_b});
    for (const auto& p : a.pairs) EXPECT_TRUE(inflated.count({p.link_a, p.link_b}));
    EXPECT_TRUE(!a.colliding || b.colliding);
  }
}

TEST(Collision, ReportInvariants) {
  const RobotModel& m = Robot();
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const CollisionReport r = SelfCollision(m, SE3Pose::Identity(), testing::RandomConfig(m, rng));
    EXPECT_EQ(r.colliding, !r.pairs.empty());
    for (const auto& p : r.pairs) EXPECT_GT(p.penetration, 0.0);
  }
}

TEST(Collision, TerrainClearanceBoundaries) {
  const CoarseHeightMap flat = BuildCoarseMap(GenerateTerrain(TerrainKind::kFlat, 0.0, 0, 2.0));
  auto at_z = [](double z) { return SE3Pose::Translation({0.1, 0.1, z}); };
  EXPECT_TRUE(TerrainClearance(at_z(0.081), flat, 0.08));
  EXPECT_TRUE(TerrainClearance(at_z(0.08), flat, 0.08));
  EXPECT_FALSE(TerrainClearance(at_z(0.0799), flat, 0.08));
  const CoarseHeightMap step = flat.Raised(0.3);
  EXPECT_FALSE(TerrainClearance(at_z(0.35), step, 0.08));
  EXPECT_TRUE(TerrainClearance(at_z(0.381), step, 0.08));
}

TEST(Collision, TerrainClearanceOutOfBoundsNamesCoordinate) {
  const CoarseHeightMap flat = BuildCoarseMap(GenerateTerrain(TerrainKind::kFlat, 0.0, 0, 2.0));
  try {
    TerrainClearance(SE3Pose::Translation({7.5, 0.0, 1.0}), flat, 0.08);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("7.5"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace wbpose
