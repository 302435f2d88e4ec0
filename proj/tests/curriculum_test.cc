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

#include "wbpose/curriculum.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace wbpose {
namespace {

using testing::Robot;

int Step(int level, double pos, double rot, int max_level = 10) {
  CurriculumState s;
  s.level = level;
  s.max_level = max_level;
  Rng rng(0);
  return CurriculumUpdate(s, pos, rot, rng).state.level;
}

TEST(Curriculum, WorkedTransitions) {
  EXPECT_EQ(Step(2, 0.15, 15), 3);
  EXPECT_EQ(Step(2, 0.90, 130), 1);
  EXPECT_EQ(Step(2, 0.50, 15), 2);
  EXPECT_EQ(Step(0, 0.90, 130), 0);
  // Both conditions are required in each direction.
  EXPECT_EQ(Step(2, 0.15, 25), 2);
  EXPECT_EQ(Step(2, 0.90, 100), 2);
  // Strict thresholds.
  EXPECT_EQ(Step(2, 0.20, 10), 2);
  EXPECT_EQ(Step(2, 0.80, 130), 2);
}

struct Episode {
  double pos, rot;
  CurriculumTransition transition;
  int level;
};

// Seed 3 reassigns the top level to the value frozen below.
constexpr std::uint64_t kTraceSeed = 3;
constexpr int kReassignedLevel = 1;

std::vector<Episode> ScriptedTrace() {
  using T = CurriculumTransition;
  return {
      {0.10, 10, T::kPromote, 1},  {0.15, 15, T::kPromote, 2},
      {0.50, 15, T::kHold, 2},     {0.90, 130, T::kDemote, 1},
      {0.90, 10, T::kHold, 1},     {0.10, 10, T::kPromote, 2},
      {0.10, 10, T::kPromote, 3},  {0.10, 10, T::kReassign, kReassignedLevel},
  };
}

std::vector<CurriculumStep> Replay(std::uint64_t seed) {
  CurriculumState s;
  s.max_level = 3;
  Rng rng(seed);
  std::vector<CurriculumStep> out;
  for (const Episode& e : ScriptedTrace()) {
    out.push_back(CurriculumUpdate(s, e.pos, e.rot, rng));
    s = out.back().state;
  }
  return out;
}

TEST(Curriculum, ScriptedTraceReproducesLevels) {
  const auto steps = Replay(kTraceSeed);
  const auto trace = ScriptedTrace();
  ASSERT_EQ(steps.size(), trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    EXPECT_EQ(steps[i].state.level, trace[i].level) << "episode " << i;
    EXPECT_EQ(steps[i].transition, trace[i].transition) << "episode " << i;
  }
  // Reassignment draws once from the same generator.
  Rng oracle(kTraceSeed);
  EXPECT_EQ(static_cast<int>(oracle.UniformInt(4)), kReassignedLevel);
  EXPECT_EQ(steps.back().state.history.size(), trace.size());
}

TEST(Curriculum, ReplayIsDeterministic) {
  const auto a = Replay(kTraceSeed), b = Replay(kTraceSeed);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].state.level, b[i].state.level);
    EXPECT_EQ(a[i].transition, b[i].transition);
  }
}

TEST(Curriculum, UpdateIsPure) {
  CurriculumState s;
  s.level = 4;
  Rng a(3), b(3);
  const CurriculumStep x = CurriculumUpdate(s, 0.1, 5, a);
  const CurriculumStep y = CurriculumUpdate(s, 0.1, 5, b);
  EXPECT_EQ(x.state.level, y.state.level);
  EXPECT_EQ(s.level, 4);
  EXPECT_TRUE(s.history.empty());
}

TEST(Curriculum, LevelsStayInRange) {
  Rng rng(111);
  CurriculumState s;
  s.max_level = 5;
  std::array<int, 6> reassigned{};
  for (int i = 0; i < 20000; ++i) {
    // Mostly good episodes so the top level is reached regularly.
    const bool good = rng.Uniform() < 0.7;
    const double pos = good ? rng.Uniform(0, 0.2) : rng.Uniform(0, 1.2);
    const double rot = good ? rng.Uniform(0, 20) : rng.Uniform(0, 180);
    const CurriculumStep step = CurriculumUpdate(s, pos, rot, rng);
    ASSERT_GE(step.state.level, 0);
    ASSERT_LE(step.state.level, s.max_level);
    if (step.transition == CurriculumTransition::kReassign) reassigned[step.state.level]++;
    s = step.state;
    s.history.clear();
  }
  for (int c : reassigned) EXPECT_GT(c, 0);
}

TEST(Curriculum, PredicatesAreMutuallyExclusive) {
  Rng rng(112);
  for (int i = 0; i < 100000; ++i) {
    const double pos = rng.Uniform(0, 2), rot = rng.Uniform(0, 180);
    const bool promote = pos < kPromotePosition && rot < kPromoteRotation;
    const bool demote = pos > kDemotePosition && rot > kDemoteRotation;
    ASSERT_FALSE(promote && demote);
  }
}

TEST(Curriculum, RejectsInvalidInputs) {
  CurriculumState s;
  Rng rng(1);
  EXPECT_THROW(CurriculumUpdate(s, -0.1, 0, rng), ValidationError);
  EXPECT_THROW(CurriculumUpdate(s, 0.1, std::nan(""), rng), ValidationError);
  s.level = 11;
  EXPECT_THROW(CurriculumUpdate(s, 0.1, 0, rng), ValidationError);
}

TEST(Curriculum, MeansOverActiveSteps) {
  const EpisodeErrors e = MeanActiveErrors({1, 2, 3, 4}, {10, 20, 30, 40}, {false, true, false, true});
  EXPECT_EQ(e.position, 3.0);
  EXPECT_EQ(e.rotation, 30.0);
  EXPECT_THROW(MeanActiveErrors({1}, {1}, {false}), ValidationError);
  EXPECT_THROW(MeanActiveErrors({1, 2}, {1}, {true}), ValidationError);
  EXPECT_EQ(LevelDifficulty(5, 10), 0.5);
}

TEST(Stance, FlatIsLevelOnFirstAttempt) {
  const TerrainField flat = GenerateTerrain(TerrainKind::kFlat, 0.0, 0, 8.0);
  Rng rng(113);
  StanceOptions opt;
  opt.leg_perturbation = 0.0;
  opt.arm_perturbation = 0.0;
  const InitialConfiguration ic = GenerateInitialConfiguration(Robot(), flat, rng, opt);
  EXPECT_NEAR(ic.tilt_angle, 0.0, 1e-6);
  EXPECT_EQ(ic.attempts, 1);
  const InitialConfiguration perturbed = GenerateInitialConfiguration(Robot(), flat, rng);
  EXPECT_NEAR(perturbed.tilt_angle, 0.0, 1e-6);
  EXPECT_EQ(perturbed.attempts, 1);
}

// Tilt and foot gaps recomputed without the library predicates.
bool IndependentlyStable(const RobotModel& m, const TerrainField& t, const InitialConfiguration& ic) {
  const Eigen::Vector3d g_b = ic.base.rotation().transpose() * Eigen::Vector3d(0, 0, -1);
  const double tilt = std::acos(std::clamp(-g_b.z(), -1.0, 1.0)) * 180.0 / kPi;
  if (!(tilt < 55.0)) return false;
  const auto tf = LinkTransforms(m, ic.base.ToIsometry(), ic.q);
  for (int f = 0; f < kNumFeet; ++f) {
    const Eigen::Vector3d p = tf[m.foot_link_ids()[f]].translation();
    const int ix = static_cast<int>(std::floor((p.x() - t.origin().x()) / t.cell_size()));
    const int iy = static_cast<int>(std::floor((p.y() - t.origin().y()) / t.cell_size()));
    if (ix < 0 || iy < 0 || ix >= t.cols() || iy >= t.rows()) return false;
    const double gap = p.z() - m.foot_radius(f) - t.heights()[iy * t.cols() + ix];
    if (std::abs(gap) > 0.01) return false;
  }
  return true;
}

TEST(Stance, StairsStancesPassIndependentCheck) {
  const TerrainField stairs = GenerateTerrain(TerrainKind::kStairs, 1.0, 5, 8.0);
  Rng rng(114);
  for (int i = 0; i < 200; ++i) {
    const InitialConfiguration ic = GenerateInitialConfiguration(Robot(), stairs, rng);
    EXPECT_TRUE(IndependentlyStable(Robot(), stairs, ic)) << "stance " << i;
    EXPECT_TRUE(StanceIsStable(Robot(), stairs, ic.base, ic.q));
    EXPECT_EQ(ic.terrain_kind, TerrainKind::kStairs);
    for (int j = 0; j < kNumJoints; ++j) {
      EXPECT_GE(ic.q[j], Robot().joint_limits()[j].lower);
      EXPECT_LE(ic.q[j], Robot().joint_limits()[j].upper);
    }
  }
}

TEST(Stance, VerticalWallExhaustsAttempts) {
  const int n = 160;
  const double cell = 0.05;
  const Eigen::Vector2d origin(-4, -4);
  std::vector<double> h(n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) h[iy * n + ix] = 10.0 * (origin.x() + (ix + 0.5) * cell);
  }
  const TerrainField wall(TerrainKind::kRough, cell, origin, n, n, h, 1.0, 0);
  Rng rng(115);
  StanceOptions opt;
  opt.max_attempts = 20;
  EXPECT_THROW(GenerateInitialConfiguration(Robot(), wall, rng, opt), NumericalError);
  opt.max_attempts = 0;
  EXPECT_THROW(GenerateInitialConfiguration(Robot(), wall, rng, opt), ValidationError);
}

TEST(Stance, TiltOfKnownRotation) {
  EXPECT_NEAR(TiltAngleDeg(SE3Pose::FromXyzRpy({0, 0, 0}, DegToRad(30), 0, 1.0)), 30.0, 1e-9);
  EXPECT_NEAR(TiltAngleDeg(SE3Pose::FromXyzRpy({0, 0, 0}, 0, DegToRad(-60), 0)), 60.0, 1e-9);
}

TEST(LegIk, SolutionsReachTheTarget) {
  const RobotModel& m = Robot();
  Rng rng(116);
  int solved = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int foot = trial % kNumFeet;
    JointVector q = m.default_config();
    for (int j = 0; j < 3; ++j) {
      const JointLimit& lim = m.joint_limits()[3 * foot + j];
      q[3 * foot + j] = rng.Uniform(lim.lower, lim.upper);
    }
    const Eigen::Vector3d target = FootPositions(m, Eigen::Isometry3d::Identity(), q)[foot];
    const auto sol = SolveLegIk(m, foot, target, q.segment<3>(3 * foot));
    ASSERT_TRUE(sol.has_value()) << "trial " << trial;
    JointVector q2 = q;
    q2.segment<3>(3 * foot) = *sol;
    EXPECT_LT((FootPositions(m, Eigen::Isometry3d::Identity(), q2)[foot] - target).norm(), 1e-9);
    ++solved;
  }
  EXPECT_EQ(solved, 400);
  EXPECT_FALSE(SolveLegIk(m, 0, Eigen::Vector3d(5, 0, 0), Eigen::Vector3d::Zero()).has_value());
}

TEST(Rollout, StoredRanges) {
  const RolloutCommandRanges r;
  EXPECT_EQ(r.heading_rate, 1.0);
  EXPECT_EQ(r.velocity, 1.0);
  EXPECT_EQ(r.duration, 4.0);
}

}  // namespace
}  // namespace wbpose
