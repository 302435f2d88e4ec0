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

#ifndef WBPOSE_CURRICULUM_H_
#define WBPOSE_CURRICULUM_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wbpose/common.h"
#include "wbpose/robot_model.h"
#include "wbpose/se3.h"
#include "wbpose/terrain.h"

namespace wbpose {

inline constexpr double kPromotePosition = 0.20;   // m
inline constexpr double kPromoteRotation = 20.0;   // deg
inline constexpr double kDemotePosition = 0.80;    // m
inline constexpr double kDemoteRotation = 120.0;   // deg

struct EpisodeErrors {
  double position = 0.0;  // mean over reward-active windows, m
  double rotation = 0.0;  // deg
};

struct CurriculumState {
  int level = 0;
  int max_level = 10;
  std::vector<EpisodeErrors> history;
};

enum class CurriculumTransition { kHold, kPromote, kDemote, kReassign };

struct CurriculumStep {
  CurriculumState state;
  CurriculumTransition transition = CurriculumTransition::kHold;
};

// Promote when both errors are under the low thresholds, demote when both
// exceed the high thresholds, otherwise hold. Promoting at max_level draws a
// uniform level in [0, max_level] from `rng`.
CurriculumStep CurriculumUpdate(const CurriculumState& state,
                                double mean_position_error,
                                double mean_rotation_error_deg, Rng& rng);

std::string_view TransitionName(CurriculumTransition t);

// Terrain difficulty of a level, level / max_level.
double LevelDifficulty(int level, int max_level);

// Mean errors over the reward-active steps of an episode.
EpisodeErrors MeanActiveErrors(const std::vector<double>& position_errors,
                               const std::vector<double>& rotation_errors_deg,
                               const std::vector<bool>& active);

struct InitialConfiguration {
  SE3Pose base;
  JointVector q = JointVector::Zero();
  double tilt_angle = 0.0;  // degrees between gravity and its base projection
  TerrainKind terrain_kind = TerrainKind::kFlat;
  std::uint64_t terrain_seed = 0;
  int attempts = 0;
};

struct StanceOptions {
  int max_attempts = 50;
  double border_margin = 1.0;     // keep-out band at the terrain edge, m
  double leg_perturbation = 0.1;  // rad
  double arm_perturbation = 0.2;  // rad
  double max_tilt_deg = 55.0;
  double foot_tolerance = 0.01;   // m
};

// Angle in degrees between world gravity and gravity seen in the base frame.
double TiltAngleDeg(const SE3Pose& base);

// Signed distance of each foot sphere's lowest point to the terrain below.
std::array<double, kNumFeet> FootGaps(const RobotModel& model,
                                      const TerrainField& terrain,
                                      const SE3Pose& base, const JointVector& q);

// Both stability predicates evaluated from scratch.
bool StanceIsStable(const RobotModel& model, const TerrainField& terrain,
                    const SE3Pose& base, const JointVector& q,
                    const StanceOptions& options = {});

// Analytic inverse kinematics of one leg (HAA about x, HFE and KFE about y)
// for a foot-origin target in the base frame. Among the two knee branches the
// one within limits closest to `reference` is returned.
std::optional<Eigen::Vector3d> SolveLegIk(const RobotModel& model, int foot,
                                          const Eigen::Vector3d& target_in_base,
                                          const Eigen::Vector3d& reference);

// Deterministic stance at a given xy and yaw with unperturbed default legs and
// arm; nullopt when the site fails the stability predicates.
std::optional<InitialConfiguration> StanceAt(const RobotModel& model,
                                             const TerrainField& terrain,
                                             const Eigen::Vector2d& xy,
                                             double yaw,
                                             const StanceOptions& options = {});

// Procedural sampler standing in for a locomotion-policy rollout. Throws
// NumericalError when every attempt fails.
InitialConfiguration GenerateInitialConfiguration(const RobotModel& model,
                                                  const TerrainField& terrain,
                                                  Rng& rng,
                                                  const StanceOptions& options = {});

// Rollout parameters of the locomotion-policy initializer, kept for a
// physics-backed implementation.
struct RolloutCommandRanges {
  double heading_rate = 1.0;  // rad/s, symmetric
  double velocity = 1.0;      // m/s, symmetric
  double duration = 4.0;      // s
};

}  // namespace wbpose

#endif  // WBPOSE_CURRICULUM_H_
