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

#ifndef WBPOSE_REWARD_ENGINE_H_
#define WBPOSE_REWARD_ENGINE_H_

#include <array>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "wbpose/command_sampler.h"
#include "wbpose/common.h"
#include "wbpose/pose_repr.h"
#include "wbpose/robot_model.h"
#include "wbpose/se3.h"
#include "wbpose/terrain.h"

namespace wbpose {

inline constexpr double kActionScale = 0.5;
inline constexpr int kObservationSize = 54;

struct RewardWeights {
  double w1 = 13.0;
  double w2 = 80.0;
  double w3 = 0.015;
  double w4 = 0.4;
  double w5 = -3e-5;
  double w6 = -3e-6;
  double w7 = -5e-2;
  double w8 = -1.3;
  double sigma_t = 0.05;
  double sigma_q = 0.05;
  double sigma_t_alt = 0.15;

  // Task weights > 0, penalty weights < 0, sigmas > 0.
  void Validate() const;
};

// Starts from the defaults and overrides the keys present in the JSON object.
// Unknown keys are rejected.
RewardWeights ParseRewardWeights(const std::string& json_text);
RewardWeights LoadRewardWeights(const std::filesystem::path& path);

struct StepState {
  double time_in_command = 0.0;
  KeypointTriple measured;
  KeypointTriple command;
  Eigen::Vector3d best_distances = Eigen::Vector3d::Zero();
  std::array<double, kNumFeet> foot_forces{};
  JointVector q = JointVector::Zero();
  JointVector qd = JointVector::Zero();
  JointVector qdd = JointVector::Zero();
  JointVector tau = JointVector::Zero();
  JointVector action = JointVector::Zero();
  JointVector prev_action = JointVector::Zero();
  JointVector q_init = JointVector::Zero();
};

// Per-keypoint distances between measured and commanded keypoints.
Eigen::Vector3d KeypointDistances(const KeypointTriple& measured,
                                  const KeypointTriple& command);

double TrackingReward(const StepState& s, const RewardWeights& w,
                      const EpisodeSchedule& schedule);

enum class ProgressMode { kComponentwise, kSum };

struct ProgressResult {
  double reward = 0.0;
  Eigen::Vector3d best_distances = Eigen::Vector3d::Zero();
  bool improved = false;
};

ProgressResult ProgressReward(const StepState& s,
                              ProgressMode mode = ProgressMode::kComponentwise);

// Throws ValidationError on negative forces.
double FeetContactReward(const StepState& s);

double InitialJointReward(const StepState& s, const RewardWeights& w);

struct PenaltyTerms {
  double torque = 0.0;        // ||tau||^2
  double acceleration = 0.0;  // ||qdd||^2
  double action_rate = 0.0;   // ||a - a_prev||^2
  double limit = 0.0;         // summed one-sided target violations
  double weighted = 0.0;
};

PenaltyTerms Penalties(const StepState& s, const RobotModel& model,
                       const RewardWeights& w);

struct RewardBreakdown {
  double tracking = 0.0;
  double progress = 0.0;
  double feet_contact = 0.0;
  double initial_joint = 0.0;
  PenaltyTerms penalty;

  double w_tracking = 0.0;
  double w_progress = 0.0;
  double w_feet_contact = 0.0;
  double w_initial_joint = 0.0;
  double total = 0.0;

  Eigen::Vector3d best_distances = Eigen::Vector3d::Zero();
};

RewardBreakdown TotalReward(const StepState& s, const RobotModel& model,
                            const RewardWeights& w,
                            const EpisodeSchedule& schedule,
                            ProgressMode mode = ProgressMode::kComponentwise);

// Position error (m) and orientation error (rad) with both rotations passed
// through the given representation and back.
struct AltErrors {
  double position = 0.0;
  double rotation = 0.0;
};
AltErrors AltPoseErrors(PoseReprKind kind, const SE3Pose& measured,
                        const SE3Pose& command);

double AltTrackingReward(PoseReprKind kind, const SE3Pose& measured,
                         const SE3Pose& command, double time_in_command,
                         const RewardWeights& w,
                         const EpisodeSchedule& schedule);

struct AltProgressResult {
  double reward = 0.0;
  AltErrors best;
};
// Pays (best.pos - pos) + (best.rot - rot) only if both errors improved.
AltProgressResult AltProgressReward(const AltErrors& current,
                                    const AltErrors& best);

struct ObservationNoise {
  double gravity = 0.0;
  double velocity = 0.0;
  double joint_position = 0.0;
  double action = 0.0;
  double command = 0.0;
};

// [g_b (3), v_b (6), q (18), a_prev (18), keypoint delta (9)].
Eigen::Matrix<double, kObservationSize, 1> BuildObservation(
    const RobotModel& model, const SE3Pose& base_pose,
    const Eigen::Matrix<double, 6, 1>& base_velocity, const JointVector& q,
    const JointVector& prev_action, const CommandSample& command,
    const ObservationNoise& noise = {}, Rng* rng = nullptr);

// 0.5 * a + q_def, unclamped.
JointVector ActionToTargets(const JointVector& action, const RobotModel& model);
// Inverse of ActionToTargets.
JointVector TargetsToAction(const JointVector& targets, const RobotModel& model);

// Kinematic harness proxies.
struct PdGains {
  double kp_leg = 80.0;
  double kp_arm = 40.0;
  double kd_leg = 2.0;
  double kd_arm = 1.0;
};
JointVector TorqueProxy(const JointVector& q_target, const JointVector& q,
                        const JointVector& qd, const PdGains& gains = {});

inline constexpr double kRobotMass = 60.0;
inline constexpr double kGravity = 9.81;
inline constexpr double kContactTolerance = 0.01;

// Feet within kContactTolerance of the surface share the weight equally.
std::array<double, kNumFeet> FootContactProxy(
    const std::array<Eigen::Vector3d, kNumFeet>& foot_positions,
    const RobotModel& model, const TerrainField& terrain,
    double total_weight = kRobotMass * kGravity);

// Episode termination on undesired contacts.
struct ContactFlags {
  bool base = false;
  std::array<bool, kNumFeet> knee{};
};
bool ShouldTerminate(const ContactFlags& contacts);

struct RandomizationConfig {
  double ee_mass_lower = 0.0;
  double ee_mass_upper = 1.8;
  double impulse_force_lower = -10.0;
  double impulse_force_upper = 10.0;
  double impulse_interval_lower = 3.0;
  double impulse_interval_upper = 4.0;
  double push_velocity_lower = -0.5;
  double push_velocity_upper = 0.5;
  ObservationNoise noise;

  void Validate() const;
};

}  // namespace wbpose

#endif  // WBPOSE_REWARD_ENGINE_H_
