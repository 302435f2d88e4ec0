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

#ifndef WBPOSE_DLS_TRACKER_H_
#define WBPOSE_DLS_TRACKER_H_

#include <filesystem>
#include <string>
#include <vector>

#include "wbpose/command_sampler.h"
#include "wbpose/curriculum.h"
#include "wbpose/pose_repr.h"
#include "wbpose/robot_model.h"
#include "wbpose/se3.h"

namespace wbpose {

inline constexpr int kDecisionSize = 6 + kNumJoints;
inline constexpr int kTaskRows = 3 * kNumFeet + 9 + kNumJoints;

using DecisionVector = Eigen::Matrix<double, kDecisionSize, 1>;

struct TrackerConfig {
  double damping = 0.05;
  double step_scale = 0.5;
  int max_iterations = 500;
  double tolerance = 1e-3;  // keypoint error norm, m
  // Row scales of the stacked task; posture applies to the leg joints.
  double foot_weight = 1e3;
  double posture_weight = 1e-2;

  void Validate() const;
};

TrackerConfig ParseTrackerConfig(const std::string& json_text);
TrackerConfig LoadTrackerConfig(const std::filesystem::path& path);

struct TrackingResult {
  bool converged = false;
  int iterations = 0;
  PoseErrors final_errors;
  double initial_keypoint_error = 0.0;
  double final_keypoint_error = 0.0;
  double max_foot_displacement = 0.0;  // m, at the final iterate
  bool self_collision = false;          // final configuration, post-checked
  bool within_limits = true;
  std::vector<JointVector> joint_trajectory;  // one entry per iterate
  std::vector<SE3Pose> base_trajectory;
  std::vector<double> keypoint_errors;
  std::string failure;  // set when the solve aborted
};

// Weighted stacked task at the current iterate.
struct StackedTask {
  Eigen::Matrix<double, kTaskRows, kDecisionSize> jacobian;
  Eigen::Matrix<double, kTaskRows, 1> error;
  double keypoint_error = 0.0;
};

StackedTask BuildStackedTask(const RobotModel& model, const SE3Pose& base,
                             const JointVector& q,
                             const std::array<Eigen::Vector3d, kNumFeet>& foot_anchor,
                             const KeypointTriple& target,
                             const JointVector& q_posture,
                             const TrackerConfig& config);

// J^T (J J^T + lambda^2 I)^-1 e, unscaled.
DecisionVector DlsStep(const StackedTask& task, double damping);

// Applies a decision increment: translation added, rotation applied on the
// left in the world frame, joints added then clamped.
void ApplyStep(const RobotModel& model, const DecisionVector& dx, SE3Pose& base,
               JointVector& q);

TrackingResult TrackCommand(const RobotModel& model,
                            const InitialConfiguration& init,
                            const CommandSample& command,
                            const TrackerConfig& config = {});

struct BatchSummary {
  int count = 0;
  int converged = 0;
  double convergence_rate = 0.0;
  double mean_position_error = 0.0;
  double median_position_error = 0.0;
  double p95_position_error = 0.0;
  double mean_rotation_error = 0.0;  // deg
  double median_rotation_error = 0.0;
  double p95_rotation_error = 0.0;
  double mean_iterations = 0.0;
  int max_iterations = 0;
  std::vector<int> failures;  // indices not converged or aborted
};

// One initial configuration per command. Solves run in parallel; results are
// indexed like the inputs.
std::vector<TrackingResult> EvaluateBatch(const RobotModel& model,
                                          const std::vector<InitialConfiguration>& inits,
                                          const std::vector<CommandSample>& commands,
                                          const TrackerConfig& config = {},
                                          int num_threads = 0);

BatchSummary Summarize(const std::vector<TrackingResult>& results);

}  // namespace wbpose

#endif  // WBPOSE_DLS_TRACKER_H_
