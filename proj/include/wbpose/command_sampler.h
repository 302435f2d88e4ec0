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

#ifndef WBPOSE_COMMAND_SAMPLER_H_
#define WBPOSE_COMMAND_SAMPLER_H_

#include <optional>
#include <string>
#include <vector>

#include "wbpose/common.h"
#include "wbpose/se3.h"
#include "wbpose/terrain.h"
#include "wbpose/workspace.h"

namespace wbpose {

struct CommandSample {
  SE3Pose target;          // world frame
  SE3Pose target_in_base;
  int source_index = -1;   // index into the workspace dataset
  SE3Pose body_offset;
  int resample_attempts = 0;  // rejected candidates before this one
  double issue_time = 0.0;
  SE3Pose base_pose;       // world pose of the base the command was drawn for
};

class EpisodeSchedule {
 public:
  EpisodeSchedule(double episode_length = 12.0, double command_period = 4.0,
                  double reward_window = 2.0, double control_dt = 0.02);

  double episode_length() const { return episode_length_; }
  double command_period() const { return command_period_; }
  double reward_window() const { return reward_window_; }
  double control_dt() const { return control_dt_; }

  int steps_per_command() const { return steps_per_command_; }
  int steps_per_episode() const { return 3 * steps_per_command_; }
  int num_commands() const { return 3; }

  double IssueTime(int command) const { return command * command_period_; }
  // Time at the end of control step `step` (1-based end, so step 0 ends at dt).
  double StepTime(int step) const { return (step + 1) * control_dt_; }
  // Time elapsed since the active command was issued, for the step ending at
  // StepTime(step); lies in (0, T].
  double TimeInCommand(int step) const;
  // True on the last T_r seconds of each command cycle, t in (T - T_r, T].
  bool RewardActive(int step) const;

 private:
  double episode_length_;
  double command_period_;
  double reward_window_;
  double control_dt_;
  int steps_per_command_;
  int window_steps_;
};

// Rejected candidate carried by CommandSamplingError.
struct RejectedCommand {
  SE3Pose target;
  int source_index = -1;
  std::string reason;
};

class CommandSamplingError : public NumericalError {
 public:
  CommandSamplingError(const std::string& what, RejectedCommand last)
      : NumericalError(what), last_(std::move(last)) {}
  const RejectedCommand& last_rejected() const { return last_; }

 private:
  RejectedCommand last_;
};

struct CommandSamplerOptions {
  int max_attempts = 100;
  bool expand = true;
  OffsetRanges ranges;
};

// Samples, expands and accepts the first candidate whose world position
// clears the coarse map by 0.08 m. Candidates outside the map are rejected.
CommandSample NextCommand(const WorkspaceDataset& dataset,
                          const CoarseHeightMap& coarse_map,
                          const SE3Pose& base_pose, Rng& rng,
                          const CommandSamplerOptions& options = {});

// Three commands issued at 0, T and 2T.
std::vector<CommandSample> CommandStream(const EpisodeSchedule& schedule,
                                         const WorkspaceDataset& dataset,
                                         const CoarseHeightMap& coarse_map,
                                         const SE3Pose& base_pose, Rng& rng,
                                         const CommandSamplerOptions& options = {});

// JSON array of CommandSample records.
std::string SerializeCommands(const std::vector<CommandSample>& commands);
std::vector<CommandSample> ParseCommands(const std::string& text);

}  // namespace wbpose

#endif  // WBPOSE_COMMAND_SAMPLER_H_
