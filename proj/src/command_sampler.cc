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

#include "wbpose/command_sampler.h"

#include <cmath>
#include <sstream>

#include "json_util.h"
#include "wbpose/collision.h"

namespace wbpose {

using json_util::json;

namespace {

int WholeSteps(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "episode schedule: control_dt " << dt << " does not divide " << what
       << " " << span;
    throw ValidationError(os.str());
  }
  return static_cast<int>(n);
}

std::string Describe(const SE3Pose& p) {
  std::ostringstream os;
  os << "(" << p.position().x() << ", " << p.position().y() << ", "
     << p.position().z() << ")";
  return os.str();
}

}  // namespace

EpisodeSchedule::EpisodeSchedule(double episode_length, double command_period,
                                 double reward_window, double control_dt)
    : episode_length_(episode_length),
      command_period_(command_period),
      reward_window_(reward_window),
      control_dt_(control_dt) {
  if (!(control_dt > 0.0) || !(command_period > 0.0) || !(reward_window > 0.0)) {
    throw ValidationError("episode schedule: durations must be positive");
  }
  if (std::abs(episode_length - 3.0 * command_period) > 1e-9) {
    throw ValidationError("episode schedule: episode_length must equal 3 * command_period");
  }
  if (!(reward_window < command_period)) {
    throw ValidationError("episode schedule: reward_window must be shorter than command_period");
  }
  steps_per_command_ = WholeSteps(command_period, control_dt, "command_period");
  window_steps_ = WholeSteps(reward_window, control_dt, "reward_window");
}

double EpisodeSchedule::TimeInCommand(int step) const {
  return (step % steps_per_command_ + 1) * control_dt_;
}

bool EpisodeSchedule::RewardActive(int step) const {
  return step % steps_per_command_ >= steps_per_command_ - window_steps_;
}

CommandSample NextCommand(const WorkspaceDataset& dataset,
                          const CoarseHeightMap& coarse_map,
                          const SE3Pose& base_pose, Rng& rng,
                          const CommandSamplerOptions& opt) {
  if (opt.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
  RejectedCommand last;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const BinnedSample s = SampleBinned(dataset, rng);
    ExpandedCommand ex{s.pose, SE3Pose::Identity()};
    if (opt.expand) ex = ExpandCommand(s.pose, rng, opt.ranges);
    const SE3Pose world = base_pose * ex.pose;
    const double x = world.position().x();
    const double y = world.position().y();
    if (!coarse_map.Contains(x, y)) {
      last = {world, s.index, "outside the terrain map"};
      continue;
    }
    if (!TerrainClearance(world, coarse_map, kCommandTerrainMargin)) {
      last = {world, s.index, "below terrain + margin"};
      continue;
    }
    CommandSample c;
    c.target = world;
    c.target_in_base = ex.pose;
    c.source_index = s.index;
    c.body_offset = ex.body_offset;
    c.resample_attempts = attempt;
    c.base_pose = base_pose;
    return c;
  }
  throw CommandSamplingError(
      "no terrain-feasible command after " + std::to_string(opt.max_attempts) +
          " attempts; last candidate " + Describe(last.target) + " " + last.reason,
      last);
}

std::vector<CommandSample> CommandStream(const EpisodeSchedule& schedule,
                                         const WorkspaceDataset& dataset,
                                         const CoarseHeightMap& coarse_map,
                                         const SE3Pose& base_pose, Rng& rng,
                                         const CommandSamplerOptions& opt) {
  std::vector<CommandSample> out;
  for (int i = 0; i < schedule.num_commands(); ++i) {
    try {
      CommandSample c = NextCommand(dataset, coarse_map, base_pose, rng, opt);
      c.issue_time = schedule.IssueTime(i);
      out.push_back(c);
    } catch (const CommandSamplingError& e) {
      throw CommandSamplingError("command " + std::to_string(i) + " at t=" +
                                     FormatDouble(schedule.IssueTime(i)) + " s: " + e.what(),
                                 e.last_rejected());
    }
  }
  return out;
}

std::string SerializeCommands(const std::vector<CommandSample>& commands) {
  json arr = json::array();
  for (const auto& c : commands) {
    arr.push_back({{"schema_version", kSchemaVersion},
                   {"target", json_util::PoseToJson(c.target)},
                   {"target_in_base", json_util::PoseToJson(c.target_in_base)},
                   {"source_index", c.source_index},
                   {"body_offset", json_util::PoseToJson(c.body_offset)},
                   {"resample_attempts", c.resample_attempts},
                   {"issue_time", c.issue_time},
                   {"base_pose", json_util::PoseToJson(c.base_pose)}});
  }
  return arr.dump(1);
}

std::vector<CommandSample> ParseCommands(const std::string& text) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("commands: malformed JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ValidationError("commands: expected a JSON array");
  std::vector<CommandSample> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "commands[" + std::to_string(i) + "]";
    const json& j = arr[i];
    json_util::CheckSchema(j, ctx);
    CommandSample c;
    c.target = json_util::PoseFromJson(json_util::Require(j, "target", ctx), ctx + ".target");
    c.target_in_base = json_util::PoseFromJson(json_util::Require(j, "target_in_base", ctx),
                                               ctx + ".target_in_base");
    c.body_offset = json_util::PoseFromJson(json_util::Require(j, "body_offset", ctx),
                                            ctx + ".body_offset");
    c.base_pose =
        json_util::PoseFromJson(json_util::Require(j, "base_pose", ctx), ctx + ".base_pose");
    c.source_index = static_cast<int>(
        json_util::NumberAt(json_util::Require(j, "source_index", ctx), ctx + ".source_index"));
    c.resample_attempts = static_cast<int>(json_util::NumberAt(
        json_util::Require(j, "resample_attempts", ctx), ctx + ".resample_attempts"));
    c.issue_time =
        json_util::NumberAt(json_util::Require(j, "issue_time", ctx), ctx + ".issue_time");
    out.push_back(c);
  }
  return out;
}

}  // namespace wbpose
