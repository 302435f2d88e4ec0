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

#include "wbpose/reward_engine.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_util.h"

namespace wbpose {

using json_util::json;

void RewardWeights::Validate() const {
  if (!(w1 > 0 && w2 > 0 && w3 > 0 && w4 > 0)) {
    throw ValidationError("reward weights: w1..w4 must be positive");
  }
  if (!(w5 < 0 && w6 < 0 && w7 < 0 && w8 < 0)) {
    throw ValidationError("reward weights: w5..w8 must be negative");
  }
  if (!(sigma_t > 0 && sigma_q > 0 && sigma_t_alt > 0)) {
    throw ValidationError("reward weights: sigmas must be positive");
  }
}

RewardWeights ParseRewardWeights(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("reward weights: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("reward weights: expected an object");
  RewardWeights w;
  const std::map<std::string, double*> fields = {
      {"w1", &w.w1}, {"w2", &w.w2}, {"w3", &w.w3}, {"w4", &w.w4},
      {"w5", &w.w5}, {"w6", &w.w6}, {"w7", &w.w7}, {"w8", &w.w8},
      {"sigma_t", &w.sigma_t}, {"sigma_q", &w.sigma_q},
      {"sigma_t_alt", &w.sigma_t_alt}};
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") continue;
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw ValidationError("reward weights: unknown key '" + key + "'");
    }
    *it->second = json_util::NumberAt(value, "reward weights." + key);
  }
  w.Validate();
  return w;
}

RewardWeights LoadRewardWeights(const std::filesystem::path& path) {
  return ParseRewardWeights(ReadFile(path));
}

Eigen::Vector3d KeypointDistances(const KeypointTriple& m, const KeypointTriple& c) {
  return {(m[0] - c[0]).norm(), (m[1] - c[1]).norm(), (m[2] - c[2]).norm()};
}

double TrackingReward(const StepState& s, const RewardWeights& w,
                      const EpisodeSchedule& schedule) {
  if (s.time_in_command <= schedule.command_period() - schedule.reward_window()) {
    return 0.0;
  }
  const Eigen::Vector3d d = KeypointDistances(s.measured, s.command);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) sum += std::exp(-d[k] / w.sigma_t);
  return sum / schedule.reward_window();
}

ProgressResult ProgressReward(const StepState& s, ProgressMode mode) {
  const Eigen::Vector3d dt = KeypointDistances(s.measured, s.command);
  const Eigen::Vector3d& d = s.best_distances;
  bool improved = false;
  if (mode == ProgressMode::kComponentwise) {
    improved = (dt.array() < d.array()).all();
  } else {
    improved = dt.sum() < d.sum();
  }
  ProgressResult r;
  r.improved = improved;
  if (improved) {
    r.reward = (d - dt).sum() / 3.0;
    r.best_distances = dt;
  } else {
    r.best_distances = d;
  }
  return r;
}

double FeetContactReward(const StepState& s) {
  for (int i = 0; i < kNumFeet; ++i) {
    if (s.foot_forces[i] < 0.0 || !std::isfinite(s.foot_forces[i])) {
      throw ValidationError("foot force " + std::to_string(i) +
                            " must be a finite non-negative value");
    }
  }
  for (double f : s.foot_forces) {
    if (f <= 1.0) return 0.0;
  }
  double sum = 0.0;
  for (double f : s.foot_forces) sum += std::max(f - 1.0, 0.0);
  return sum;
}

double InitialJointReward(const StepState& s, const RewardWeights& w) {
  double sum = 0.0;
  for (int i = 0; i < kNumLegJoints; ++i) {
    sum += std::exp(-std::abs(s.q_init[i] - s.q[i]) / w.sigma_q);
  }
  return sum;
}

PenaltyTerms Penalties(const StepState& s, const RobotModel& model,
                       const RewardWeights& w) {
  PenaltyTerms p;
  p.torque = s.tau.squaredNorm();
  p.acceleration = s.qdd.squaredNorm();
  p.action_rate = (s.action - s.prev_action).squaredNorm();
  const JointVector target = ActionToTargets(s.action, model);
  for (int i = 0; i < kNumJoints; ++i) {
    const JointLimit& lim = model.joint_limits()[i];
    p.limit += std::max(0.0, target[i] - lim.upper) +
               std::max(0.0, lim.lower - target[i]);
  }
  p.weighted = w.w5 * p.torque + w.w6 * p.acceleration + w.w7 * p.action_rate +
               w.w8 * p.limit;
  return p;
}

RewardBreakdown TotalReward(const StepState& s, const RobotModel& model,
                            const RewardWeights& w,
                            const EpisodeSchedule& schedule, ProgressMode mode) {
  RewardBreakdown b;
  b.tracking = TrackingReward(s, w, schedule);
  const ProgressResult pr = ProgressReward(s, mode);
  b.progress = pr.reward;
  b.best_distances = pr.best_distances;
  b.feet_contact = FeetContactReward(s);
  b.initial_joint = InitialJointReward(s, w);
  b.penalty = Penalties(s, model, w);
  b.w_tracking = w.w1 * b.tracking;
  b.w_progress = w.w2 * b.progress;
  b.w_feet_contact = w.w3 * b.feet_contact;
  b.w_initial_joint = w.w4 * b.initial_joint;
  b.total = b.w_tracking + b.w_progress + b.w_feet_contact + b.w_initial_joint +
            b.penalty.weighted;
  return b;
}

AltErrors AltPoseErrors(PoseReprKind kind, const SE3Pose& measured,
                        const SE3Pose& command) {
  const Eigen::Quaterniond qm =
      DecodeOrientation(kind, EncodeOrientation(kind, measured.orientation()));
  const Eigen::Quaterniond qc =
      DecodeOrientation(kind, EncodeOrientation(kind, command.orientation()));
  AltErrors e;
  e.position = (command.position() - measured.position()).norm();
  e.rotation = QuaternionAngle(qm.conjugate() * qc);
  return e;
}

double AltTrackingReward(PoseReprKind kind, const SE3Pose& measured,
                         const SE3Pose& command, double time_in_command,
                         const RewardWeights& w,
                         const EpisodeSchedule& schedule) {
  if (time_in_command <= schedule.command_period() - schedule.reward_window()) {
    return 0.0;
  }
  const AltErrors e = AltPoseErrors(kind, measured, command);
  return std::exp(-(e.position + e.rotation) / w.sigma_t_alt) /
         schedule.reward_window();
}

AltProgressResult AltProgressReward(const AltErrors& cur, const AltErrors& best) {
  AltProgressResult r;
  if (cur.position < best.position && cur.rotation < best.rotation) {
    r.reward = (best.position - cur.position) + (best.rotation - cur.rotation);
    r.best = cur;
  } else {
    r.best = best;
  }
  return r;
}

Eigen::Matrix<double, kObservationSize, 1> BuildObservation(
    const RobotModel& model, const SE3Pose& base_pose,
    const Eigen::Matrix<double, 6, 1>& base_velocity, const JointVector& q,
    const JointVector& prev_action, const CommandSample& command,
    const ObservationNoise& noise, Rng* rng) {
  Eigen::Matrix<double, kObservationSize, 1> o;
  o.segment<3>(0) = base_pose.rotation().transpose() * Eigen::Vector3d(0, 0, -1);
  o.segment<6>(3) = base_velocity;
  o.segment<18>(9) = q;
  o.segment<18>(27) = prev_action;
  const SE3Pose measured = EePoseInBase(model, q);
  const SE3Pose cmd_in_base = base_pose.Inverse() * command.target;
  o.segment<9>(45) = EncodeDelta(PoseReprKind::kKeypoint, measured, cmd_in_base).payload;

  const double scales[5] = {noise.gravity, noise.velocity, noise.joint_position,
                            noise.action, noise.command};
  const int begin[6] = {0, 3, 9, 27, 45, kObservationSize};
  bool any = false;
  for (double sc : scales) any = any || sc != 0.0;
  if (any) {
    if (rng == nullptr) throw ValidationError("observation noise requires an rng");
    for (int g = 0; g < 5; ++g) {
      for (int i = begin[g]; i < begin[g + 1]; ++i) {
        o[i] += rng->Uniform(-scales[g], scales[g]);
      }
    }
  }
  return o;
}

JointVector ActionToTargets(const JointVector& action, const RobotModel& model) {
  return kActionScale * action + model.default_config();
}

JointVector TargetsToAction(const JointVector& targets, const RobotModel& model) {
  return (targets - model.default_config()) / kActionScale;
}

JointVector TorqueProxy(const JointVector& q_target, const JointVector& q,
                        const JointVector& qd, const PdGains& g) {
  JointVector tau;
  for (int i = 0; i < kNumJoints; ++i) {
    const bool leg = i < kNumLegJoints;
    tau[i] = (leg ? g.kp_leg : g.kp_arm) * (q_target[i] - q[i]) -
             (leg ? g.kd_leg : g.kd_arm) * qd[i];
  }
  return tau;
}

std::array<double, kNumFeet> FootContactProxy(
    const std::array<Eigen::Vector3d, kNumFeet>& feet, const RobotModel& model,
    const TerrainField& terrain, double total_weight) {
  std::array<bool, kNumFeet> contact{};
  int n = 0;
  for (int f = 0; f < kNumFeet; ++f) {
    if (!terrain.Contains(feet[f].x(), feet[f].y())) continue;
    const double gap = feet[f].z() - model.foot_radius(f) -
                       terrain.HeightAt(feet[f].x(), feet[f].y());
    contact[f] = std::abs(gap) <= kContactTolerance;
    n += contact[f] ? 1 : 0;
  }
  std::array<double, kNumFeet> forces{};
  for (int f = 0; f < kNumFeet; ++f) {
    forces[f] = contact[f] ? total_weight / n : 0.0;
  }
  return forces;
}

bool ShouldTerminate(const ContactFlags& c) {
  if (c.base) return true;
  for (bool k : c.knee) {
    if (k) return true;
  }
  return false;
}

void RandomizationConfig::Validate() const {
  auto ordered = [](double lo, double hi, const char* what) {
    if (!(lo <= hi)) {
      throw ValidationError(std::string("randomization: ") + what + " range is not ordered");
    }
  };
  ordered(ee_mass_lower, ee_mass_upper, "ee_mass");
  ordered(impulse_force_lower, impulse_force_upper, "impulse_force");
  ordered(impulse_interval_lower, impulse_interval_upper, "impulse_interval");
  ordered(push_velocity_lower, push_velocity_upper, "push_velocity");
  if (ee_mass_lower < 0.0) throw ValidationError("randomization: negative ee mass");
  const double s[5] = {noise.gravity, noise.velocity, noise.joint_position,
                       noise.action, noise.command};
  for (double v : s) {
    if (v < 0.0) throw ValidationError("randomization: negative noise scale");
  }
}

}  // namespace wbpose
