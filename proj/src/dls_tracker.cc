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

#include "wbpose/dls_tracker.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Cholesky>

#include "json_util.h"
#include "wbpose/collision.h"

namespace wbpose {

using json_util::json;

void TrackerConfig::Validate() const {
  if (!(damping > 0.0)) throw ValidationError("tracker: damping must be > 0");
  if (!(step_scale > 0.0 && step_scale <= 1.0)) {
    throw ValidationError("tracker: step_scale must lie in (0, 1]");
  }
  if (!(tolerance > 0.0)) throw ValidationError("tracker: tolerance must be > 0");
  if (max_iterations < 0) throw ValidationError("tracker: max_iterations must be >= 0");
  if (!(foot_weight >= 0.0) || !(posture_weight >= 0.0)) {
    throw ValidationError("tracker: task weights must be >= 0");
  }
}

TrackerConfig ParseTrackerConfig(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("tracker config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("tracker config: expected an object");
  TrackerConfig c;
  for (const auto& [key, value] : j.items()) {
    const std::string ctx = "tracker config." + key;
    if (key == "schema_version") continue;
    if (key == "damping") {
      c.damping = json_util::NumberAt(value, ctx);
    } else if (key == "step_scale") {
      c.step_scale = json_util::NumberAt(value, ctx);
    } else if (key == "max_iterations") {
      c.max_iterations = static_cast<int>(json_util::NumberAt(value, ctx));
    } else if (key == "tolerance") {
      c.tolerance = json_util::NumberAt(value, ctx);
    } else if (key == "foot_weight") {
      c.foot_weight = json_util::NumberAt(value, ctx);
    } else if (key == "posture_weight") {
      c.posture_weight = json_util::NumberAt(value, ctx);
    } else {
      throw ValidationError("tracker config: unknown key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

TrackerConfig LoadTrackerConfig(const std::filesystem::path& path) {
  return ParseTrackerConfig(ReadFile(path));
}

StackedTask BuildStackedTask(const RobotModel& model, const SE3Pose& base,
                             const JointVector& q,
                             const std::array<Eigen::Vector3d, kNumFeet>& anchor,
                             const KeypointTriple& target, const JointVector& q_posture,
                             const TrackerConfig& cfg) {
  StackedTask t;
  t.jacobian.setZero();
  t.error.setZero();
  const auto tf = LinkTransforms(model, base.ToIsometry(), q);
  int row = 0;
  for (int f = 0; f < kNumFeet; ++f) {
    const int link = model.foot_link_ids()[f];
    const Eigen::Vector3d p = tf[link].translation();
    t.jacobian.middleRows<3>(row) = cfg.foot_weight * PointJacobian(model, tf, link, p);
    t.error.segment<3>(row) = cfg.foot_weight * (anchor[f] - p);
    row += 3;
  }
  const int ee = model.ee_link_id();
  const KeypointTriple meas = KeypointsOf(SE3Pose(tf[ee]));
  double kp2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    t.jacobian.middleRows<3>(row) = PointJacobian(model, tf, ee, meas[k]);
    const Eigen::Vector3d e = target[k] - meas[k];
    t.error.segment<3>(row) = e;
    kp2 += e.squaredNorm();
    row += 3;
  }
  t.keypoint_error = std::sqrt(kp2);
  // Posture rows on the legs only; arm rows stay zero so the arm can reach
  // the target exactly.
  for (int i = 0; i < kNumLegJoints; ++i) {
    t.jacobian(row + i, 6 + i) = cfg.posture_weight;
    t.error[row + i] = cfg.posture_weight * (q_posture[i] - q[i]);
  }
  return t;
}

DecisionVector DlsStep(const StackedTask& t, double damping) {
  // J^T (J J^T + l^2 I)^-1 e == (J^T J + l^2 I)^-1 J^T e; the normal-equation
  // side is the smaller system here.
  Eigen::Matrix<double, kDecisionSize, kDecisionSize> h = t.jacobian.transpose() * t.jacobian;
  h.diagonal().array() += damping * damping;
  return h.ldlt().solve(t.jacobian.transpose() * t.error);
}

namespace {

// DLS step with joints that sit on a limit and would be pushed past it
// removed from the problem.
DecisionVector ConstrainedStep(const RobotModel& model, StackedTask task,
                               const JointVector& q, double damping) {
  constexpr double kAtLimit = 1e-9;
  std::array<bool, kNumJoints> locked{};
  DecisionVector dx = DlsStep(task, damping);
  for (int pass = 0; pass < kNumJoints; ++pass) {
    bool changed = false;
    for (int i = 0; i < kNumJoints; ++i) {
      const JointLimit& lim = model.joint_limits()[i];
      const double d = dx[6 + i];
      if (locked[i]) continue;
      if ((q[i] >= lim.upper - kAtLimit && d > 0.0) ||
          (q[i] <= lim.lower + kAtLimit && d < 0.0)) {
        task.jacobian.col(6 + i).setZero();
        locked[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
    dx = DlsStep(task, damping);
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (locked[i]) dx[6 + i] = 0.0;
  }
  return dx;
}

// Largest fraction of `dx` that keeps every joint within its limits.
double LimitFraction(const RobotModel& model, const JointVector& q,
                     const DecisionVector& dx) {
  double frac = 1.0;
  for (int i = 0; i < kNumJoints; ++i) {
    const JointLimit& lim = model.joint_limits()[i];
    const double d = dx[6 + i];
    if (d > 0.0 && q[i] + d > lim.upper) frac = std::min(frac, (lim.upper - q[i]) / d);
    if (d < 0.0 && q[i] + d < lim.lower) frac = std::min(frac, (lim.lower - q[i]) / d);
  }
  return std::max(0.0, frac);
}

}  // namespace

void ApplyStep(const RobotModel& model, const DecisionVector& dx, SE3Pose& base,
               JointVector& q) {
  const Eigen::Vector3d w = dx.segment<3>(3);
  Eigen::Matrix3d r = base.rotation();
  const double angle = w.norm();
  if (angle > 0.0) r = Eigen::AngleAxisd(angle, w / angle).toRotationMatrix() * r;
  base = SE3Pose(base.position() + dx.head<3>(), r);
  q = model.ClampToLimits(q + dx.tail<kNumJoints>());
}

TrackingResult TrackCommand(const RobotModel& model, const InitialConfiguration& init,
                            const CommandSample& command, const TrackerConfig& cfg) {
  cfg.Validate();
  TrackingResult r;
  SE3Pose base = init.base;
  JointVector q = init.q;
  const auto anchor = FootPositions(model, base.ToIsometry(), q);
  const KeypointTriple target = KeypointsOf(command.target);

  for (int it = 0;; ++it) {
    const StackedTask task = BuildStackedTask(model, base, q, anchor, target, init.q, cfg);
    if (!std::isfinite(task.keypoint_error) || !task.jacobian.allFinite() ||
        !task.error.allFinite()) {
      throw NumericalError("tracker: non-finite task at iteration " + std::to_string(it));
    }
    r.joint_trajectory.push_back(q);
    r.base_trajectory.push_back(base);
    r.keypoint_errors.push_back(task.keypoint_error);
    if (it == 0) r.initial_keypoint_error = task.keypoint_error;
    r.iterations = it;
    if (task.keypoint_error <= cfg.tolerance) {
      r.converged = true;
      break;
    }
    if (it >= cfg.max_iterations) break;
    DecisionVector dx = cfg.step_scale * ConstrainedStep(model, task, q, cfg.damping);
    dx *= LimitFraction(model, q, dx);
    if (!dx.allFinite()) {
      throw NumericalError("tracker: non-finite step at iteration " + std::to_string(it));
    }
    ApplyStep(model, dx, base, q);
  }

  r.final_keypoint_error = r.keypoint_errors.back();
  const auto tf = LinkTransforms(model, base.ToIsometry(), q);
  r.final_errors = ComputePoseErrors(SE3Pose(tf[model.ee_link_id()]), command.target);
  for (int f = 0; f < kNumFeet; ++f) {
    const double d = (tf[model.foot_link_ids()[f]].translation() - anchor[f]).norm();
    r.max_foot_displacement = std::max(r.max_foot_displacement, d);
  }
  r.self_collision = SelfCollision(model, tf).colliding;
  r.within_limits = model.WithinLimits(q, 1e-12);
  return r;
}

std::vector<TrackingResult> EvaluateBatch(const RobotModel& model,
                                          const std::vector<InitialConfiguration>& inits,
                                          const std::vector<CommandSample>& commands,
                                          const TrackerConfig& cfg, int num_threads) {
  if (inits.size() != commands.size()) {
    throw ValidationError("batch: one initial configuration per command is required");
  }
  cfg.Validate();
  std::vector<TrackingResult> results(commands.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < commands.size(); i = next++) {
      try {
        results[i] = TrackCommand(model, inits[i], commands[i], cfg);
      } catch (const std::exception& e) {
        results[i] = TrackingResult{};
        results[i].failure = e.what();
      }
    }
  };
  int threads = num_threads > 0
                    ? num_threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::max(1, std::min<int>(threads, static_cast<int>(commands.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

namespace {

double Percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * (v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(v.size() - 1, lo + 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

BatchSummary Summarize(const std::vector<TrackingResult>& results) {
  BatchSummary s;
  s.count = static_cast<int>(results.size());
  std::vector<double> pos;
  std::vector<double> rot;
  double iters = 0.0;
  for (size_t i = 0; i < results.size(); ++i) {
    const TrackingResult& r = results[i];
    if (!r.failure.empty()) {
      s.failures.push_back(static_cast<int>(i));
      continue;
    }
    if (r.converged) {
      ++s.converged;
    } else {
      s.failures.push_back(static_cast<int>(i));
    }
    pos.push_back(r.final_errors.position);
    rot.push_back(r.final_errors.orientation);
    iters += r.iterations;
    s.max_iterations = std::max(s.max_iterations, r.iterations);
  }
  if (s.count > 0) s.convergence_rate = static_cast<double>(s.converged) / s.count;
  if (!pos.empty()) {
    for (double v : pos) s.mean_position_error += v / pos.size();
    for (double v : rot) s.mean_rotation_error += v / rot.size();
    s.mean_iterations = iters / pos.size();
  }
  s.median_position_error = Percentile(pos, 0.5);
  s.p95_position_error = Percentile(pos, 0.95);
  s.median_rotation_error = Percentile(rot, 0.5);
  s.p95_rotation_error = Percentile(rot, 0.95);
  return s;
}

}  // namespace wbpose
