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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/QR>

#include "wbpose/pose_repr.h"

namespace wbpose {

CurriculumStep CurriculumUpdate(const CurriculumState& state, double pos,
                                double rot, Rng& rng) {
  if (!(pos >= 0.0) || !(rot >= 0.0)) {
    throw ValidationError("curriculum: episode errors must be non-negative");
  }
  if (state.max_level < 0 || state.level < 0 || state.level > state.max_level) {
    throw ValidationError("curriculum: level outside [0, max_level]");
  }
  CurriculumStep out;
  out.state = state;
  out.state.history.push_back({pos, rot});
  if (pos < kPromotePosition && rot < kPromoteRotation) {
    if (state.level >= state.max_level) {
      out.state.level = static_cast<int>(rng.UniformInt(state.max_level + 1));
      out.transition = CurriculumTransition::kReassign;
    } else {
      out.state.level = state.level + 1;
      out.transition = CurriculumTransition::kPromote;
    }
  } else if (pos > kDemotePosition && rot > kDemoteRotation) {
    out.state.level = std::max(0, state.level - 1);
    out.transition = CurriculumTransition::kDemote;
  }
  return out;
}

std::string_view TransitionName(CurriculumTransition t) {
  switch (t) {
    case CurriculumTransition::kHold:
      return "hold";
    case CurriculumTransition::kPromote:
      return "promote";
    case CurriculumTransition::kDemote:
      return "demote";
    case CurriculumTransition::kReassign:
      return "reassign";
  }
  return "unknown";
}

double LevelDifficulty(int level, int max_level) {
  if (max_level <= 0) return 0.0;
  return static_cast<double>(level) / max_level;
}

EpisodeErrors MeanActiveErrors(const std::vector<double>& pos,
                               const std::vector<double>& rot,
                               const std::vector<bool>& active) {
  if (pos.size() != rot.size() || pos.size() != active.size()) {
    throw ValidationError("episode error traces differ in length");
  }
  EpisodeErrors e;
  int n = 0;
  for (size_t i = 0; i < pos.size(); ++i) {
    if (!active[i]) continue;
    e.position += pos[i];
    e.rotation += rot[i];
    ++n;
  }
  if (n == 0) throw ValidationError("episode has no reward-active steps");
  e.position /= n;
  e.rotation /= n;
  return e;
}

double TiltAngleDeg(const SE3Pose& base) {
  return RadToDeg(std::acos(std::clamp(base.rotation()(2, 2), -1.0, 1.0)));
}

std::array<double, kNumFeet> FootGaps(const RobotModel& model,
                                      const TerrainField& terrain,
                                      const SE3Pose& base, const JointVector& q) {
  const auto feet = FootPositions(model, base.ToIsometry(), q);
  std::array<double, kNumFeet> gaps{};
  for (int f = 0; f < kNumFeet; ++f) {
    if (!terrain.Contains(feet[f].x(), feet[f].y())) {
      gaps[f] = std::numeric_limits<double>::infinity();
      continue;
    }
    gaps[f] = feet[f].z() - model.foot_radius(f) -
              terrain.HeightAt(feet[f].x(), feet[f].y());
  }
  return gaps;
}

bool StanceIsStable(const RobotModel& model, const TerrainField& terrain,
                    const SE3Pose& base, const JointVector& q,
                    const StanceOptions& opt) {
  if (!(TiltAngleDeg(base) < opt.max_tilt_deg)) return false;
  for (double g : FootGaps(model, terrain, base, q)) {
    if (!(std::abs(g) <= opt.foot_tolerance)) return false;
  }
  return true;
}

namespace {

struct LegGeometry {
  Eigen::Vector3d haa;   // HAA origin in the base frame
  Eigen::Vector3d hfe;   // HFE origin in the hip frame
  Eigen::Vector3d kfe;   // KFE origin in the thigh frame
  Eigen::Vector3d foot;  // foot origin in the shank frame
};

LegGeometry LegOf(const RobotModel& model, int foot) {
  const auto& chain = model.chain_links(model.foot_link_ids()[foot]);
  if (chain.size() != 5) {
    throw ValidationError("leg IK expects base, hip, thigh, shank and foot links");
  }
  const Eigen::Vector3d axes[3] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                   Eigen::Vector3d::UnitY()};
  Eigen::Vector3d origin[4];
  for (int i = 0; i < 4; ++i) {
    const Link& l = model.link(chain[i + 1]);
    if (!l.parent_to_joint.rotation().isIdentity(1e-9)) {
      throw ValidationError("leg IK requires unrotated joint origins on " + l.name);
    }
    if (i < 3 && (l.joint_type != JointType::kRevolute || !l.axis.isApprox(axes[i], 1e-9))) {
      throw ValidationError("leg IK requires HAA about x and HFE/KFE about y on " + l.name);
    }
    origin[i] = l.parent_to_joint.translation();
  }
  return {origin[0], origin[1], origin[2], origin[3]};
}

std::complex<double> Xz(const Eigen::Vector3d& v) { return {v.z(), v.x()}; }

}  // namespace

std::optional<Eigen::Vector3d> SolveLegIk(const RobotModel& model, int foot,
                                          const Eigen::Vector3d& target,
                                          const Eigen::Vector3d& reference) {
  const LegGeometry g = LegOf(model, foot);
  const Eigen::Vector3d p = target - g.haa;
  const double w = g.hfe.y() + g.kfe.y() + g.foot.y();
  const double rho2 = p.y() * p.y() + p.z() * p.z();
  if (rho2 < w * w) return std::nullopt;
  const double m_yz = std::sqrt(rho2 - w * w);
  std::optional<Eigen::Vector3d> best;
  double best_dist = std::numeric_limits<double>::infinity();
  // Foot below (usual) or above the HAA axis in the hip frame.
  for (double fz : {-m_yz, m_yz}) {
    const double q1 = WrapAngle(std::atan2(p.z(), p.y()) - std::atan2(fz, w));

    // Planar two-link problem in the hip frame, with c = z + i x so that a
    // rotation about y by theta multiplies by exp(i theta).
    const std::complex<double> t = std::complex<double>(fz, p.x()) - Xz(g.hfe);
    const std::complex<double> a = Xz(g.kfe);
    const std::complex<double> b = Xz(g.foot);
    const std::complex<double> ab = std::conj(a) * b;
    const double m = std::abs(ab);
    if (m < 1e-12) return std::nullopt;
    const double cos_arg = (std::norm(t) - std::norm(a) - std::norm(b)) / (2.0 * m);
    if (cos_arg < -1.0 || cos_arg > 1.0) continue;
    const double phi = std::arg(ab);
    const double base_angle = std::acos(cos_arg);

    for (double sign : {1.0, -1.0}) {
      const double q3 = WrapAngle(sign * base_angle - phi);
      const double q2 = WrapAngle(std::arg(t) - std::arg(a + std::polar(1.0, q3) * b));
      const Eigen::Vector3d sol(q1, q2, q3);
      bool ok = true;
      for (int j = 0; j < 3; ++j) {
        const JointLimit& lim = model.joint_limits()[3 * foot + j];
        ok = ok && sol[j] >= lim.lower && sol[j] <= lim.upper;
      }
      if (!ok) continue;
      const double d = (sol - reference).squaredNorm();
      if (d < best_dist) {
        best_dist = d;
        best = sol;
      }
    }
  }
  return best;
}

namespace {

// One stance attempt from a nominal joint configuration.
std::optional<InitialConfiguration> TryStance(const RobotModel& model,
                                              const TerrainField& terrain,
                                              const Eigen::Vector2d& xy, double yaw,
                                              const JointVector& nominal,
                                              const StanceOptions& opt) {
  const auto nominal_feet = FootPositions(model, Eigen::Isometry3d::Identity(), nominal);
  double mean_z = 0.0;
  double mean_r = 0.0;
  for (int f = 0; f < kNumFeet; ++f) {
    mean_z += nominal_feet[f].z() / kNumFeet;
    mean_r += model.foot_radius(f) / kNumFeet;
  }
  const double height = mean_r - mean_z;
  const Eigen::Matrix3d rz = RotationFromRpy(0.0, 0.0, yaw);

  Eigen::Matrix<double, kNumFeet, 3> a;
  Eigen::Matrix<double, kNumFeet, 1> h;
  for (int f = 0; f < kNumFeet; ++f) {
    const Eigen::Vector2d fxy = xy + (rz * nominal_feet[f]).head<2>();
    if (!terrain.Contains(fxy.x(), fxy.y())) return std::nullopt;
    a.row(f) << 1.0, fxy.x(), fxy.y();
    h[f] = terrain.HeightAt(fxy.x(), fxy.y());
  }
  const Eigen::Vector3d plane = a.colPivHouseholderQr().solve(h);
  const Eigen::Vector3d normal = Eigen::Vector3d(-plane[1], -plane[2], 1.0).normalized();
  const Eigen::Matrix3d tilt =
      Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), normal).toRotationMatrix();
  const Eigen::Vector3d on_plane(xy.x(), xy.y(), plane[0] + plane[1] * xy.x() + plane[2] * xy.y());
  const SE3Pose base(on_plane + height * normal, tilt * rz);

  InitialConfiguration ic;
  ic.base = base;
  ic.q = nominal;
  const SE3Pose base_inv = base.Inverse();
  for (int f = 0; f < kNumFeet; ++f) {
    Eigen::Vector3d wp = base * nominal_feet[f];
    if (!terrain.Contains(wp.x(), wp.y())) return std::nullopt;
    wp.z() = terrain.HeightAt(wp.x(), wp.y()) + model.foot_radius(f);
    const auto sol = SolveLegIk(model, f, base_inv * wp, nominal.segment<3>(3 * f));
    if (!sol) return std::nullopt;
    ic.q.segment<3>(3 * f) = *sol;
  }
  ic.tilt_angle = TiltAngleDeg(base);
  ic.terrain_kind = terrain.kind();
  ic.terrain_seed = terrain.seed();
  if (!StanceIsStable(model, terrain, ic.base, ic.q, opt)) return std::nullopt;
  return ic;
}

}  // namespace

std::optional<InitialConfiguration> StanceAt(const RobotModel& model,
                                             const TerrainField& terrain,
                                             const Eigen::Vector2d& xy, double yaw,
                                             const StanceOptions& opt) {
  auto ic = TryStance(model, terrain, xy, yaw, model.default_config(), opt);
  if (ic) ic->attempts = 1;
  return ic;
}

InitialConfiguration GenerateInitialConfiguration(const RobotModel& model,
                                                  const TerrainField& terrain,
                                                  Rng& rng, const StanceOptions& opt) {
  if (opt.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
  const Eigen::Vector2d lo = terrain.origin().array() + opt.border_margin;
  const Eigen::Vector2d hi = terrain.max_corner().array() - opt.border_margin;
  if (!(lo.x() < hi.x() && lo.y() < hi.y())) {
    throw ValidationError("terrain is too small for the stance border margin");
  }
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    const Eigen::Vector2d xy(rng.Uniform(lo.x(), hi.x()), rng.Uniform(lo.y(), hi.y()));
    const double yaw = rng.Uniform(-kPi, kPi);
    JointVector nominal = model.default_config();
    for (int i = 0; i < kNumLegJoints; ++i) {
      nominal[i] += rng.Uniform(-opt.leg_perturbation, opt.leg_perturbation);
    }
    for (int i = kNumLegJoints; i < kNumJoints; ++i) {
      nominal[i] += rng.Uniform(-opt.arm_perturbation, opt.arm_perturbation);
    }
    nominal = model.ClampToLimits(nominal);
    auto ic = TryStance(model, terrain, xy, yaw, nominal, opt);
    if (ic) {
      ic->attempts = attempt;
      return *ic;
    }
  }
  throw NumericalError("no stable stance found on " +
                       std::string(TerrainKindName(terrain.kind())) + " terrain after " +
                       std::to_string(opt.max_attempts) + " attempts");
}

}  // namespace wbpose
