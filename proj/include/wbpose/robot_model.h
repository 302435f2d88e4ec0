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

#ifndef WBPOSE_ROBOT_MODEL_H_
#define WBPOSE_ROBOT_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "wbpose/se3.h"

namespace wbpose {

inline constexpr int kNumJoints = 18;
inline constexpr int kNumLegJoints = 12;
inline constexpr int kNumArmJoints = 6;
inline constexpr int kNumFeet = 4;

// Joint angles ordered LF, RF, LH, RH legs (HAA, HFE, KFE each) followed by
// the six arm joints from base to wrist.
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

enum class JointType { kFixed, kRevolute };

struct Link {
  std::string name;
  int parent = -1;  // -1 only for the floating base.
  std::string joint_name;
  JointType joint_type = JointType::kFixed;
  Eigen::Isometry3d parent_to_joint = Eigen::Isometry3d::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  int joint_index = -1;  // index into JointVector, -1 for fixed links.
};

struct JointLimit {
  double lower = 0.0;
  double upper = 0.0;
};

// Capsule around a segment of length 2 * half_length centered at `offset`
// along `axis`, in link coordinates. A sphere is a capsule with zero length.
struct CollisionPrimitive {
  int link = -1;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double half_length = 0.0;
  double radius = 0.0;
};

class RobotModel {
 public:
  const std::string& name() const { return name_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(int i) const { return links_.at(i); }
  int num_links() const { return static_cast<int>(links_.size()); }
  // Parents precede children in this order.
  const std::vector<int>& topological_order() const { return topo_order_; }

  const std::array<JointLimit, kNumJoints>& joint_limits() const {
    return limits_;
  }
  const std::array<std::string, kNumJoints>& joint_names() const {
    return joint_names_;
  }
  const JointVector& default_config() const { return default_config_; }
  const std::vector<CollisionPrimitive>& collision_primitives() const {
    return primitives_;
  }
  // Link pairs (a < b) skipped by self-collision: parent-child pairs plus the
  // description's exclusion list.
  const std::vector<std::pair<int, int>>& excluded_pairs() const {
    return excluded_;
  }
  // Primitive index pairs that self-collision actually tests.
  const std::vector<std::pair<int, int>>& candidate_pairs() const {
    return candidates_;
  }
  bool IsExcluded(int link_a, int link_b) const;

  const std::array<int, kNumFeet>& foot_link_ids() const { return feet_; }
  int ee_link_id() const { return ee_link_; }
  int base_link_id() const { return base_link_; }
  // Radius of the first sphere/capsule attached to each foot link, 0 if none.
  double foot_radius(int foot) const { return foot_radius_.at(foot); }

  // Joint indices on the path from the base to `link`, base side first.
  const std::vector<int>& chain_joints(int link) const {
    return chain_joints_.at(link);
  }
  // Links on the path from the base to `link`, inclusive, base first.
  const std::vector<int>& chain_links(int link) const {
    return chain_links_.at(link);
  }

  int FindLink(const std::string& name) const;
  bool WithinLimits(const JointVector& q, double tol = 0.0) const;
  JointVector ClampToLimits(const JointVector& q) const;

  // Content hash of the description this model was loaded from.
  std::uint64_t content_hash() const { return content_hash_; }

 private:
  friend RobotModel ParseRobotDescription(const std::string& json_text);

  std::string name_;
  std::vector<Link> links_;
  std::vector<int> topo_order_;
  std::array<JointLimit, kNumJoints> limits_{};
  std::array<std::string, kNumJoints> joint_names_;
  JointVector default_config_ = JointVector::Zero();
  std::vector<CollisionPrimitive> primitives_;
  std::vector<std::pair<int, int>> excluded_;
  std::vector<std::pair<int, int>> candidates_;
  std::array<int, kNumFeet> feet_{};
  std::array<double, kNumFeet> foot_radius_{};
  int ee_link_ = -1;
  int base_link_ = -1;
  std::vector<std::vector<int>> chain_joints_;
  std::vector<std::vector<int>> chain_links_;
  std::uint64_t content_hash_ = 0;
};

// Parses and validates a robot description document. Throws ValidationError
// naming the offending field path.
RobotModel ParseRobotDescription(const std::string& json_text);
RobotModel LoadRobot(const std::filesystem::path& description_file);

// Path of the bundled ALMA-like description (set at configure time).
std::filesystem::path DefaultRobotPath();
RobotModel LoadDefaultRobot();

// World transform of every link, indexed like RobotModel::links().
std::vector<Eigen::Isometry3d> LinkTransforms(const RobotModel& model,
                                              const Eigen::Isometry3d& base,
                                              const JointVector& q);

std::vector<SE3Pose> ForwardKinematics(const RobotModel& model,
                                       const SE3Pose& base,
                                       const JointVector& q);

// End-effector pose relative to the base link.
SE3Pose EePoseInBase(const RobotModel& model, const JointVector& q);

// World positions of the four foot link origins.
std::array<Eigen::Vector3d, kNumFeet> FootPositions(
    const RobotModel& model, const Eigen::Isometry3d& base,
    const JointVector& q);

// 3 x (6 + 18) Jacobian of a world point rigidly attached to `link`, with
// respect to [base translation, base rotation increment (world frame),
// joints]. The base rotation increment is applied as R <- exp(w) R.
Eigen::Matrix<double, 3, 6 + kNumJoints> PointJacobian(
    const RobotModel& model, const std::vector<Eigen::Isometry3d>& transforms,
    int link, const Eigen::Vector3d& point_world);

}  // namespace wbpose

#endif  // WBPOSE_ROBOT_MODEL_H_
