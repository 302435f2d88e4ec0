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

#include "wbpose/robot_model.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wbpose/common.h"

#ifndef WBPOSE_DATA_DIR
#define WBPOSE_DATA_DIR "data"
#endif

namespace wbpose {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ValidationError("robot description: " + path + ": " + what);
}

const json& Field(const json& obj, const std::string& key,
                  const std::string& path) {
  if (!obj.is_object()) Fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(path + "." + key, "missing required field");
  return *it;
}

double Number(const json& j, const std::string& path) {
  if (!j.is_number()) Fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) Fail(path, "expected a finite number");
  return v;
}

std::string String(const json& j, const std::string& path) {
  if (!j.is_string()) Fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::Vector3d Vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) Fail(path, "expected array of 3 numbers");
  return {Number(j[0], path + "[0]"), Number(j[1], path + "[1]"),
          Number(j[2], path + "[2]")};
}

const json& Array(const json& obj, const std::string& key,
                  const std::string& path) {
  const json& a = Field(obj, key, path);
  if (!a.is_array()) Fail(path + "." + key, "expected an array");
  return a;
}

struct JointSpec {
  JointType type = JointType::kFixed;
  Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  int order = -1;  // position among revolute joints
  bool used = false;
};

}  // namespace

bool RobotModel::IsExcluded(int link_a, int link_b) const {
  const std::pair<int, int> key{std::min(link_a, link_b),
                                std::max(link_a, link_b)};
  return std::binary_search(excluded_.begin(), excluded_.end(), key);
}

int RobotModel::FindLink(const std::string& name) const {
  for (int i = 0; i < num_links(); ++i) {
    if (links_[i].name == name) return i;
  }
  return -1;
}

bool RobotModel::WithinLimits(const JointVector& q, double tol) const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < limits_[i].lower - tol || q[i] > limits_[i].upper + tol) {
      return false;
    }
  }
  return true;
}

JointVector RobotModel::ClampToLimits(const JointVector& q) const {
  JointVector out = q;
  for (int i = 0; i < kNumJoints; ++i) {
    out[i] = std::clamp(out[i], limits_[i].lower, limits_[i].upper);
  }
  return out;
}

RobotModel ParseRobotDescription(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("robot description: parse error: ") +
                          e.what());
  }
  if (!doc.is_object()) Fail("$", "expected a JSON object");

  RobotModel model;
  model.content_hash_ = Fnv1a64(json_text);
  model.name_ = doc.contains("name") ? String(doc["name"], "name") : "robot";

  // Joints by name.
  std::map<std::string, JointSpec> joints;
  std::vector<std::string> actuated;
  const json& jarr = Array(doc, "joints", "$");
  for (std::size_t i = 0; i < jarr.size(); ++i) {
    const std::string path = "joints[" + std::to_string(i) + "]";
    const std::string name = String(Field(jarr[i], "name", path), path + ".name");
    if (joints.count(name)) Fail(path + ".name", "duplicate joint '" + name + "'");
    JointSpec spec;
    const std::string type = String(Field(jarr[i], "type", path), path + ".type");
    if (type == "revolute") {
      spec.type = JointType::kRevolute;
      const Eigen::Vector3d axis = Vec3(Field(jarr[i], "axis", path), path + ".axis");
      if (axis.norm() < 1e-12) Fail(path + ".axis", "axis must be non-zero");
      spec.axis = axis.normalized();
      spec.order = static_cast<int>(actuated.size());
      actuated.push_back(name);
    } else if (type != "fixed") {
      Fail(path + ".type", "expected 'revolute' or 'fixed', got '" + type + "'");
    }
    if (jarr[i].contains("origin")) {
      const json& origin = jarr[i]["origin"];
      const Eigen::Vector3d xyz =
          origin.contains("xyz") ? Vec3(origin["xyz"], path + ".origin.xyz")
                                 : Eigen::Vector3d::Zero();
      const Eigen::Vector3d rpy =
          origin.contains("rpy") ? Vec3(origin["rpy"], path + ".origin.rpy")
                                 : Eigen::Vector3d::Zero();
      spec.origin.linear() = RotationFromRpy(rpy.x(), rpy.y(), rpy.z());
      spec.origin.translation() = xyz;
    }
    joints[name] = spec;
  }
  if (static_cast<int>(actuated.size()) != kNumJoints) {
    Fail("joints", "expected exactly " + std::to_string(kNumJoints) +
                       " revolute joints, found " +
                       std::to_string(actuated.size()));
  }

  // Links.
  const json& larr = Array(doc, "links", "$");
  if (larr.empty()) Fail("links", "must not be empty");
  const int n = static_cast<int>(larr.size());
  model.links_.resize(n);
  std::map<std::string, int> link_ids;
  for (int i = 0; i < n; ++i) {
    const std::string path = "links[" + std::to_string(i) + "]";
    Link& link = model.links_[i];
    link.name = String(Field(larr[i], "name", path), path + ".name");
    if (link_ids.count(link.name)) Fail(path + ".name", "duplicate link '" + link.name + "'");
    link_ids[link.name] = i;
    const json& parent = Field(larr[i], "parent", path);
    if (!parent.is_number_integer()) Fail(path + ".parent", "expected an integer index");
    link.parent = parent.get<int>();
    if (link.parent < -1 || link.parent >= n) {
      Fail(path + ".parent", "index " + std::to_string(link.parent) + " out of range");
    }
    if (link.parent == i) Fail(path + ".parent", "link is its own parent");
    if (link.parent == -1) {
      if (model.base_link_ != -1) {
        Fail(path + ".parent", "second root link; only the floating base may have parent -1");
      }
      model.base_link_ = i;
      continue;
    }
    link.joint_name = String(Field(larr[i], "joint", path), path + ".joint");
    auto it = joints.find(link.joint_name);
    if (it == joints.end()) Fail(path + ".joint", "unknown joint '" + link.joint_name + "'");
    if (it->second.used) Fail(path + ".joint", "joint '" + link.joint_name + "' used by two links");
    it->second.used = true;
    link.joint_type = it->second.type;
    link.parent_to_joint = it->second.origin;
    link.axis = it->second.axis;
    link.joint_index = it->second.order;
  }
  if (model.base_link_ == -1) Fail("links", "no root link (parent -1)");
  for (const auto& [name, spec] : joints) {
    if (!spec.used) Fail("joints", "joint '" + name + "' is not attached to any link");
  }

  // Acyclicity; every chain must terminate at the base.
  model.chain_links_.assign(n, {});
  model.chain_joints_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    std::vector<int> chain;
    int cur = i;
    while (cur != -1) {
      if (static_cast<int>(chain.size()) > n) {
        Fail("links[" + std::to_string(i) + "].parent", "cyclic parent indices");
      }
      chain.push_back(cur);
      cur = model.links_[cur].parent;
    }
    std::reverse(chain.begin(), chain.end());
    model.chain_links_[i] = chain;
    for (int l : chain) {
      if (model.links_[l].joint_index >= 0) {
        model.chain_joints_[i].push_back(model.links_[l].joint_index);
      }
    }
  }
  model.topo_order_.resize(n);
  for (int i = 0; i < n; ++i) model.topo_order_[i] = i;
  std::stable_sort(model.topo_order_.begin(), model.topo_order_.end(),
                   [&](int a, int b) {
                     return model.chain_links_[a].size() <
                            model.chain_links_[b].size();
                   });

  // Limits and default configuration.
  const json& lim = Array(doc, "limits", "$");
  if (lim.size() != kNumJoints) {
    Fail("limits", "expected " + std::to_string(kNumJoints) + " entries, found " +
                       std::to_string(lim.size()));
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string path = "limits[" + std::to_string(i) + "]";
    const std::string joint = String(Field(lim[i], "joint", path), path + ".joint");
    if (joint != actuated[i]) {
      Fail(path + ".joint", "expected '" + actuated[i] + "' (actuated joint order), got '" + joint + "'");
    }
    model.joint_names_[i] = joint;
    model.limits_[i].lower = Number(Field(lim[i], "lower", path), path + ".lower");
    model.limits_[i].upper = Number(Field(lim[i], "upper", path), path + ".upper");
    if (!(model.limits_[i].lower < model.limits_[i].upper)) {
      Fail(path, "lower limit must be strictly below upper limit");
    }
  }
  const json& def = Array(doc, "default_config", "$");
  if (def.size() != kNumJoints) {
    Fail("default_config", "expected " + std::to_string(kNumJoints) + " values");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string path = "default_config[" + std::to_string(i) + "]";
    model.default_config_[i] = Number(def[i], path);
    if (!(model.default_config_[i] > model.limits_[i].lower &&
          model.default_config_[i] < model.limits_[i].upper)) {
      Fail(path, "default configuration must lie strictly inside joint limits");
    }
  }

  // Feet and end-effector.
  const json& feet = Array(doc, "feet", "$");
  if (feet.size() != kNumFeet) Fail("feet", "expected 4 foot links (LF, RF, LH, RH)");
  for (int f = 0; f < kNumFeet; ++f) {
    const std::string path = "feet[" + std::to_string(f) + "]";
    const std::string name = String(feet[f], path);
    auto it = link_ids.find(name);
    if (it == link_ids.end()) Fail(path, "unknown link '" + name + "'");
    model.feet_[f] = it->second;
    const std::vector<int> expected{3 * f, 3 * f + 1, 3 * f + 2};
    if (model.chain_joints_[it->second] != expected) {
      Fail(path, "leg joints must be ordered LF, RF, LH, RH with three joints each");
    }
  }
  {
    const std::string name = String(Field(doc, "end_effector", "$"), "end_effector");
    auto it = link_ids.find(name);
    if (it == link_ids.end()) Fail("end_effector", "unknown link '" + name + "'");
    model.ee_link_ = it->second;
    const std::vector<int> expected{12, 13, 14, 15, 16, 17};
    if (model.chain_joints_[it->second] != expected) {
      Fail("end_effector", "arm chain must consist of joints 12..17 in order");
    }
  }

  // Collision primitives.
  if (doc.contains("collision")) {
    const json& col = Array(doc, "collision", "$");
    for (std::size_t i = 0; i < col.size(); ++i) {
      const std::string path = "collision[" + std::to_string(i) + "]";
      CollisionPrimitive prim;
      const std::string link = String(Field(col[i], "link", path), path + ".link");
      auto it = link_ids.find(link);
      if (it == link_ids.end()) Fail(path + ".link", "unknown link '" + link + "'");
      prim.link = it->second;
      const std::string type = String(Field(col[i], "type", path), path + ".type");
      prim.offset = col[i].contains("offset") ? Vec3(col[i]["offset"], path + ".offset")
                                              : Eigen::Vector3d::Zero();
      prim.radius = Number(Field(col[i], "radius", path), path + ".radius");
      if (!(prim.radius > 0.0)) Fail(path + ".radius", "must be positive");
      if (type == "capsule") {
        const Eigen::Vector3d axis = Vec3(Field(col[i], "axis", path), path + ".axis");
        if (axis.norm() < 1e-12) Fail(path + ".axis", "axis must be non-zero");
        prim.axis = axis.normalized();
        prim.half_length = Number(Field(col[i], "half_length", path), path + ".half_length");
        if (prim.half_length < 0.0) Fail(path + ".half_length", "must be non-negative");
      } else if (type != "sphere") {
        Fail(path + ".type", "expected 'capsule' or 'sphere', got '" + type + "'");
      }
      model.primitives_.push_back(prim);
    }
  }
  for (int f = 0; f < kNumFeet; ++f) {
    model.foot_radius_[f] = 0.0;
    for (const auto& p : model.primitives_) {
      if (p.link == model.feet_[f]) {
        model.foot_radius_[f] = p.radius;
        break;
      }
    }
  }

  // Exclusions: parent-child pairs plus the listed ones.
  for (int i = 0; i < n; ++i) {
    const int p = model.links_[i].parent;
    if (p >= 0) model.excluded_.emplace_back(std::min(i, p), std::max(i, p));
  }
  if (doc.contains("collision_exclude")) {
    const json& ex = Array(doc, "collision_exclude", "$");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const std::string path = "collision_exclude[" + std::to_string(i) + "]";
      if (!ex[i].is_array() || ex[i].size() != 2) Fail(path, "expected a pair of link names");
      int ids[2];
      for (int k = 0; k < 2; ++k) {
        const std::string name = String(ex[i][k], path + "[" + std::to_string(k) + "]");
        auto it = link_ids.find(name);
        if (it == link_ids.end()) Fail(path, "unknown link '" + name + "'");
        ids[k] = it->second;
      }
      model.excluded_.emplace_back(std::min(ids[0], ids[1]), std::max(ids[0], ids[1]));
    }
  }
  std::sort(model.excluded_.begin(), model.excluded_.end());
  model.excluded_.erase(std::unique(model.excluded_.begin(), model.excluded_.end()),
                        model.excluded_.end());
  for (int a = 0; a < static_cast<int>(model.primitives_.size()); ++a) {
    for (int b = a + 1; b < static_cast<int>(model.primitives_.size()); ++b) {
      const int la = model.primitives_[a].link;
      const int lb = model.primitives_[b].link;
      if (la == lb || model.IsExcluded(la, lb)) continue;
      model.candidates_.emplace_back(a, b);
    }
  }
  return model;
}

RobotModel LoadRobot(const std::filesystem::path& description_file) {
  std::ifstream in(description_file);
  if (!in) {
    throw ValidationError("robot description: cannot open '" +
                          description_file.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRobotDescription(ss.str());
}

std::filesystem::path DefaultRobotPath() {
  if (const char* dir = std::getenv("WBPOSE_DATA_DIR")) {
    return std::filesystem::path(dir) / "alma_like.json";
  }
  return std::filesystem::path(WBPOSE_DATA_DIR) / "alma_like.json";
}

RobotModel LoadDefaultRobot() { return LoadRobot(DefaultRobotPath()); }

std::vector<Eigen::Isometry3d> LinkTransforms(const RobotModel& model,
                                              const Eigen::Isometry3d& base,
                                              const JointVector& q) {
  std::vector<Eigen::Isometry3d> out(model.num_links());
  for (int i : model.topological_order()) {
    const Link& link = model.link(i);
    if (link.parent < 0) {
      out[i] = base;
      continue;
    }
    Eigen::Isometry3d t = out[link.parent] * link.parent_to_joint;
    if (link.joint_type == JointType::kRevolute) {
      t.linear() = t.linear() *
                   Eigen::AngleAxisd(q[link.joint_index], link.axis).toRotationMatrix();
    }
    out[i] = t;
  }
  return out;
}

std::vector<SE3Pose> ForwardKinematics(const RobotModel& model,
                                       const SE3Pose& base,
                                       const JointVector& q) {
  const auto transforms = LinkTransforms(model, base.ToIsometry(), q);
  std::vector<SE3Pose> out;
  out.reserve(transforms.size());
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    // The base transform is returned verbatim rather than round-tripped
    // through a rotation matrix.
    if (static_cast<int>(i) == model.base_link_id()) {
      out.push_back(base);
    } else {
      out.emplace_back(transforms[i]);
    }
  }
  return out;
}

SE3Pose EePoseInBase(const RobotModel& model, const JointVector& q) {
  const auto transforms = LinkTransforms(model, Eigen::Isometry3d::Identity(), q);
  return SE3Pose(transforms[model.ee_link_id()]);
}

std::array<Eigen::Vector3d, kNumFeet> FootPositions(
    const RobotModel& model, const Eigen::Isometry3d& base,
    const JointVector& q) {
  const auto transforms = LinkTransforms(model, base, q);
  std::array<Eigen::Vector3d, kNumFeet> out;
  for (int f = 0; f < kNumFeet; ++f) {
    out[f] = transforms[model.foot_link_ids()[f]].translation();
  }
  return out;
}

Eigen::Matrix<double, 3, 6 + kNumJoints> PointJacobian(
    const RobotModel& model, const std::vector<Eigen::Isometry3d>& transforms,
    int link, const Eigen::Vector3d& point_world) {
  Eigen::Matrix<double, 3, 6 + kNumJoints> jac;
  jac.setZero();
  jac.block<3, 3>(0, 0).setIdentity();
  const Eigen::Vector3d r = point_world - transforms[model.base_link_id()].translation();
  // d/dw of exp(w) * (p - b) at w = 0 is -[p - b]x.
  jac.block<3, 3>(0, 3) << 0, r.z(), -r.y(), -r.z(), 0, r.x(), r.y(), -r.x(), 0;
  for (int l : model.chain_links(link)) {
    const Link& lk = model.link(l);
    if (lk.joint_type != JointType::kRevolute) continue;
    const Eigen::Isometry3d& t = transforms[l];
    const Eigen::Vector3d axis = t.linear() * lk.axis;
    jac.col(6 + lk.joint_index) = axis.cross(point_world - t.translation());
  }
  return jac;
}

}  // namespace wbpose
