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

// Private JSON helpers shared by the serializers.

#ifndef WBPOSE_SRC_JSON_UTIL_H_
#define WBPOSE_SRC_JSON_UTIL_H_

#include <string>

#include <json.hpp>

#include "wbpose/common.h"
#include "wbpose/io.h"
#include "wbpose/robot_model.h"
#include "wbpose/se3.h"

namespace wbpose::json_util {

using nlohmann::json;

inline json PoseToJson(const SE3Pose& pose) {
  const auto& p = pose.position();
  const auto& q = pose.orientation();
  return {{"position", {p.x(), p.y(), p.z()}},
          {"orientation", {q.w(), q.x(), q.y(), q.z()}}};
}

inline const json& Require(const json& j, const char* key,
                           const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(ctx + ": missing field '" + key + "'");
  return *it;
}

inline double NumberAt(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ValidationError(ctx + ": expected a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> VectorFromJson(const json& j,
                                           const std::string& ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != N) {
    throw ValidationError(ctx + ": expected array of " + std::to_string(N) +
                          " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = NumberAt(j[i], ctx);
  return v;
}

template <typename Derived>
json VectorToJson(const Eigen::MatrixBase<Derived>& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline SE3Pose PoseFromJson(const json& j, const std::string& ctx) {
  const Eigen::Vector3d p =
      VectorFromJson<3>(Require(j, "position", ctx), ctx + ".position");
  const Eigen::Vector4d q =
      VectorFromJson<4>(Require(j, "orientation", ctx), ctx + ".orientation");
  if (q.norm() < 1e-12) {
    throw ValidationError(ctx + ".orientation: zero quaternion");
  }
  return SE3Pose(p, Eigen::Quaterniond(q[0], q[1], q[2], q[3]));
}

inline void CheckSchema(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j["schema_version"] != kSchemaVersion) {
    throw ValidationError(ctx + ": unsupported or missing schema_version");
  }
}

}  // namespace wbpose::json_util

#endif  // WBPOSE_SRC_JSON_UTIL_H_
