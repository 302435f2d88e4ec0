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

#include "wbpose/workspace.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "json_util.h"
#include "wbpose/collision.h"
#include "wbpose/io.h"

namespace wbpose {

using json_util::json;

std::array<double, kNumBins> WorkspaceDataset::BinFractions() const {
  std::array<double, kNumBins> f{};
  if (poses.empty()) return f;
  for (int i = 0; i < kNumBins; ++i) {
    f[i] = static_cast<double>(bin_counts[i]) / static_cast<double>(poses.size());
  }
  return f;
}

std::array<double, kNumBins> BinRadii(double r_max) {
  std::array<double, kNumBins> radii{};
  for (int i = 0; i < kNumBins; ++i) radii[i] = (i + 1) * r_max / kNumBins;
  radii[kNumBins - 1] = r_max;
  return radii;
}

int BinOf(double xy_radius, const std::array<double, kNumBins>& radii) {
  for (int i = 0; i < kNumBins; ++i) {
    if (xy_radius <= radii[i]) return i;
  }
  return kNumBins - 1;
}

void AssignBins(WorkspaceDataset& ds) {
  ds.r_max = 0.0;
  for (const auto& p : ds.poses) {
    ds.r_max = std::max(ds.r_max, p.position().head<2>().norm());
  }
  ds.bin_radii = BinRadii(ds.r_max);
  ds.bin_index.assign(ds.poses.size(), 0);
  ds.bin_counts.fill(0);
  for (auto& m : ds.members) m.clear();
  for (size_t i = 0; i < ds.poses.size(); ++i) {
    const int b = BinOf(ds.poses[i].position().head<2>().norm(), ds.bin_radii);
    ds.bin_index[i] = b;
    ds.bin_counts[b]++;
    ds.members[b].push_back(static_cast<int>(i));
  }
}

WorkspaceDataset PresampleWorkspace(const RobotModel& model,
                                    const PresampleOptions& opt) {
  if (opt.steps_per_joint < 2) {
    throw ValidationError("steps_per_joint must be >= 2");
  }
  if (opt.target_count < 1) throw ValidationError("target_count must be >= 1");
  std::int64_t total = 1;
  for (int k = 0; k < kNumArmJoints; ++k) total *= opt.steps_per_joint;

  std::array<std::vector<double>, kNumArmJoints> grid;
  for (int k = 0; k < kNumArmJoints; ++k) {
    const JointLimit& lim = model.joint_limits()[kNumLegJoints + k];
    for (int i = 0; i < opt.steps_per_joint; ++i) {
      grid[k].push_back(lim.lower + (lim.upper - lim.lower) * i /
                                        (opt.steps_per_joint - 1));
    }
  }

  std::vector<SE3Pose> ee(total);
  std::vector<char> free(total, 0);
  const Eigen::Isometry3d base = Eigen::Isometry3d::Identity();
  auto worker = [&](std::int64_t begin, std::int64_t end) {
    JointVector q = model.default_config();
    for (std::int64_t c = begin; c < end; ++c) {
      std::int64_t rem = c;
      for (int k = kNumArmJoints - 1; k >= 0; --k) {
        q[kNumLegJoints + k] = grid[k][rem % opt.steps_per_joint];
        rem /= opt.steps_per_joint;
      }
      const auto tf = LinkTransforms(model, base, q);
      if (!SelfCollision(model, tf).colliding) {
        free[c] = 1;
        ee[c] = SE3Pose(tf[model.ee_link_id()]);
      }
    }
  };
  int threads = opt.num_threads > 0
                    ? opt.num_threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, total));
  std::vector<std::thread> pool;
  const std::int64_t chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t b = t * chunk;
    const std::int64_t e = std::min(total, b + chunk);
    if (b < e) pool.emplace_back(worker, b, e);
  }
  for (auto& th : pool) th.join();

  std::vector<int> valid;
  for (std::int64_t c = 0; c < total; ++c) {
    if (free[c]) valid.push_back(static_cast<int>(c));
  }
  if (static_cast<std::int64_t>(valid.size()) < opt.target_count) {
    throw ValidationError("target_count " + std::to_string(opt.target_count) +
                          " exceeds the " + std::to_string(valid.size()) +
                          " collision-free configurations available");
  }
  // Partial Fisher-Yates with the module's own generator.
  Rng rng = Rng(opt.seed).Split("workspace_subsample");
  for (int i = 0; i < opt.target_count; ++i) {
    const auto j = i + static_cast<int>(rng.UniformInt(valid.size() - i));
    std::swap(valid[i], valid[j]);
  }
  valid.resize(opt.target_count);
  std::sort(valid.begin(), valid.end());

  WorkspaceDataset ds;
  ds.seed = opt.seed;
  ds.steps_per_joint = opt.steps_per_joint;
  ds.model_hash = HashHex(model.content_hash());
  ds.poses.reserve(valid.size());
  for (int c : valid) ds.poses.push_back(ee[c]);
  AssignBins(ds);
  return ds;
}

BinnedSample SampleBinned(const WorkspaceDataset& ds, Rng& rng) {
  for (int b = 0; b < kNumBins; ++b) {
    if (ds.members[b].empty()) {
      throw ValidationError("workspace bin " + std::to_string(b) + " is empty");
    }
  }
  BinnedSample s;
  s.bin = static_cast<int>(rng.UniformInt(kNumBins));
  const auto& m = ds.members[s.bin];
  s.index = m[rng.UniformInt(m.size())];
  s.pose = ds.poses[s.index];
  return s;
}

ExpandedCommand ExpandCommand(const SE3Pose& pose, Rng& rng,
                              const OffsetRanges& r) {
  Eigen::Vector3d t;
  Eigen::Vector3d rpy;
  for (int i = 0; i < 3; ++i) t[i] = rng.Uniform(r.xyz_lower[i], r.xyz_upper[i]);
  for (int i = 0; i < 3; ++i) rpy[i] = rng.Uniform(r.rpy_lower[i], r.rpy_upper[i]);
  ExpandedCommand out;
  out.body_offset = SE3Pose(t, RotationFromRpy(rpy[0], rpy[1], rpy[2]));
  out.pose = out.body_offset * pose;
  return out;
}

std::string SerializeWorkspace(const WorkspaceDataset& ds) {
  json poses = json::array();
  for (const auto& p : ds.poses) poses.push_back(json_util::PoseToJson(p));
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "workspace"},
            {"poses", poses},
            {"bin_index", ds.bin_index},
            {"bin_radii", ds.bin_radii},
            {"bin_counts", ds.bin_counts},
            {"r_max", ds.r_max},
            {"metadata",
             {{"seed", ds.seed},
              {"steps_per_joint", ds.steps_per_joint},
              {"model_hash", ds.model_hash}}}};
  return j.dump();
}

WorkspaceDataset ParseWorkspace(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("workspace: malformed JSON: ") + e.what());
  }
  json_util::CheckSchema(j, "workspace");
  WorkspaceDataset ds;
  const json& poses = json_util::Require(j, "poses", "workspace");
  if (!poses.is_array() || poses.empty()) {
    throw ValidationError("workspace.poses: expected a non-empty array");
  }
  for (size_t i = 0; i < poses.size(); ++i) {
    ds.poses.push_back(
        json_util::PoseFromJson(poses[i], "workspace.poses[" + std::to_string(i) + "]"));
  }
  const json& meta = json_util::Require(j, "metadata", "workspace");
  try {
    ds.seed = meta.value("seed", std::uint64_t{0});
    ds.steps_per_joint = meta.value("steps_per_joint", 0);
    ds.model_hash = meta.value("model_hash", std::string());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("workspace.metadata: ") + e.what());
  }
  AssignBins(ds);
  const json& stored = json_util::Require(j, "bin_index", "workspace");
  if (!stored.is_array() || stored.size() != ds.poses.size()) {
    throw ValidationError("workspace.bin_index: length differs from poses");
  }
  for (size_t i = 0; i < ds.poses.size(); ++i) {
    if (!stored[i].is_number_integer() || stored[i].get<int>() != ds.bin_index[i]) {
      throw ValidationError("workspace.bin_index[" + std::to_string(i) +
                            "]: inconsistent with pose radius");
    }
  }
  return ds;
}

void SaveWorkspace(const WorkspaceDataset& ds, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeWorkspace(ds));
}

WorkspaceDataset LoadWorkspace(const std::filesystem::path& path) {
  return ParseWorkspace(ReadFile(path));
}

}  // namespace wbpose
