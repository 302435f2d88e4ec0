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

#ifndef WBPOSE_WORKSPACE_H_
#define WBPOSE_WORKSPACE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wbpose/common.h"
#include "wbpose/robot_model.h"
#include "wbpose/se3.h"

namespace wbpose {

inline constexpr int kNumBins = 5;

struct WorkspaceDataset {
  std::vector<SE3Pose> poses;  // end-effector poses in the base frame
  std::vector<int> bin_index;
  double r_max = 0.0;
  std::array<double, kNumBins> bin_radii{};
  std::array<int, kNumBins> bin_counts{};

  // Build metadata.
  std::uint64_t seed = 0;
  int steps_per_joint = 0;
  std::string model_hash;

  // Indices of the poses in each bin; derived from bin_index.
  std::array<std::vector<int>, kNumBins> members;

  std::array<double, kNumBins> BinFractions() const;
};

struct PresampleOptions {
  int steps_per_joint = 7;
  int target_count = 10000;
  std::uint64_t seed = 0;
  int num_threads = 0;  // 0 selects hardware concurrency
};

// Sweeps a steps_per_joint^6 grid over the full arm joint ranges with the
// legs at the default configuration, keeps self-collision-free poses and
// subsamples them uniformly to target_count.
WorkspaceDataset PresampleWorkspace(const RobotModel& model,
                                    const PresampleOptions& options);

// Radii (i + 1) * r_max / 5.
std::array<double, kNumBins> BinRadii(double r_max);
// Bin of an xy radius under (lower, upper] boundaries; bin 0 includes 0.
int BinOf(double xy_radius, const std::array<double, kNumBins>& radii);

// Recomputes r_max, radii, bin indices, counts and members from `poses`.
void AssignBins(WorkspaceDataset& dataset);

struct BinnedSample {
  SE3Pose pose;
  int index = -1;
  int bin = -1;
};

// Uniform bin, then uniform pose within it. Throws ValidationError naming an
// empty bin.
BinnedSample SampleBinned(const WorkspaceDataset& dataset, Rng& rng);

struct OffsetRanges {
  Eigen::Vector3d xyz_lower{-0.2, -0.2, -0.3};
  Eigen::Vector3d xyz_upper{0.2, 0.2, 0.1};
  Eigen::Vector3d rpy_lower{-kPi / 6, -kPi / 6, -kPi / 6};
  Eigen::Vector3d rpy_upper{kPi / 6, kPi / 6, kPi / 6};
};

struct ExpandedCommand {
  SE3Pose pose;         // base frame
  SE3Pose body_offset;  // the sampled virtual base displacement
};

// Samples a body offset T and returns T * pose.
ExpandedCommand ExpandCommand(const SE3Pose& pose, Rng& rng,
                              const OffsetRanges& ranges = {});

std::string SerializeWorkspace(const WorkspaceDataset& dataset);
WorkspaceDataset ParseWorkspace(const std::string& text);
void SaveWorkspace(const WorkspaceDataset& dataset,
                   const std::filesystem::path& path);
WorkspaceDataset LoadWorkspace(const std::filesystem::path& path);

}  // namespace wbpose

#endif  // WBPOSE_WORKSPACE_H_
