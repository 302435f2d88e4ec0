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

#ifndef WBPOSE_TERRAIN_H_
#define WBPOSE_TERRAIN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wbpose {

enum class TerrainKind { kFlat, kRough, kDiscreteObstacles, kStairs };

std::string_view TerrainKindName(TerrainKind kind);
TerrainKind ParseTerrainKind(std::string_view name);

inline constexpr double kTerrainCellSize = 0.05;
inline constexpr double kCoarseCellSize = 0.10;
inline constexpr double kCoarseWindow = 0.20;
inline constexpr double kStairTread = 0.30;
inline constexpr double kTerrainPlatform = 1.0;

// Difficulty-to-parameter maps, all affine in d in [0, 1].
inline double RoughAmplitude(double d) { return 0.02 + 0.08 * d; }
inline double ObstacleHeight(double d) { return 0.05 + 0.15 * d; }
inline double StairRiser(double d) { return 0.05 + 0.15 * d; }

// Height samples on a regular grid. Sample (ix, iy) sits at the center of the
// square cell [origin + (ix, iy) * cell_size, origin + (ix + 1, iy + 1) *
// cell_size) and the surface is piecewise constant over cells.
class TerrainField {
 public:
  // Validates: non-empty rectangular grid, finite heights, flat => constant,
  // difficulty in [0, 1], cell_size > 0.
  TerrainField(TerrainKind kind, double cell_size, Eigen::Vector2d origin,
               int rows, int cols, std::vector<double> heights,
               double difficulty, std::uint64_t seed);

  TerrainKind kind() const { return kind_; }
  double cell_size() const { return cell_size_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double difficulty() const { return difficulty_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& heights() const { return heights_; }

  double at(int ix, int iy) const { return heights_[iy * cols_ + ix]; }
  Eigen::Vector2d SampleCenter(int ix, int iy) const;
  Eigen::Vector2d max_corner() const;

  bool Contains(double x, double y) const;
  // Height of the cell containing (x, y); throws ValidationError outside.
  double HeightAt(double x, double y) const;

 private:
  TerrainKind kind_;
  double cell_size_;
  Eigen::Vector2d origin_;
  int rows_;
  int cols_;
  std::vector<double> heights_;  // row-major, row = iy
  double difficulty_;
  std::uint64_t seed_;
};

// Conservative envelope: each cell stores the maximum field sample whose
// center lies in the window x window square centered on the cell center.
class CoarseHeightMap {
 public:
  CoarseHeightMap(double cell_size, double window, Eigen::Vector2d origin,
                  int rows, int cols, std::vector<double> heights);

  double cell_size() const { return cell_size_; }
  double window() const { return window_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& heights() const { return heights_; }
  double at(int ix, int iy) const { return heights_[iy * cols_ + ix]; }
  Eigen::Vector2d CellCenter(int ix, int iy) const;

  bool Contains(double x, double y) const;
  // Value of the cell containing (x, y); throws ValidationError outside,
  // naming the offending coordinate.
  double HeightAt(double x, double y) const;

  // Returns a copy with every cell raised by `dz`.
  CoarseHeightMap Raised(double dz) const;

 private:
  double cell_size_;
  double window_;
  Eigen::Vector2d origin_;
  int rows_;
  int cols_;
  std::vector<double> heights_;
};

// Square field of side `extent` centered at the world origin with
// kTerrainCellSize samples. Deterministic in all arguments.
TerrainField GenerateTerrain(TerrainKind kind, double difficulty,
                             std::uint64_t seed, double extent);

CoarseHeightMap BuildCoarseMap(const TerrainField& field,
                               double cell_size = kCoarseCellSize,
                               double window = kCoarseWindow);

// JSON header (kind, seed, difficulty, cell_size, origin, dims) plus the
// row-major height array.
std::string SerializeTerrain(const TerrainField& field);
TerrainField ParseTerrain(const std::string& text);
void SaveTerrain(const TerrainField& field, const std::filesystem::path& path);
TerrainField LoadTerrain(const std::filesystem::path& path);

}  // namespace wbpose

#endif  // WBPOSE_TERRAIN_H_
