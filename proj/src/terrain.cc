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

#include "wbpose/terrain.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json_util.h"
#include "wbpose/common.h"
#include "wbpose/io.h"

namespace wbpose {
namespace {

std::string FormatPoint(double x, double y) {
  std::ostringstream os;
  os << "(" << x << ", " << y << ")";
  return os.str();
}

// Index of the cell containing `v`, tolerating points that sit exactly on the
// far boundary. Returns -1 when outside.
int CellIndex(double v, double origin, double cell, int n) {
  const double u = (v - origin) / cell;
  if (!(u >= -1e-9 && u <= n + 1e-9)) return -1;
  return std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
}

void FillRough(std::vector<double>& h, int rows, int cols, double amplitude,
               Rng& rng) {
  // Uniform noise on a lattice every second sample, bilinearly interpolated.
  // Interpolation keeps every value inside [-amplitude, amplitude].
  constexpr int kStride = 2;
  const int lrows = (rows - 1) / kStride + 2;
  const int lcols = (cols - 1) / kStride + 2;
  std::vector<double> lattice(static_cast<std::size_t>(lrows) * lcols);
  for (double& v : lattice) v = rng.Uniform(-amplitude, amplitude);
  for (int iy = 0; iy < rows; ++iy) {
    const int ly = iy / kStride;
    const double fy = static_cast<double>(iy % kStride) / kStride;
    for (int ix = 0; ix < cols; ++ix) {
      const int lx = ix / kStride;
      const double fx = static_cast<double>(ix % kStride) / kStride;
      const double v00 = lattice[ly * lcols + lx];
      const double v10 = lattice[ly * lcols + lx + 1];
      const double v01 = lattice[(ly + 1) * lcols + lx];
      const double v11 = lattice[(ly + 1) * lcols + lx + 1];
      h[iy * cols + ix] = (1 - fy) * ((1 - fx) * v00 + fx * v10) +
                          fy * ((1 - fx) * v01 + fx * v11);
    }
  }
}

void FillObstacles(std::vector<double>& h, int rows, int cols, double cell,
                   double extent, double height, Rng& rng) {
  const double levels[4] = {-height, -0.5 * height, 0.5 * height, height};
  const int count = static_cast<int>(std::lround(0.4 * extent * extent));
  const int min_cells = std::max(1, static_cast<int>(std::lround(0.4 / cell)));
  const int max_cells = std::max(min_cells, static_cast<int>(std::lround(1.2 / cell)));
  for (int k = 0; k < count; ++k) {
    const int w = min_cells + static_cast<int>(rng.UniformInt(max_cells - min_cells + 1));
    const int l = min_cells + static_cast<int>(rng.UniformInt(max_cells - min_cells + 1));
    const int x0 = static_cast<int>(rng.UniformInt(std::max(1, cols - w + 1)));
    const int y0 = static_cast<int>(rng.UniformInt(std::max(1, rows - l + 1)));
    const double v = levels[rng.UniformInt(4)];
    for (int iy = y0; iy < std::min(rows, y0 + l); ++iy) {
      for (int ix = x0; ix < std::min(cols, x0 + w); ++ix) h[iy * cols + ix] = v;
    }
  }
  // Flat spawn platform in the middle.
  const double half = 0.5 * kTerrainPlatform;
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < cols; ++ix) {
      const double x = (ix + 0.5) * cell - 0.5 * cols * cell;
      const double y = (iy + 0.5) * cell - 0.5 * rows * cell;
      if (std::abs(x) < half && std::abs(y) < half) h[iy * cols + ix] = 0.0;
    }
  }
}

void FillPyramidStairs(std::vector<double>& h, int rows, int cols, double cell,
                       double riser) {
  const double width = cols * cell;
  const double depth = rows * cell;
  const double half_min = 0.5 * std::min(width, depth);
  const int max_steps = std::max(
      0, static_cast<int>(std::floor((half_min - 0.5 * kTerrainPlatform) / kStairTread)));
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < cols; ++ix) {
      const double x = (ix + 0.5) * cell;
      const double y = (iy + 0.5) * cell;
      const double to_border = std::min({x, width - x, y, depth - y});
      const int step = std::min(max_steps, static_cast<int>(std::floor(to_border / kStairTread)));
      h[iy * cols + ix] = riser * step;
    }
  }
}

}  // namespace

std::string_view TerrainKindName(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::kFlat:
      return "flat";
    case TerrainKind::kRough:
      return "rough";
    case TerrainKind::kDiscreteObstacles:
      return "discrete_obstacles";
    case TerrainKind::kStairs:
      return "stairs";
  }
  return "unknown";
}

TerrainKind ParseTerrainKind(std::string_view name) {
  if (name == "flat") return TerrainKind::kFlat;
  if (name == "rough") return TerrainKind::kRough;
  if (name == "discrete_obstacles") return TerrainKind::kDiscreteObstacles;
  if (name == "stairs") return TerrainKind::kStairs;
  throw ValidationError("unknown terrain kind '" + std::string(name) +
                        "' (expected flat, rough, discrete_obstacles, stairs)");
}

TerrainField::TerrainField(TerrainKind kind, double cell_size,
                           Eigen::Vector2d origin, int rows, int cols,
                           std::vector<double> heights, double difficulty,
                           std::uint64_t seed)
    : kind_(kind),
      cell_size_(cell_size),
      origin_(origin),
      rows_(rows),
      cols_(cols),
      heights_(std::move(heights)),
      difficulty_(difficulty),
      seed_(seed) {
  if (!(cell_size_ > 0.0)) throw ValidationError("terrain: cell_size must be positive");
  if (rows_ <= 0 || cols_ <= 0) throw ValidationError("terrain: grid must be non-empty");
  if (heights_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw ValidationError("terrain: height array does not match dims");
  }
  if (!(difficulty_ >= 0.0 && difficulty_ <= 1.0)) {
    throw ValidationError("terrain: difficulty must lie in [0, 1]");
  }
  for (double v : heights_) {
    if (!std::isfinite(v)) throw ValidationError("terrain: non-finite height");
  }
  if (kind_ == TerrainKind::kFlat) {
    for (double v : heights_) {
      if (v != heights_.front()) throw ValidationError("terrain: flat field must have constant height");
    }
  }
}

Eigen::Vector2d TerrainField::SampleCenter(int ix, int iy) const {
  return origin_ + cell_size_ * Eigen::Vector2d(ix + 0.5, iy + 0.5);
}

Eigen::Vector2d TerrainField::max_corner() const {
  return origin_ + cell_size_ * Eigen::Vector2d(cols_, rows_);
}

bool TerrainField::Contains(double x, double y) const {
  return CellIndex(x, origin_.x(), cell_size_, cols_) >= 0 &&
         CellIndex(y, origin_.y(), cell_size_, rows_) >= 0;
}

double TerrainField::HeightAt(double x, double y) const {
  const int ix = CellIndex(x, origin_.x(), cell_size_, cols_);
  const int iy = CellIndex(y, origin_.y(), cell_size_, rows_);
  if (ix < 0 || iy < 0) {
    throw ValidationError("terrain query " + FormatPoint(x, y) + " outside field bounds");
  }
  return at(ix, iy);
}

CoarseHeightMap::CoarseHeightMap(double cell_size, double window,
                                 Eigen::Vector2d origin, int rows, int cols,
                                 std::vector<double> heights)
    : cell_size_(cell_size),
      window_(window),
      origin_(origin),
      rows_(rows),
      cols_(cols),
      heights_(std::move(heights)) {
  if (rows_ <= 0 || cols_ <= 0 ||
      heights_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw ValidationError("coarse map: invalid dims");
  }
}

Eigen::Vector2d CoarseHeightMap::CellCenter(int ix, int iy) const {
  return origin_ + cell_size_ * Eigen::Vector2d(ix + 0.5, iy + 0.5);
}

bool CoarseHeightMap::Contains(double x, double y) const {
  return CellIndex(x, origin_.x(), cell_size_, cols_) >= 0 &&
         CellIndex(y, origin_.y(), cell_size_, rows_) >= 0;
}

double CoarseHeightMap::HeightAt(double x, double y) const {
  const int ix = CellIndex(x, origin_.x(), cell_size_, cols_);
  const int iy = CellIndex(y, origin_.y(), cell_size_, rows_);
  if (ix < 0 || iy < 0) {
    const Eigen::Vector2d hi = origin_ + cell_size_ * Eigen::Vector2d(cols_, rows_);
    throw ValidationError("coarse height map query " + FormatPoint(x, y) +
                          " outside bounds " + FormatPoint(origin_.x(), origin_.y()) +
                          " - " + FormatPoint(hi.x(), hi.y()));
  }
  return at(ix, iy);
}

CoarseHeightMap CoarseHeightMap::Raised(double dz) const {
  std::vector<double> h = heights_;
  for (double& v : h) v += dz;
  return CoarseHeightMap(cell_size_, window_, origin_, rows_, cols_, std::move(h));
}

TerrainField GenerateTerrain(TerrainKind kind, double difficulty,
                             std::uint64_t seed, double extent) {
  if (!(difficulty >= 0.0 && difficulty <= 1.0)) {
    throw ValidationError("generate_terrain: difficulty must lie in [0, 1]");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw ValidationError("generate_terrain: extent must be positive");
  }
  const double cell = kTerrainCellSize;
  const int n = std::max(1, static_cast<int>(std::lround(extent / cell)));
  const Eigen::Vector2d origin(-0.5 * n * cell, -0.5 * n * cell);
  std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
  Rng rng = Rng(seed).Split(TerrainKindName(kind));
  switch (kind) {
    case TerrainKind::kFlat:
      break;
    case TerrainKind::kRough:
      FillRough(h, n, n, RoughAmplitude(difficulty), rng);
      break;
    case TerrainKind::kDiscreteObstacles:
      FillObstacles(h, n, n, cell, n * cell, ObstacleHeight(difficulty), rng);
      break;
    case TerrainKind::kStairs:
      FillPyramidStairs(h, n, n, cell, StairRiser(difficulty));
      break;
  }
  return TerrainField(kind, cell, origin, n, n, std::move(h), difficulty, seed);
}

CoarseHeightMap BuildCoarseMap(const TerrainField& field, double cell_size,
                               double window) {
  if (!(cell_size > 0.0) || !(window > 0.0)) {
    throw ValidationError("coarse map: cell size and window must be positive");
  }
  const Eigen::Vector2d extent = field.max_corner() - field.origin();
  const int cols = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_size - 1e-9)));
  const int rows = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_size - 1e-9)));
  const double fc = field.cell_size();
  const double half = 0.5 * window;
  constexpr double kTol = 1e-9;

  // Sample index range whose centers lie within [c - half, c + half].
  auto range = [&](double c, double origin, int n, int& lo, int& hi) {
    lo = static_cast<int>(std::ceil((c - half - origin) / fc - 0.5 - kTol));
    hi = static_cast<int>(std::floor((c + half - origin) / fc - 0.5 + kTol));
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    if (lo > hi) {  // window misses every sample; fall back to the nearest
      const int nearest = std::clamp(static_cast<int>(std::floor((c - origin) / fc)), 0, n - 1);
      lo = hi = nearest;
    }
  };

  std::vector<double> heights(static_cast<std::size_t>(rows) * cols);
  for (int cy = 0; cy < rows; ++cy) {
    const double y = field.origin().y() + (cy + 0.5) * cell_size;
    int ylo, yhi;
    range(y, field.origin().y(), field.rows(), ylo, yhi);
    for (int cx = 0; cx < cols; ++cx) {
      const double x = field.origin().x() + (cx + 0.5) * cell_size;
      int xlo, xhi;
      range(x, field.origin().x(), field.cols(), xlo, xhi);
      double m = -std::numeric_limits<double>::infinity();
      for (int iy = ylo; iy <= yhi; ++iy) {
        for (int ix = xlo; ix <= xhi; ++ix) m = std::max(m, field.at(ix, iy));
      }
      heights[cy * cols + cx] = m;
    }
  }
  return CoarseHeightMap(cell_size, window, field.origin(), rows, cols, std::move(heights));
}

std::string SerializeTerrain(const TerrainField& field) {
  using json_util::json;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = std::string(TerrainKindName(field.kind()));
  j["seed"] = field.seed();
  j["difficulty"] = field.difficulty();
  j["cell_size"] = field.cell_size();
  j["origin"] = {field.origin().x(), field.origin().y()};
  j["dims"] = {field.rows(), field.cols()};
  j["heights"] = field.heights();
  return j.dump() + "\n";
}

TerrainField ParseTerrain(const std::string& text) {
  using json_util::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("terrain file: parse error: ") + e.what());
  }
  json_util::CheckSchema(j, "terrain file");
  const std::string ctx = "terrain file";
  const auto& kind = json_util::Require(j, "kind", ctx);
  const auto& dims = json_util::Require(j, "dims", ctx);
  const auto& origin = json_util::Require(j, "origin", ctx);
  if (!dims.is_array() || dims.size() != 2 || !origin.is_array() || origin.size() != 2) {
    throw ValidationError(ctx + ": dims and origin must be 2-element arrays");
  }
  return TerrainField(ParseTerrainKind(kind.get<std::string>()),
                      json_util::NumberAt(json_util::Require(j, "cell_size", ctx), ctx + ".cell_size"),
                      Eigen::Vector2d(origin[0].get<double>(), origin[1].get<double>()),
                      dims[0].get<int>(), dims[1].get<int>(),
                      json_util::Require(j, "heights", ctx).get<std::vector<double>>(),
                      json_util::NumberAt(json_util::Require(j, "difficulty", ctx), ctx + ".difficulty"),
                      json_util::Require(j, "seed", ctx).get<std::uint64_t>());
}

void SaveTerrain(const TerrainField& field, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeTerrain(field));
}

TerrainField LoadTerrain(const std::filesystem::path& path) {
  return ParseTerrain(ReadFile(path));
}

}  // namespace wbpose
