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

#include <gtest/gtest.h>

#include "wbpose/common.h"

namespace wbpose {
namespace {

// Brute-force max over every sample whose center lies in the cell's window.
double WindowMax(const TerrainField& f, const CoarseHeightMap& c, int cx, int cy) {
  const Eigen::Vector2d center = c.CellCenter(cx, cy);
  const double half = 0.5 * c.window() + 1e-9;
  double m = -std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < f.rows(); ++iy) {
    for (int ix = 0; ix < f.cols(); ++ix) {
      const Eigen::Vector2d s = f.SampleCenter(ix, iy);
      if (std::abs(s.x() - center.x()) <= half && std::abs(s.y() - center.y()) <= half) {
        m = std::max(m, f.at(ix, iy));
      }
    }
  }
  return m;
}

TerrainField Custom(int n, std::vector<double> h) {
  return TerrainField(TerrainKind::kRough, kTerrainCellSize, Eigen::Vector2d(0, 0), n, n,
                      std::move(h), 0.5, 0);
}

TEST(Terrain, FlatIsZero) {
  for (double d : {0.0, 0.4, 1.0}) {
    const TerrainField f = GenerateTerrain(TerrainKind::kFlat, d, 99, 3.0);
    for (double h : f.heights()) EXPECT_EQ(h, 0.0);
    for (double h : BuildCoarseMap(f).heights()) EXPECT_EQ(h, 0.0);
  }
}

TEST(Terrain, GenerationIsDeterministic) {
  for (TerrainKind k : {TerrainKind::kRough, TerrainKind::kDiscreteObstacles, TerrainKind::kStairs}) {
    const TerrainField a = GenerateTerrain(k, 1.0, 7, 6.0);
    const TerrainField b = GenerateTerrain(k, 1.0, 7, 6.0);
    EXPECT_EQ(a.heights(), b.heights());
    EXPECT_EQ(SerializeTerrain(a), SerializeTerrain(b));
    EXPECT_EQ(BuildCoarseMap(a).heights(), BuildCoarseMap(b).heights());
  }
}

TEST(Terrain, SeedsChangeRandomTerrains) {
  EXPECT_NE(GenerateTerrain(TerrainKind::kRough, 0.5, 1, 4.0).heights(),
            GenerateTerrain(TerrainKind::kRough, 0.5, 2, 4.0).heights());
}

TEST(Terrain, RoughAmplitudeFollowsFormula) {
  const TerrainField f = GenerateTerrain(TerrainKind::kRough, 0.5, 3, 8.0);
  double mean = 0.0, max_abs = 0.0;
  for (double h : f.heights()) {
    mean += h / f.heights().size();
    max_abs = std::max(max_abs, std::abs(h));
  }
  double var = 0.0;
  for (double h : f.heights()) var += (h - mean) * (h - mean) / (f.heights().size() - 1);
  EXPECT_LE(max_abs, 0.06);
  EXPECT_GT(var, 0.0);
}

TEST(Terrain, ParameterMapsAreAffine) {
  EXPECT_DOUBLE_EQ(RoughAmplitude(0.0), 0.02);
  EXPECT_DOUBLE_EQ(RoughAmplitude(1.0), 0.10);
  EXPECT_DOUBLE_EQ(ObstacleHeight(1.0), 0.20);
  EXPECT_DOUBLE_EQ(StairRiser(0.0), 0.05);
  EXPECT_DOUBLE_EQ(StairRiser(1.0), 0.20);
}

TEST(Terrain, ObstacleHeightsBounded) {
  const double d = 0.7;
  const TerrainField f = GenerateTerrain(TerrainKind::kDiscreteObstacles, d, 5, 8.0);
  double top = 0.0;
  for (double h : f.heights()) {
    EXPECT_LE(std::abs(h), ObstacleHeight(d) + 1e-12);
    top = std::max(top, std::abs(h));
  }
  EXPECT_GT(top, 0.0);
}

TEST(Terrain, StairsArePyramidWithTreadAndRiser) {
  const double d = 1.0;
  const TerrainField f = GenerateTerrain(TerrainKind::kStairs, d, 0, 8.0);
  double top = 0.0;
  for (double h : f.heights()) {
    const double steps = h / StairRiser(d);
    EXPECT_NEAR(steps, std::round(steps), 1e-9);
    top = std::max(top, h);
  }
  EXPECT_GT(top, 0.0);
  // Symmetric about the center, highest there, edges at ground level.
  const int n = f.cols();
  EXPECT_EQ(f.at(n / 2, n / 2), top);
  EXPECT_EQ(f.at(0, 0), 0.0);
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(f.at(i, n / 2), f.at(n - 1 - i, n / 2));
    EXPECT_EQ(f.at(n / 2, i), f.at(i, n / 2));
  }
  // One riser per tread along a ray from the edge.
  const int per_tread = static_cast<int>(std::lround(kStairTread / f.cell_size()));
  EXPECT_EQ(f.at(per_tread, n / 2) - f.at(per_tread - 1, n / 2), StairRiser(d));
}

TEST(Terrain, DifficultyOutOfRangeRejected) {
  EXPECT_THROW(GenerateTerrain(TerrainKind::kRough, -0.1, 0, 4.0), ValidationError);
  EXPECT_THROW(GenerateTerrain(TerrainKind::kStairs, 1.1, 0, 4.0), ValidationError);
}

TEST(Terrain, FieldInvariantsValidated) {
  EXPECT_THROW(TerrainField(TerrainKind::kFlat, 0.05, {0, 0}, 2, 2, {0, 0, 0, 1}, 0, 0),
               ValidationError);
  EXPECT_THROW(TerrainField(TerrainKind::kRough, 0.05, {0, 0}, 2, 2, {0, 0, 0}, 0, 0),
               ValidationError);
  EXPECT_THROW(TerrainField(TerrainKind::kRough, 0.05, {0, 0}, 2, 2, {0, 0, 0, NAN}, 0, 0),
               ValidationError);
  EXPECT_THROW(TerrainField(TerrainKind::kRough, 0.05, {0, 0}, 0, 0, {}, 0, 0), ValidationError);
}

TEST(Terrain, KindNamesRoundTrip) {
  for (TerrainKind k : {TerrainKind::kFlat, TerrainKind::kRough, TerrainKind::kDiscreteObstacles,
                        TerrainKind::kStairs}) {
    EXPECT_EQ(ParseTerrainKind(TerrainKindName(k)), k);
  }
  EXPECT_THROW(ParseTerrainKind("lava"), ValidationError);
}

TEST(Terrain, SerializationRoundTrip) {
  const TerrainField f = GenerateTerrain(TerrainKind::kDiscreteObstacles, 0.3, 17, 4.0);
  const TerrainField g = ParseTerrain(SerializeTerrain(f));
  EXPECT_EQ(g.kind(), f.kind());
  EXPECT_EQ(g.seed(), f.seed());
  EXPECT_EQ(g.difficulty(), f.difficulty());
  EXPECT_EQ(g.rows(), f.rows());
  EXPECT_EQ(g.origin(), f.origin());
  EXPECT_EQ(g.heights(), f.heights());
  EXPECT_THROW(ParseTerrain("{\"schema_version\": 1}"), ValidationError);
  EXPECT_THROW(ParseTerrain("not json"), ValidationError);
}

TEST(Terrain, HeightQueries) {
  const TerrainField f = GenerateTerrain(TerrainKind::kStairs, 1.0, 0, 4.0);
  EXPECT_EQ(f.HeightAt(0.0, 0.0), f.at(f.cols() / 2, f.rows() / 2));
  EXPECT_THROW(f.HeightAt(2.5, 0.0), ValidationError);
  EXPECT_FALSE(f.Contains(0.0, -2.01));
}

TEST(CoarseMap, SpikeCoversItsWindow) {
  const int n = 20;
  std::vector<double> h(n * n, 0.0);
  h[7 * n + 9] = 0.5;
  const TerrainField f = Custom(n, h);
  const CoarseHeightMap c = BuildCoarseMap(f);
  const Eigen::Vector2d spike = f.SampleCenter(9, 7);
  int covered = 0;
  for (int cy = 0; cy < c.rows(); ++cy) {
    for (int cx = 0; cx < c.cols(); ++cx) {
      const Eigen::Vector2d d = (c.CellCenter(cx, cy) - spike).cwiseAbs();
      const bool covers = d.x() <= 0.1 + 1e-9 && d.y() <= 0.1 + 1e-9;
      EXPECT_EQ(c.at(cx, cy), covers ? 0.5 : 0.0) << cx << "," << cy;
      covered += covers;
    }
  }
  EXPECT_GT(covered, 0);
}

TEST(CoarseMap, EqualsBruteForceWindowMax) {
  Rng rng(31);
  const int n = 64;
  std::vector<double> h(n * n);
  for (double& v : h) v = rng.Uniform(-0.3, 0.3);
  const TerrainField f = Custom(n, h);
  const CoarseHeightMap c = BuildCoarseMap(f);
  EXPECT_DOUBLE_EQ(c.cell_size(), kCoarseCellSize);
  EXPECT_DOUBLE_EQ(c.window(), kCoarseWindow);
  for (int cy = 0; cy < c.rows(); ++cy) {
    for (int cx = 0; cx < c.cols(); ++cx) EXPECT_EQ(c.at(cx, cy), WindowMax(f, c, cx, cy));
  }
}

TEST(CoarseMap, DominatesFieldEverywhere) {
  for (TerrainKind k : {TerrainKind::kRough, TerrainKind::kDiscreteObstacles, TerrainKind::kStairs}) {
    const TerrainField f = GenerateTerrain(k, 1.0, 4, 3.2);
    const CoarseHeightMap c = BuildCoarseMap(f);
    for (int iy = 0; iy < f.rows(); ++iy) {
      for (int ix = 0; ix < f.cols(); ++ix) {
        const Eigen::Vector2d p = f.SampleCenter(ix, iy);
        EXPECT_GE(c.HeightAt(p.x(), p.y()), f.at(ix, iy));
      }
    }
  }
}

TEST(CoarseMap, RiserEdgeReadsUpperTread) {
  const TerrainField f = GenerateTerrain(TerrainKind::kStairs, 1.0, 0, 6.0);
  const CoarseHeightMap c = BuildCoarseMap(f);
  // The first riser sits one tread in from the low edge.
  const double x_edge = f.origin().x() + kStairTread;
  const double y = 0.0;
  const double lower = f.HeightAt(x_edge - 0.01, y);
  const double upper = f.HeightAt(x_edge + 0.01, y);
  ASSERT_LT(lower, upper);
  EXPECT_EQ(c.HeightAt(x_edge - 0.01, y), upper);
  EXPECT_EQ(c.HeightAt(x_edge + 0.01, y), upper);
}

TEST(CoarseMap, MaxPoolIdempotentOnFlatRegions) {
  const int n = 40;
  std::vector<double> h(n * n, 0.2);
  for (int i = 0; i < n; ++i) h[i] = 0.9;  // one raised row at the border
  const TerrainField f = Custom(n, h);
  const CoarseHeightMap c = BuildCoarseMap(f);
  for (int cy = 2; cy < c.rows(); ++cy) {
    for (int cx = 0; cx < c.cols(); ++cx) EXPECT_EQ(c.at(cx, cy), 0.2);
  }
}

TEST(CoarseMap, RaisedAndBounds) {
  const CoarseHeightMap c = BuildCoarseMap(GenerateTerrain(TerrainKind::kFlat, 0, 0, 2.0));
  const CoarseHeightMap r = c.Raised(10.0);
  for (double v : r.heights()) EXPECT_EQ(v, 10.0);
  EXPECT_THROW(c.HeightAt(-1.2, 0.0), ValidationError);
  EXPECT_TRUE(c.Contains(0.99, -0.99));
}

}  // namespace
}  // namespace wbpose
