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

#ifndef WBPOSE_COMMON_H_
#define WBPOSE_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wbpose {

// Input or configuration does not satisfy a documented contract. The CLI maps
// this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation produced non-finite values or otherwise failed at run time.
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double DegToRad(double deg) { return deg * kPi / 180.0; }
inline constexpr double RadToDeg(double rad) { return rad * 180.0 / kPi; }

// 64-bit FNV-1a. Used for stable content hashes in manifests and for deriving
// child seeds; std::hash is not stable across implementations.
std::uint64_t Fnv1a64(std::string_view data);
std::string HashHex(std::uint64_t hash);

// Seeded pseudo-random generator with portable sampling routines.
//
// std::uniform_*_distribution are implementation-defined, so every draw here
// is derived directly from the (standardized) mt19937_64 bit stream. Child
// generators are split deterministically from the seed and a tag, which gives
// each module its own stream regardless of call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform in [lo, hi). Returns lo when lo == hi.
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  // Child generator whose seed depends only on this generator's seed and
  // `tag`, not on how many numbers were drawn.
  Rng Split(std::string_view tag) const;
  Rng Split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace wbpose

#endif  // WBPOSE_COMMON_H_
