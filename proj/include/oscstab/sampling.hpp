// Copyright 2026 The oscstab Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscstab/smooth_map.hpp"

namespace oscstab {

/// Sampling domain for definiteness scans. Every shape excludes the shell
/// ||x|| < r_min around the origin.
struct Region {
  enum class Shape {
    Ball,   ///< r_min <= ||x|| <= radius
    Box,    ///< |x_k| <= radius for all k
    Split,  ///< ||x_head|| <= radius, ||x_tail|| <= tail_radius, head = first `split` coords
  };

  Shape shape = Shape::Ball;
  double radius = 1.0;
  double r_min = 1e-6;
  int split = 0;
  double tail_radius = 1.0;

  static Region ball(double radius, double r_min = 1e-6) {
    return {Shape::Ball, radius, r_min, 0, 0.0};
  }
  static Region box(double half_width, double r_min = 1e-6) {
    return {Shape::Box, half_width, r_min, 0, 0.0};
  }
  static Region split_ball(int split, double head_radius, double tail_radius,
                           double r_min = 1e-6) {
    return {Shape::Split, head_radius, r_min, split, tail_radius};
  }

  bool contains(const Vector& x) const;
  std::string describe() const;
};

/// Scrambled Halton points mapped into a Region. Point k is a pure function
/// of (dimension, region, seed, k), so scans can be split across workers and
/// still reproduce bit-for-bit.
class RegionSampler {
 public:
  RegionSampler(int dim, Region region, std::uint64_t seed);

  Vector point(std::uint64_t index) const;
  int dim() const { return dim_; }
  const Region& region() const { return region_; }

 private:
  double halton(int axis, std::uint64_t index) const;
  Vector ball_point(int dim, int axis0, double r_lo, double r_hi, std::uint64_t index) const;

  int dim_;
  Region region_;
  std::vector<int> bases_;
  std::vector<std::vector<int>> permutations_;
};

/// Cheap deterministic uniform generator (SplitMix64) for tests and oracles.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace oscstab
