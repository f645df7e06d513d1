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

#include "oscstab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "oscstab/errors.hpp"

namespace oscstab {

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) { prime = false; break; }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

// Map a uniform in (0,1) to a standard normal deviate.
double normal_quantile(double u) {
  u = std::clamp(u, 1e-15, 1.0 - 1e-15);
  return std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool Region::contains(const Vector& x) const {
  const double norm = x.norm();
  if (norm < r_min * (1.0 - 1e-12)) return false;
  switch (shape) {
    case Shape::Ball:
      return norm <= radius * (1.0 + 1e-12);
    case Shape::Box:
      return x.cwiseAbs().maxCoeff() <= radius * (1.0 + 1e-12);
    case Shape::Split:
      return x.head(split).norm() <= radius * (1.0 + 1e-12) &&
             x.tail(x.size() - split).norm() <= tail_radius * (1.0 + 1e-12);
  }
  return false;
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (shape) {
    case Shape::Ball:
      os << "ball(radius=" << radius << ",r_min=" << r_min << ")";
      break;
    case Shape::Box:
      os << "box(half_width=" << radius << ",r_min=" << r_min << ")";
      break;
    case Shape::Split:
      os << "split(head=" << split << ",head_radius=" << radius
         << ",tail_radius=" << tail_radius << ",r_min=" << r_min << ")";
      break;
  }
  return os.str();
}

RegionSampler::RegionSampler(int dim, Region region, std::uint64_t seed)
    : dim_(dim), region_(region) {
  if (dim <= 0) throw InvalidArgument("sampler dimension must be positive");
  if (!(region.radius > 0.0) || region.r_min < 0.0) {
    throw InvalidArgument("region radius must be positive and r_min non-negative");
  }
  if (region.shape == Region::Shape::Ball && region.r_min >= region.radius) {
    throw InvalidArgument("region r_min must be below the radius");
  }
  if (region.shape == Region::Shape::Split &&
      (region.split <= 0 || region.split >= dim || !(region.tail_radius > 0.0))) {
    throw InvalidArgument("split region needs 0 < split < dim and a positive tail radius");
  }
  // Ball/split need one extra axis per ball for the radius.
  const int axes = dim + 2;
  bases_ = first_primes(axes);
  SplitMix64 rng(seed);
  permutations_.resize(axes);
  for (int a = 0; a < axes; ++a) {
    auto& perm = permutations_[a];
    perm.resize(bases_[a]);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = bases_[a] - 1; k > 0; --k) {
      std::swap(perm[k], perm[rng.next() % static_cast<std::uint64_t>(k + 1)]);
    }
  }
}

double RegionSampler::halton(int axis, std::uint64_t index) const {
  const int base = bases_[axis];
  const auto& perm = permutations_[axis];
  const double inv = 1.0 / base;
  double scale = inv;
  double value = 0.0;
  // Fixed digit count so permuted trailing zeros contribute consistently.
  std::uint64_t k = index + 1;
  while (scale > 1e-17) {
    value += perm[k % base] * scale;
    k /= base;
    scale *= inv;
  }
  return value;
}

Vector RegionSampler::ball_point(int dim, int axis0, double r_lo, double r_hi,
                                 std::uint64_t index) const {
  Vector z(dim);
  for (int k = 0; k < dim; ++k) z[k] = normal_quantile(halton(axis0 + k, index));
  double zn = z.norm();
  if (zn == 0.0) {
    z.setZero();
    z[0] = 1.0;
    zn = 1.0;
  }
  const double u = halton(axis0 + dim, index);
  const double lo = std::pow(r_lo, dim), hi = std::pow(r_hi, dim);
  const double r = std::pow(lo + u * (hi - lo), 1.0 / dim);
  return z * (r / zn);
}

Vector RegionSampler::point(std::uint64_t index) const {
  switch (region_.shape) {
    case Region::Shape::Ball:
      return ball_point(dim_, 0, region_.r_min, region_.radius, index);
    case Region::Shape::Box: {
      // Reject the (tiny) inner shell by walking the index stream.
      for (std::uint64_t k = index;; k += 0x100000000ULL) {
        Vector x(dim_);
        for (int a = 0; a < dim_; ++a) x[a] = region_.radius * (2.0 * halton(a, k) - 1.0);
        if (x.norm() >= region_.r_min) return x;
      }
    }
    case Region::Shape::Split: {
      const int head = region_.split, tail = dim_ - region_.split;
      for (std::uint64_t k = index;; k += 0x100000000ULL) {
        Vector x(dim_);
        x.head(head) = ball_point(head, 0, 0.0, region_.radius, k);
        x.tail(tail) = ball_point(tail, head + 1, 0.0, region_.tail_radius, k);
        if (x.norm() >= region_.r_min) return x;
      }
    }
  }
  return Vector::Zero(dim_);
}

}  // namespace oscstab
