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

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "oscstab/dual.hpp"

namespace oscstab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A smooth map R^in -> R^out built from one generic callable
///
///     [](auto x, auto out) { out[0] = x[0] * x[1]; }
///
/// where x and out are std::span over double, Dual1 or Dual2. The callable is
/// instantiated once per scalar type, so derivatives come from forward-mode
/// evaluation rather than differencing.
class SmoothMap {
 public:
  template <typename T>
  using Kernel = std::function<void(std::span<const T>, std::span<T>)>;

  SmoothMap() = default;

  template <typename F>
  SmoothMap(int in_dim, int out_dim, F f)
      : in_dim_(in_dim), out_dim_(out_dim), f0_(f), f1_(f), f2_(f) {}

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  explicit operator bool() const { return static_cast<bool>(f0_); }

  Vector operator()(const Vector& x) const;

  /// Df(x)·d
  Vector derivative(const Vector& x, const Vector& d) const;

  Matrix jacobian(const Vector& x) const;

  /// d/ds [ Df(x + s·d) · (w + s·dw) ] at s = 0, i.e. D²f(x)[w, d] + Df(x)·dw.
  Vector derivative_along(const Vector& x, const Vector& d, const Vector& w,
                          const Vector& dw) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  Kernel<double> f0_;
  Kernel<Dual1> f1_;
  Kernel<Dual2> f2_;
};

}  // namespace oscstab
