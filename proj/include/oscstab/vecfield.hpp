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

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oscstab/smooth_map.hpp"

namespace oscstab {

/// Ordered index pair (i, j), i < j, naming the bracket [f_i, f_j].
/// Indices are zero-based.
struct IndexPair {
  int i = 0;
  int j = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// "(12)" style label, one-based.
std::string pair_label(const IndexPair& pair);

/// One input field f_k with its Jacobian. The Jacobian is analytic when
/// supplied, otherwise it comes from dual-number evaluation of the field.
class VectorField {
 public:
  using JacobianFn = std::function<Matrix(const Vector&)>;

  VectorField() = default;
  explicit VectorField(SmoothMap map, JacobianFn analytic_jacobian = {})
      : map_(std::move(map)), jacobian_(std::move(analytic_jacobian)) {}

  Vector value(const Vector& x) const { return map_(x); }
  Matrix jacobian(const Vector& x) const { return jacobian_ ? jacobian_(x) : map_.jacobian(x); }
  const SmoothMap& map() const { return map_; }

 private:
  SmoothMap map_;
  JacobianFn jacobian_;
};

/// Driftless control-affine system  dx/dt = sum_k u_k f_k(x),  with the pair set
/// S whose brackets complete the input fields to a basis. Immutable.
class VectorFieldSystem {
 public:
  VectorFieldSystem(std::string name, int n, std::vector<VectorField> fields,
                    std::vector<IndexPair> pairs);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int m() const { return static_cast<int>(fields_.size()); }
  const std::vector<IndexPair>& pairs() const { return pairs_; }

  Vector field(int k, const Vector& x) const;
  Matrix field_jacobian(int k, const Vector& x) const;
  const VectorField& raw_field(int k) const { return fields_.at(k); }

 private:
  std::string name_;
  int n_;
  std::vector<VectorField> fields_;
  std::vector<IndexPair> pairs_;
};

/// Columns (f_1..f_m, f^{I_1}..f^{I_{n-m}}) at x.
struct BracketMatrix {
  Vector x;
  Matrix columns;
  /// 1-norm condition estimate; +inf when the factorization is singular.
  double condition = std::numeric_limits<double>::infinity();

  bool singular() const { return !std::isfinite(condition); }
};

struct BracketCheck {
  bool generating = false;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
};

/// [f_i, f_j](x) = Df_j(x) f_i(x) - Df_i(x) f_j(x)
Vector lie_bracket(const VectorFieldSystem& sys, int i, int j, const Vector& x);

/// d/ds [f_i, f_j](x + s·d) at s = 0.
Vector lie_bracket_derivative(const VectorFieldSystem& sys, int i, int j, const Vector& x,
                              const Vector& d);

BracketMatrix assemble_F(const VectorFieldSystem& sys, const Vector& x);

BracketCheck bracket_generating_check(const VectorFieldSystem& sys, const Vector& x,
                                      double tol = 1e-10);

/// Condition estimate from a partial-pivot LU; +inf when numerically singular.
double lu_condition(const Matrix& a);

}  // namespace oscstab
