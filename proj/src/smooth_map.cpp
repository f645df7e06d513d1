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

#include "oscstab/smooth_map.hpp"

#include <vector>

namespace oscstab {

Vector SmoothMap::operator()(const Vector& x) const {
  Vector out = Vector::Zero(out_dim_);
  f0_(std::span<const double>(x.data(), x.size()), std::span<double>(out.data(), out.size()));
  return out;
}

Vector SmoothMap::derivative(const Vector& x, const Vector& d) const {
  std::vector<Dual1> in(in_dim_), out(out_dim_);
  for (int k = 0; k < in_dim_; ++k) in[k] = Dual1(x[k], d[k]);
  f1_(in, out);
  Vector r(out_dim_);
  for (int k = 0; k < out_dim_; ++k) r[k] = out[k].du;
  return r;
}

Matrix SmoothMap::jacobian(const Vector& x) const {
  Matrix jac(out_dim_, in_dim_);
  std::vector<Dual1> in(in_dim_), out(out_dim_);
  for (int c = 0; c < in_dim_; ++c) {
    for (int k = 0; k < in_dim_; ++k) in[k] = Dual1(x[k], k == c ? 1.0 : 0.0);
    f1_(in, out);
    for (int k = 0; k < out_dim_; ++k) jac(k, c) = out[k].du;
  }
  return jac;
}

Vector SmoothMap::derivative_along(const Vector& x, const Vector& d, const Vector& w,
                                   const Vector& dw) const {
  // Outer tangent carries s (direction d), inner tangent carries the
  // directional derivative along w(s) = w + s·dw.
  std::vector<Dual2> in(in_dim_), out(out_dim_);
  for (int k = 0; k < in_dim_; ++k) in[k] = Dual2(Dual1(x[k], d[k]), Dual1(w[k], dw[k]));
  f2_(in, out);
  Vector r(out_dim_);
  for (int k = 0; k < out_dim_; ++k) r[k] = out[k].du.du;
  return r;
}

}  // namespace oscstab
