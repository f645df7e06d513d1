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

#include "oscstab/vecfield.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "oscstab/errors.hpp"

namespace oscstab {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw EvaluationError(std::string("non-finite ") + what);
}

void check_index(const VectorFieldSystem& sys, int k) {
  if (k < 0 || k >= sys.m()) {
    std::ostringstream os;
    os << "field index " << k << " out of range [0, " << sys.m() << ")";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

std::string pair_label(const IndexPair& pair) {
  std::ostringstream os;
  os << '(' << pair.i + 1 << pair.j + 1 << ')';
  return os.str();
}

VectorFieldSystem::VectorFieldSystem(std::string name, int n, std::vector<VectorField> fields,
                                     std::vector<IndexPair> pairs)
    : name_(std::move(name)), n_(n), fields_(std::move(fields)), pairs_(std::move(pairs)) {
  const int m = static_cast<int>(fields_.size());
  if (n_ <= 0) throw InvalidArgument("state dimension must be positive");
  if (m < 2) throw InvalidArgument("at least two input fields are needed to form a bracket");
  if (m >= n_) throw InvalidArgument("input dimension must be smaller than state dimension");
  if (static_cast<int>(pairs_.size()) != n_ - m) {
    throw InvalidArgument("pair set must have exactly n - m entries");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& p : pairs_) {
    if (p.i < 0 || p.j >= m || p.i >= p.j) {
      throw InvalidArgument("pair " + pair_label(p) + " must satisfy 1 <= i < j <= m");
    }
    if (!seen.emplace(p.i, p.j).second) throw InvalidArgument("duplicate pair " + pair_label(p));
  }
  for (const auto& f : fields_) {
    if (f.map().in_dim() != n_ || f.map().out_dim() != n_) {
      throw InvalidArgument("field dimension does not match state dimension");
    }
  }

  Matrix at_origin(n_, m);
  const Vector zero = Vector::Zero(n_);
  for (int k = 0; k < m; ++k) at_origin.col(k) = field(k, zero);
  Eigen::JacobiSVD<Matrix> svd(at_origin);
  const auto& sv = svd.singularValues();
  if (sv.size() < m || sv[m - 1] <= 1e-12 * std::max(1.0, sv[0])) {
    throw InvalidArgument("input fields are not linearly independent at the origin");
  }
}

Vector VectorFieldSystem::field(int k, const Vector& x) const {
  Vector v = fields_.at(k).value(x);
  require_finite(v, "field value");
  return v;
}

Matrix VectorFieldSystem::field_jacobian(int k, const Vector& x) const {
  Matrix j = fields_.at(k).jacobian(x);
  require_finite(j, "field Jacobian");
  return j;
}

Vector lie_bracket(const VectorFieldSystem& sys, int i, int j, const Vector& x) {
  check_index(sys, i);
  check_index(sys, j);
  if (i == j) return Vector::Zero(sys.n());
  return sys.field_jacobian(j, x) * sys.field(i, x) - sys.field_jacobian(i, x) * sys.field(j, x);
}

Vector lie_bracket_derivative(const VectorFieldSystem& sys, int i, int j, const Vector& x,
                              const Vector& d) {
  check_index(sys, i);
  check_index(sys, j);
  if (i == j) return Vector::Zero(sys.n());
  const auto& fi = sys.raw_field(i).map();
  const auto& fj = sys.raw_field(j).map();
  const Vector wi = fi(x), wj = fj(x);
  const Vector dwi = fi.derivative(x, d), dwj = fj.derivative(x, d);
  Vector r = fj.derivative_along(x, d, wi, dwi) - fi.derivative_along(x, d, wj, dwj);
  require_finite(r, "bracket derivative");
  return r;
}

double lu_condition(const Matrix& a) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond < std::numeric_limits<double>::epsilon()) return kInf;
  return 1.0 / rcond;
}

BracketMatrix assemble_F(const VectorFieldSystem& sys, const Vector& x) {
  BracketMatrix out;
  out.x = x;
  out.columns.resize(sys.n(), sys.n());
  for (int k = 0; k < sys.m(); ++k) out.columns.col(k) = sys.field(k, x);
  int c = sys.m();
  for (const auto& p : sys.pairs()) out.columns.col(c++) = lie_bracket(sys, p.i, p.j, x);
  out.condition = lu_condition(out.columns);
  return out;
}

BracketCheck bracket_generating_check(const VectorFieldSystem& sys, const Vector& x, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("tolerance must lie in (0, 1)");
  const BracketMatrix f = assemble_F(sys, x);
  Eigen::JacobiSVD<Matrix> svd(f.columns);
  const auto& sv = svd.singularValues();
  BracketCheck out;
  out.largest_singular_value = sv[0];
  out.smallest_singular_value = sv[sv.size() - 1];
  out.generating = out.smallest_singular_value > tol * out.largest_singular_value;
  return out;
}

}  // namespace oscstab
