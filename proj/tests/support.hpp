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

// Independent numerical oracles and fixtures shared by the unit tests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "oscstab/controller.hpp"
#include "oscstab/lyapunov.hpp"
#include "oscstab/smooth_map.hpp"
#include "oscstab/vecfield.hpp"

namespace oscstab::test {

using Field = std::function<Vector(const Vector&)>;

/// Central-difference Jacobian-vector product.
inline Vector fd_directional(const Field& f, const Vector& x, const Vector& d, double h = 1e-5) {
  return (f(x + h * d) - f(x - h * d)) / (2.0 * h);
}

/// [a, b](x) = Db(x) a(x) - Da(x) b(x), derivatives by central differences.
inline Vector fd_bracket(const Field& a, const Field& b, const Vector& x, double h = 1e-5) {
  return fd_directional(b, x, a(x), h) - fd_directional(a, x, b(x), h);
}

/// Central-difference gradient of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-6) {
  Vector g(x.size());
  for (int k = 0; k < x.size(); ++k) {
    Vector e = Vector::Zero(x.size());
    e[k] = h;
    g[k] = (f(x + e) - f(x - e)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

/// Uniform point in the ball of the given radius, drawn with std::mt19937_64.
inline Vector random_ball_point(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni;
  Vector d(n);
  for (int k = 0; k < n; ++k) d[k] = normal(rng);
  return d.normalized() * radius * std::pow(uni(rng), 1.0 / n);
}

/// Polynomial fields f_k = e_k + sum of random quadratic monomials, with k < m.
struct PolynomialSystem {
  int n = 0;
  int m = 0;
  // coef[k][r][a][b]: coefficient of x_a x_b in component r of field k, plus linear terms.
  std::vector<std::vector<std::vector<double>>> quad;
  std::vector<std::vector<std::vector<double>>> lin;
  std::shared_ptr<const VectorFieldSystem> system;

  Vector eval(int k, const Vector& x) const {
    Vector out = Vector::Zero(n);
    out[k] = 1.0;
    for (int r = 0; r < n; ++r) {
      for (int a = 0; a < n; ++a) {
        out[r] += lin[k][r][a] * x[a];
        for (int b = 0; b < n; ++b) out[r] += quad[k][r][a * n + b] * x[a] * x[b];
      }
    }
    return out;
  }
};

inline PolynomialSystem make_polynomial_system(int n, int m, std::vector<IndexPair> pairs,
                                               std::uint64_t seed) {
  PolynomialSystem ps;
  ps.n = n;
  ps.m = m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  ps.quad.assign(m, std::vector<std::vector<double>>(n, std::vector<double>(n * n)));
  ps.lin.assign(m, std::vector<std::vector<double>>(n, std::vector<double>(n)));
  for (int k = 0; k < m; ++k) {
    for (int r = 0; r < n; ++r) {
      for (auto& c : ps.lin[k][r]) c = coef(rng);
      for (auto& c : ps.quad[k][r]) c = coef(rng);
    }
  }
  std::vector<VectorField> fields;
  for (int k = 0; k < m; ++k) {
    auto lin = ps.lin[k];
    auto quad = ps.quad[k];
    fields.emplace_back(SmoothMap(n, n, [n, k, lin, quad](auto x, auto out) {
      for (int r = 0; r < n; ++r) {
        out[r] = r == k ? 1.0 : 0.0;
        for (int a = 0; a < n; ++a) {
          out[r] = out[r] + lin[r][a] * x[a];
          for (int b = 0; b < n; ++b) out[r] = out[r] + quad[r][a * n + b] * x[a] * x[b];
        }
      }
    }));
  }
  ps.system = std::make_shared<const VectorFieldSystem>("poly", n, std::move(fields),
                                                        std::move(pairs));
  return ps;
}

/// n = 3, m = 2: f1 = e1, f2 = e2 + x1 e3, so [f1, f2] = e3.
inline std::shared_ptr<const VectorFieldSystem> lifted_integrator() {
  std::vector<VectorField> fields;
  fields.emplace_back(SmoothMap(3, 3, [](auto, auto out) {
    out[0] = 1.0;
    out[1] = 0.0;
    out[2] = 0.0;
  }));
  fields.emplace_back(SmoothMap(3, 3, [](auto x, auto out) {
    out[0] = 0.0;
    out[1] = 1.0;
    out[2] = x[0];
  }));
  return std::make_shared<const VectorFieldSystem>("lifted", 3, std::move(fields),
                                                   std::vector<IndexPair>{{0, 1}});
}

/// n = 3, m = 2 with f1 = e1 and f2 = (x1, 1 - x1, x2): the fields coincide at x = e1,
/// where F is singular.
inline std::shared_ptr<const VectorFieldSystem> coinciding_fields() {
  std::vector<VectorField> fields;
  fields.emplace_back(SmoothMap(3, 3, [](auto, auto out) {
    out[0] = 1.0;
    out[1] = 0.0;
    out[2] = 0.0;
  }));
  fields.emplace_back(SmoothMap(3, 3, [](auto x, auto out) {
    out[0] = x[0];
    out[1] = 1.0 - x[0];
    out[2] = x[1];
  }));
  return std::make_shared<const VectorFieldSystem>("coinciding", 3, std::move(fields),
                                                   std::vector<IndexPair>{{0, 1}});
}

inline std::shared_ptr<const LyapunovSpec> half_square_norm(int n) {
  return std::make_shared<const LyapunovSpec>(SmoothMap(n, 1, [n](auto x, auto out) {
    out[0] = 0.0 * x[0];
    for (int k = 0; k < n; ++k) out[0] = out[0] + 0.5 * x[k] * x[k];
  }));
}

/// Closed-form law with v0 = -gain * (x1, x2) and constant vtilde.
inline FeedbackLaw linear_law(std::shared_ptr<const VectorFieldSystem> sys, double gamma,
                              double eps, double gain = 1.0, double vtilde = 0.0) {
  auto source = std::make_shared<const ClosedFormComponents>(
      SmoothMap(3, 2,
                [gain](auto x, auto out) {
                  out[0] = -gain * x[0];
                  out[1] = -gain * x[1];
                }),
      SmoothMap(3, 1, [vtilde](auto x, auto out) { out[0] = vtilde + 0.0 * x[0]; }));
  return FeedbackLaw(std::move(sys), gamma, OscillatorAssignment({1}, eps), source,
                     LawMode::ClosedForm);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("oscstab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oscstab::test
