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

#include "oscstab/brockett.hpp"

#include <cmath>

#include "oscstab/errors.hpp"

namespace oscstab::brockett {

namespace {

// Bracket coordinate (zero-based) of each pair, in S-order.
constexpr std::array<int, kPairs> kBracketCoord = {4, 5, 6, 7, 8, 9};
constexpr std::array<IndexPair, kPairs> kPairList = {
    IndexPair{0, 1}, IndexPair{0, 2}, IndexPair{0, 3},
    IndexPair{1, 2}, IndexPair{1, 3}, IndexPair{2, 3}};

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent p must be >= 1");
}

// f_k written once for every scalar type.
template <int K>
struct Field {
  template <typename X, typename Out>
  void operator()(X x, Out out) const {
    using T = typename Out::element_type;
    for (auto& o : out) o = T(0.0);
    out[K] = T(1.0);
    if constexpr (K == 0) {
      out[4] = -x[1];
      out[5] = -x[2];
      out[6] = -x[3];
    } else if constexpr (K == 1) {
      out[4] = x[0];
      out[7] = -x[2];
      out[8] = -x[3];
    } else if constexpr (K == 2) {
      out[5] = x[0];
      out[7] = x[1];
      out[9] = -x[3];
    } else {
      out[6] = x[0];
      out[8] = x[1];
      out[9] = x[2];
    }
  }
};

// The Jacobians are constant.
Matrix field_jacobian(int k) {
  Matrix j = Matrix::Zero(kStateDim, kStateDim);
  switch (k) {
    case 0: j(4, 1) = -1; j(5, 2) = -1; j(6, 3) = -1; break;
    case 1: j(4, 0) = 1;  j(7, 2) = -1; j(8, 3) = -1; break;
    case 2: j(5, 0) = 1;  j(7, 1) = 1;  j(9, 3) = -1; break;
    default: j(6, 0) = 1; j(8, 1) = 1;  j(9, 2) = 1;  break;
  }
  return j;
}

template <int K>
VectorField make_field() {
  const Matrix jac = field_jacobian(K);
  return VectorField(SmoothMap(kStateDim, kStateDim, Field<K>{}),
                     [jac](const Vector&) { return jac; });
}

SmoothMap vtilde_map(double p) {
  return SmoothMap(kStateDim, kPairs, [p](auto x, auto out) {
    for (int k = 0; k < kPairs; ++k) {
      const auto& xc = x[kBracketCoord[k]];
      out[k] = -0.5 * sign(xc) * pow(abs(xc), 2.0 * p - 1.0);
    }
  });
}

SmoothMap v0_map() {
  return SmoothMap(kStateDim, kInputDim, [](auto x, auto out) {
    for (int k = 0; k < kInputDim; ++k) out[k] = -x[k];
  });
}

}  // namespace

std::shared_ptr<const VectorFieldSystem> system() {
  static const auto sys = std::make_shared<const VectorFieldSystem>(
      "brockett10", kStateDim,
      std::vector<VectorField>{make_field<0>(), make_field<1>(), make_field<2>(), make_field<3>()},
      std::vector<IndexPair>(kPairList.begin(), kPairList.end()));
  return sys;
}

std::shared_ptr<const LyapunovSpec> lyapunov(double p) {
  require_p(p);
  return std::make_shared<const LyapunovSpec>(
      SmoothMap(kStateDim, 1,
                [p](auto x, auto out) {
                  using T = typename decltype(out)::element_type;
                  T v = T(0.0);
                  for (int k = 0; k < kInputDim; ++k) v += 0.5 * x[k] * x[k];
                  for (int k = kInputDim; k < kStateDim; ++k) {
                    v += pow(abs(x[k]), 2.0 * p) / (2.0 * p);
                  }
                  out[0] = v;
                }),
      p);
}

std::array<double, kPairs> vtilde(double p, const Vector& x) {
  require_p(p);
  std::array<double, kPairs> out{};
  for (int k = 0; k < kPairs; ++k) {
    const double xc = x[kBracketCoord[k]];
    out[k] = -0.5 * sign(xc) * std::pow(std::abs(xc), 2.0 * p - 1.0);
  }
  return out;
}

FeedbackLaw closed_form_law(double p, double gamma, double eps,
                            const std::optional<std::vector<int>>& kappa_override) {
  require_p(p);
  auto sys = system();
  auto osc = assign_frequencies(sys->pairs(), eps, kappa_override);
  auto source = std::make_shared<ClosedFormComponents>(v0_map(), vtilde_map(p));
  return FeedbackLaw(sys, gamma, std::move(osc), std::move(source), LawMode::ClosedForm);
}

FeedbackLaw synthesized_law(double p, double gamma, double eps,
                            const std::optional<std::vector<int>>& kappa_override) {
  auto sys = system();
  return make_synthesized_law(sys, lyapunov(p), gamma,
                              assign_frequencies(sys->pairs(), eps, kappa_override));
}

ClosedFormW certificate(double p, double gamma, const Vector& x) {
  require_p(p);
  if (x.size() != kStateDim) throw InvalidArgument("Brockett state must have 10 entries");
  // grad V: x_k for k <= 4, sign(x_c) |x_c|^{2p-1} beyond.
  std::array<double, kStateDim> g{};
  for (int k = 0; k < kStateDim; ++k) {
    g[k] = k < kInputDim ? x[k] : sign(x[k]) * std::pow(std::abs(x[k]), 2.0 * p - 1.0);
  }
  // L_k = grad V . f_k
  const std::array<double, kInputDim> L = {
      x[0] - g[4] * x[1] - g[5] * x[2] - g[6] * x[3],
      x[1] + g[4] * x[0] - g[7] * x[2] - g[8] * x[3],
      x[2] + g[5] * x[0] + g[7] * x[1] - g[9] * x[3],
      x[3] + g[6] * x[0] + g[8] * x[1] + g[9] * x[2],
  };
  ClosedFormW out;
  for (int k = 0; k < kInputDim; ++k) out.alpha -= x[k] * x[k];
  // For I = (ij) with bracket coordinate c: f_i[c] = -x_j and f_j[c] = x_i, so
  //   L_{[g_i,g_j]} V = -|x_c|^{4p-2} + (2p-1)/4 sign(x_c)^2 |x_c|^{2p-2} (L_i x_i + L_j x_j).
  for (int k = 0; k < kPairs; ++k) {
    const int i = kPairList[k].i, j = kPairList[k].j;
    const double xc = x[kBracketCoord[k]];
    if (xc == 0.0) {
      if (p <= 1.5) out.kink = true;
      continue;
    }
    const double ac = std::abs(xc);
    out.beta += -std::pow(ac, 4.0 * p - 2.0) +
                0.25 * (2.0 * p - 1.0) * std::pow(ac, 2.0 * p - 2.0) * (L[i] * x[i] + L[j] * x[j]);
  }
  out.W = out.alpha + gamma * gamma * out.beta;
  return out;
}

GainInterval stability_gain_range(double p, double H) {
  require_p(p);
  if (!(H > 0.0)) throw InvalidArgument("domain radius H must be positive");
  if (p == 1.0) return {0.0, std::sqrt(2.0)};
  return {0.0, 2.0 / std::sqrt((2.0 * p - 1.0) * std::pow(H, 2.0 * p - 1.0) * (1.0 + H))};
}

std::optional<Vector> preset_state(std::string_view name) {
  Vector x(kStateDim);
  if (name == "fig1-left") {
    x << 1, -1, 1.5, -0.5, 2, -2, 2.5, -2.5, 3, -3;
    return x;
  }
  if (name == "fig1-right") {
    x << 1, -1, 1, -1, 1, -1, 1, -1, 1, -1;
    return x;
  }
  return std::nullopt;
}

std::optional<double> preset_p(std::string_view name) {
  if (name == "fig1-left") return 1.0;
  if (name == "fig1-right") return 1.5;
  return std::nullopt;
}

}  // namespace oscstab::brockett
