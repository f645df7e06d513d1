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

#include "oscstab/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "oscstab/errors.hpp"
#include "oscstab/fit.hpp"

namespace oscstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGLNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGLWeights = {0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

template <typename F>
double gauss5(F f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < 5; ++k) s += kGLWeights[k] * f(mid + half * kGLNodes[k]);
  return s * half;
}

void validate(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x0,
              const IntegrationOptions& opt) {
  const auto& sys = law.system();
  if (x0.size() != sys.n()) throw InvalidArgument("initial state has the wrong dimension");
  if (!x0.allFinite()) throw InvalidArgument("initial state is not finite");
  if (lyap.dim() != sys.n()) throw InvalidArgument("Lyapunov dimension mismatch");
  const auto& kappa = law.oscillators().kappa();
  const int kmax = *std::max_element(kappa.begin(), kappa.end());
  if (opt.substeps < 50 * kmax) {
    throw InvalidArgument("substeps per period must be at least 50 * max kappa (" +
                          std::to_string(50 * kmax) + ")");
  }
  if (opt.record_stride < 1 || opt.substeps % opt.record_stride != 0) {
    throw InvalidArgument("record stride must divide the substep count");
  }
}

Vector closed_loop_rhs(const VectorFieldSystem& sys, const Vector& u, const Vector& x) {
  Vector dx = Vector::Zero(sys.n());
  for (int k = 0; k < sys.m(); ++k) {
    if (u[k] != 0.0) dx += u[k] * sys.field(k, x);
  }
  return dx;
}

}  // namespace

std::string to_string(IntegrationMode mode) {
  return mode == IntegrationMode::Classical ? "classical" : "sampled";
}

int window_count(double horizon, double eps) {
  if (!(horizon > 0.0) || !(eps > 0.0)) throw InvalidArgument("horizon and eps must be positive");
  const double j = std::round(horizon / eps);
  if (j < 1.0 || j > 1e8) throw InvalidArgument("horizon must span between 1 and 1e8 periods");
  return static_cast<int>(j);
}

// Advances x over window j with fixed-step RK4. Calls on_step(s, x) after
// each substep; returns false on blow-up (x is then left at the last good
// state).
template <typename OnStep>
bool advance_window(const FeedbackLaw& law, bool sampled, int j, int steps, double div_norm,
                    Vector& x, OnStep on_step) {
  const auto& sys = law.system();
  const double eps = law.oscillators().eps();
  const double h = eps / steps;
  const double t0 = j * eps;
  Components frozen;
  if (sampled) frozen = law.components(x);
  auto rhs = [&](const Vector& y, double t) {
    const Vector u = sampled ? law.eval(frozen, t) : law.eval(y, t);
    return closed_loop_rhs(sys, u, y);
  };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const Vector k1 = rhs(x, t);
    const Vector k2 = rhs(x + 0.5 * h * k1, t + 0.5 * h);
    const Vector k3 = rhs(x + 0.5 * h * k2, t + 0.5 * h);
    const Vector k4 = rhs(x + h * k3, t + h);
    Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite() || next.norm() > div_norm) return false;
    x = std::move(next);
    on_step(s, x);
  }
  return true;
}

Trajectory integrate(IntegrationMode mode, const FeedbackLaw& law, const LyapunovSpec& lyap,
                     const Vector& x0, double horizon, const IntegrationOptions& opt) {
  validate(law, lyap, x0, opt);
  const double eps = law.oscillators().eps();
  const int windows = window_count(horizon, eps);
  const int steps = opt.substeps;
  const double h = eps / steps;

  Trajectory tr;
  tr.mode = mode;
  tr.eps = eps;
  tr.substeps = steps;
  tr.record_stride = opt.record_stride;
  const std::size_t expected = static_cast<std::size_t>(windows) * (steps / opt.record_stride) + 1;
  tr.t.reserve(expected);
  tr.x.reserve(expected);
  tr.V.reserve(expected);
  tr.norm.reserve(expected);

  auto record = [&](double t, const Vector& x) {
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.V.push_back(lyap.value(x));
    tr.norm.push_back(x.norm());
  };

  Vector x = x0;
  record(0.0, x);
  tr.boundary.push_back(0);

  for (int j = 0; j < windows; ++j) {
    auto on_step = [&](int s, const Vector& y) {
      if ((s + 1) % opt.record_stride != 0) return;
      record(s + 1 == steps ? (j + 1) * eps : j * eps + (s + 1) * h, y);
    };
    if (!advance_window(law, mode == IntegrationMode::Sampled, j, steps, opt.divergence_norm, x,
                        on_step)) {
      tr.diverged = true;
      break;
    }
    tr.boundary.push_back(tr.t.size() - 1);
  }

  if (opt.window_diagnostics) {
    const std::size_t done = tr.completed_windows();
    tr.windows.reserve(done);
    for (std::size_t j = 0; j < done; ++j) {
      WindowRecord w;
      w.j = static_cast<int>(j);
      w.t = tr.t[tr.boundary[j]];
      w.V = tr.V[tr.boundary[j]];
      try {
        w.W = compute_W(law, lyap, tr.boundary_state(j)).W;
      } catch (const EvaluationError&) {
        w.W = kNaN;
      }
      const double v_next = tr.V[tr.boundary[j + 1]];
      w.r_hat = ((v_next - w.V) / eps - w.W) / std::sqrt(eps);
      tr.windows.push_back(w);
    }
  }
  return tr;
}

Trajectory integrate_classical(const FeedbackLaw& law, const LyapunovSpec& lyap,
                               const Vector& x0, double horizon,
                               const IntegrationOptions& options) {
  return integrate(IntegrationMode::Classical, law, lyap, x0, horizon, options);
}

Trajectory integrate_sampled(const FeedbackLaw& law, const LyapunovSpec& lyap,
                             const Vector& x0, double horizon,
                             const IntegrationOptions& options) {
  return integrate(IntegrationMode::Sampled, law, lyap, x0, horizon, options);
}

// ---------------------------------------------------------------------------

CFPrediction chen_fliess_predict(const FeedbackLaw& law, const Vector& x0) {
  const auto& sys = law.system();
  if (x0.size() != sys.n()) throw InvalidArgument("initial state has the wrong dimension");
  CFPrediction p;
  p.x0 = x0;
  p.eps = law.oscillators().eps();
  p.drift = drift_field(law, x0);
  p.bracket_sum = Vector::Zero(sys.n());
  if (law.gamma() != 0.0) {
    for (const Vector& b : closed_loop_brackets(law, x0)) p.bracket_sum += b;
    p.bracket_sum *= law.gamma() * law.gamma();
  }
  p.predicted = x0 + p.eps * (p.drift + p.bracket_sum);
  return p;
}

double cf_residual(const FeedbackLaw& law, const Vector& x0, int reference_substeps) {
  Vector x = x0;
  if (!advance_window(law, false, 0, reference_substeps,
                      std::numeric_limits<double>::infinity(), x, [](int, const Vector&) {})) {
    throw EvaluationError("reference integration diverged");
  }
  return (x - chen_fliess_predict(law, x0).predicted).norm();
}

CFOrderProbe cf_order_probe(const FeedbackLaw& law, const Vector& x0,
                            const std::vector<double>& eps_list, int substeps) {
  if (eps_list.size() < 3) throw InvalidArgument("cf order probe needs at least three periods");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1])) {
      throw InvalidArgument("cf order probe periods must be strictly decreasing");
    }
  }
  const auto& kappa = law.oscillators().kappa();
  const int kmax = *std::max_element(kappa.begin(), kappa.end());
  if (substeps < 50 * kmax) throw InvalidArgument("substeps per period below 50 * max kappa");

  CFOrderProbe probe;
  std::vector<double> lx, ly;
  for (double eps : eps_list) {
    const FeedbackLaw scaled = law.with_eps(eps);
    CFOrderRow row;
    row.eps = eps;
    row.residual = cf_residual(scaled, x0, 16 * substeps);
    row.excluded = !(row.residual >= 1e-13);
    if (!row.excluded) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(row.residual));
    }
    probe.rows.push_back(row);
  }
  if (lx.size() < 2) throw EvaluationError("cf order probe: residuals are at solver noise level");
  const LinearFit fit = linear_fit(lx, ly);
  probe.exponent = fit.slope;
  probe.r2 = fit.r2;
  return probe;
}

IncrementDiagnostics increment_diagnostics(const Trajectory& traj) {
  IncrementDiagnostics d;
  d.r_hat.reserve(traj.windows.size());
  for (const auto& w : traj.windows) {
    d.r_hat.push_back(w.r_hat);
    if (std::isfinite(w.r_hat)) d.max_abs = std::max(d.max_abs, std::abs(w.r_hat));
  }
  return d;
}

double iterated_integral_check(const OscillatorAssignment& osc, std::size_t pair_i,
                               std::size_t pair_j, int quad_steps) {
  if (quad_steps < 10000) throw InvalidArgument("quadrature needs at least 1e4 panels");
  const double eps = osc.eps();
  auto a = [&](double s) { return phi(osc, pair_i, OscillatorRole::First, s); };
  auto b = [&](double s) { return phi(osc, pair_j, OscillatorRole::Second, s); };
  const double h = eps / quad_steps;
  double cum_a = 0.0, cum_b = 0.0;  // integrals from 0 to the panel start
  double ab = 0.0, ba = 0.0;
  for (int p = 0; p < quad_steps; ++p) {
    const double lo = p * h, hi = (p + 1) * h;
    ab += gauss5([&](double s) { return a(s) * (cum_b + gauss5(b, lo, s)); }, lo, hi);
    ba += gauss5([&](double s) { return b(s) * (cum_a + gauss5(a, lo, s)); }, lo, hi);
    cum_a += gauss5(a, lo, hi);
    cum_b += gauss5(b, lo, hi);
  }
  return ab - ba;
}

OscillatorMoments oscillator_moments(const OscillatorAssignment& osc, std::size_t pair,
                                     OscillatorRole role, int quad_steps) {
  if (quad_steps < 10000) throw InvalidArgument("quadrature needs at least 1e4 panels");
  const double eps = osc.eps();
  auto f = [&](double s) { return phi(osc, pair, role, s); };
  auto f2 = [&](double s) { return f(s) * f(s); };
  const double h = eps / quad_steps;
  OscillatorMoments m;
  for (int p = 0; p < quad_steps; ++p) {
    m.integral += gauss5(f, p * h, (p + 1) * h);
    m.mean_square += gauss5(f2, p * h, (p + 1) * h);
  }
  m.mean_square /= eps;
  return m;
}

}  // namespace oscstab
