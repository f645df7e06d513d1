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

#include "oscstab/controller.hpp"
#include "oscstab/lyapunov.hpp"

namespace oscstab {

enum class IntegrationMode { Classical, Sampled };

std::string to_string(IntegrationMode mode);

struct WindowRecord {
  int j = 0;
  double t = 0.0;
  double V = 0.0;      ///< V(x(j eps))
  double W = 0.0;      ///< certificate at x(j eps); NaN if it could not be evaluated
  double r_hat = 0.0;  ///< empirical remainder of the V increment over [j eps, (j+1) eps]
};

struct IntegrationOptions {
  int substeps = 400;        ///< RK4 steps per period
  int record_stride = 1;     ///< keep every k-th substep (must divide substeps)
  bool window_diagnostics = true;
  double divergence_norm = 1e6;
};

/// Closed-loop solution sampled on the RK4 grid. Window boundaries t = j eps
/// are always recorded, exactly once, with t computed as j * eps.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<double> V;
  std::vector<double> norm;
  /// Sample index of each window boundary j = 0..J.
  std::vector<std::size_t> boundary;
  std::vector<WindowRecord> windows;

  IntegrationMode mode = IntegrationMode::Classical;
  double eps = 0.0;
  int substeps = 0;
  int record_stride = 1;
  int solver_order = 4;
  bool diverged = false;

  const Vector& terminal() const { return x.back(); }
  std::size_t completed_windows() const { return boundary.empty() ? 0 : boundary.size() - 1; }
  const Vector& boundary_state(std::size_t j) const { return x[boundary[j]]; }
  double boundary_norm(std::size_t j) const { return norm[boundary[j]]; }
};

/// Number of windows J = round(T / eps); T must be positive.
int window_count(double horizon, double eps);

/// Fixed-step RK4 on dx/dt = sum_k u_k(x, t) f_k(x).
Trajectory integrate_classical(const FeedbackLaw& law, const LyapunovSpec& lyap,
                               const Vector& x0, double horizon,
                               const IntegrationOptions& options = {});

/// As integrate_classical, but the state argument of the feedback is held at
/// x(j eps) over [j eps, (j+1) eps); the time argument stays continuous.
Trajectory integrate_sampled(const FeedbackLaw& law, const LyapunovSpec& lyap,
                             const Vector& x0, double horizon,
                             const IntegrationOptions& options = {});

Trajectory integrate(IntegrationMode mode, const FeedbackLaw& law, const LyapunovSpec& lyap,
                     const Vector& x0, double horizon, const IntegrationOptions& options = {});

/// Truncated one-period expansion x0 + eps (g0 + gamma^2 sum_I [g_i^I, g_j^I])(x0).
struct CFPrediction {
  Vector x0;
  double eps = 0.0;
  Vector drift;         ///< g0(x0)
  Vector bracket_sum;   ///< gamma^2 sum_I [g_i^I, g_j^I](x0)
  Vector predicted;
};

CFPrediction chen_fliess_predict(const FeedbackLaw& law, const Vector& x0);

struct CFOrderRow {
  double eps = 0.0;
  double residual = 0.0;
  bool excluded = false;
};

struct CFOrderProbe {
  std::vector<CFOrderRow> rows;
  double exponent = 0.0;   ///< slope of log residual vs log eps
  double r2 = 0.0;
};

/// Residual of the truncated expansion against a reference integration with
/// 16x the substeps, over a ladder of periods. The law is re-derived for each
/// period. Residuals below 1e-13 are excluded from the fit.
CFOrderProbe cf_order_probe(const FeedbackLaw& law, const Vector& x0,
                            const std::vector<double>& eps_list, int substeps = 400);

/// One step of the ladder: ||x(eps) - prediction|| for the given law.
double cf_residual(const FeedbackLaw& law, const Vector& x0, int reference_substeps);

struct IncrementDiagnostics {
  std::vector<double> r_hat;
  double max_abs = 0.0;
};

/// r_j = [ (V_{j+1} - V_j) / eps - W_j ] / sqrt(eps), from the window records.
IncrementDiagnostics increment_diagnostics(const Trajectory& traj);

/// Quadrature moments of one oscillator channel over a single period.
struct OscillatorMoments {
  double integral = 0.0;      ///< int_0^eps phi dt
  double mean_square = 0.0;   ///< (1/eps) int_0^eps phi^2 dt
};

OscillatorMoments oscillator_moments(const OscillatorAssignment& osc, std::size_t pair,
                                     OscillatorRole role, int quad_steps = 10000);

/// Antisymmetrized iterated integral of the first oscillator of pair I
/// against the second of pair J over one period, by composite 5-point
/// Gauss-Legendre quadrature on `quad_steps` panels.
double iterated_integral_check(const OscillatorAssignment& osc, std::size_t pair_i,
                               std::size_t pair_j, int quad_steps = 10000);

}  // namespace oscstab
