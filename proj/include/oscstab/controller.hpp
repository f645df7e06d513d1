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

#include <memory>
#include <optional>
#include <vector>

#include "oscstab/lyapunov.hpp"
#include "oscstab/smooth_map.hpp"
#include "oscstab/vecfield.hpp"

namespace oscstab {

/// Integer frequency multipliers kappa_I, one per pair in S-order, and the
/// period eps. All multipliers are distinct (no resonance between pairs).
class OscillatorAssignment {
 public:
  OscillatorAssignment(std::vector<int> kappa, double eps);

  /// Same, without the distinctness check. Only for resonance experiments.
  static OscillatorAssignment unchecked(std::vector<int> kappa, double eps);

  const std::vector<int>& kappa() const { return kappa_; }
  double eps() const { return eps_; }
  double omega() const;
  /// 2 sqrt(kappa_I pi / eps)
  double amplitude(std::size_t pair) const;
  std::size_t size() const { return kappa_.size(); }

 private:
  OscillatorAssignment() = default;
  std::vector<int> kappa_;
  double eps_ = 0.0;
};

/// kappa_{I_k} = k in S-order, or the override when given (must be distinct).
OscillatorAssignment assign_frequencies(const std::vector<IndexPair>& pairs, double eps,
                                        const std::optional<std::vector<int>>& kappa_override = {});

enum class OscillatorRole { First, Second };

/// First role: a cos(kappa omega t); second role: a sin(kappa omega t).
double phi(const OscillatorAssignment& osc, std::size_t pair, OscillatorRole role, double t);

struct SplitComponents {
  double vi = 0.0;
  double vj = 0.0;
};

/// vi = sqrt|v|, vj = sqrt|v| sign(v), sign(0) = 0.
SplitComponents split_vI(double vtilde);

/// Time-independent part v0 (m entries) and the pair weights vtilde (n-m
/// entries, S-order).
struct Components {
  Vector v0;
  Vector vtilde;
};

/// Where the law's v0 and vtilde come from.
class ComponentSource {
 public:
  virtual ~ComponentSource() = default;
  virtual Components evaluate(const Vector& x) const = 0;
  /// Directional derivative of vtilde along d.
  virtual Vector vtilde_derivative(const Vector& x, const Vector& d) const = 0;
};

struct Synthesis {
  Vector v0;
  Vector vtilde;
  double condition = 0.0;
  double residual = 0.0;
};

inline constexpr double kMaxSynthesisCondition = 1e12;

/// Solves F(x) [v0; vtilde] = -grad V(x)^T.
/// Throws SingularMatrixError when cond F(x) >= 1e12.
Synthesis synthesize_components(const VectorFieldSystem& sys, const LyapunovSpec& lyap,
                              const Vector& x);

/// Components from the bracket-matrix inversion, recomputed per point.
class SynthesizedComponents final : public ComponentSource {
 public:
  SynthesizedComponents(std::shared_ptr<const VectorFieldSystem> sys,
                        std::shared_ptr<const LyapunovSpec> lyap);
  Components evaluate(const Vector& x) const override;
  Vector vtilde_derivative(const Vector& x, const Vector& d) const override;

 private:
  std::shared_ptr<const VectorFieldSystem> sys_;
  std::shared_ptr<const LyapunovSpec> lyap_;
};

/// User-supplied closed forms.
class ClosedFormComponents final : public ComponentSource {
 public:
  ClosedFormComponents(SmoothMap v0, SmoothMap vtilde);
  Components evaluate(const Vector& x) const override;
  Vector vtilde_derivative(const Vector& x, const Vector& d) const override;

 private:
  SmoothMap v0_;
  SmoothMap vtilde_;
};

enum class LawMode { Synthesized, ClosedForm };

/// u_k(x, t) = v0_k(x) + gamma sum_I v_k^I(x) phi_k^I(t)
class FeedbackLaw {
 public:
  FeedbackLaw(std::shared_ptr<const VectorFieldSystem> sys, double gamma,
              OscillatorAssignment oscillators, std::shared_ptr<const ComponentSource> source,
              LawMode mode);

  const VectorFieldSystem& system() const { return *sys_; }
  std::shared_ptr<const VectorFieldSystem> system_ptr() const { return sys_; }
  double gamma() const { return gamma_; }
  const OscillatorAssignment& oscillators() const { return osc_; }
  const ComponentSource& source() const { return *source_; }
  std::shared_ptr<const ComponentSource> source_ptr() const { return source_; }
  LawMode mode() const { return mode_; }

  /// Components at x; throws EvaluationError naming the offending pair on
  /// non-finite values.
  Components components(const Vector& x) const;

  /// Control value for state argument x at time t.
  Vector eval(const Vector& x, double t) const;

  /// Control value from precomputed components (used by the sampled
  /// integrator, which freezes the state argument).
  Vector eval(const Components& c, double t) const;

  /// Same law with another gain or period (period change re-derives the
  /// oscillator amplitudes, multipliers are kept).
  FeedbackLaw with_gamma(double gamma) const;
  FeedbackLaw with_eps(double eps) const;

 private:
  std::shared_ptr<const VectorFieldSystem> sys_;
  double gamma_;
  OscillatorAssignment osc_;
  std::shared_ptr<const ComponentSource> source_;
  LawMode mode_;
};

/// Convenience factory for the bracket-inversion law.
FeedbackLaw make_synthesized_law(std::shared_ptr<const VectorFieldSystem> sys,
                                 std::shared_ptr<const LyapunovSpec> lyap, double gamma,
                                 OscillatorAssignment oscillators);

/// g0(x) = sum_k v0_k(x) f_k(x)
Vector drift_field(const FeedbackLaw& law, const Vector& x);

/// [g_i^I, g_j^I](x) for every I in S, expanded as
///   vtilde f^I + 1/2 sign(vtilde)^2 (f_j (grad vtilde . f_i) - f_i (grad vtilde . f_j)),
/// which is the product-rule expansion with v_i grad v_j = v_j grad v_i =
/// grad vtilde / 2. The gradient terms are dropped where vtilde = 0.
std::vector<Vector> closed_loop_brackets(const FeedbackLaw& law, const Vector& x);

/// The gradient-term part of each closed-loop bracket (vtilde f^I removed).
std::vector<Vector> bracket_gradient_terms(const FeedbackLaw& law, const Vector& x,
                                           const Components& c);

}  // namespace oscstab
