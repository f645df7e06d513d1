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

#include "oscstab/controller.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "oscstab/errors.hpp"

namespace oscstab {

// ---------------------------------------------------------------------------
// Oscillators

OscillatorAssignment::OscillatorAssignment(std::vector<int> kappa, double eps)
    : OscillatorAssignment(unchecked(std::move(kappa), eps)) {
  std::set<int> seen;
  for (int k : kappa_) {
    if (!seen.insert(k).second) {
      throw InvalidArgument("frequency multipliers must be distinct (duplicate " +
                            std::to_string(k) + ")");
    }
  }
}

OscillatorAssignment OscillatorAssignment::unchecked(std::vector<int> kappa, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("period eps must be positive");
  if (kappa.empty()) throw InvalidArgument("at least one frequency multiplier is required");
  for (int k : kappa) {
    if (k < 1) throw InvalidArgument("frequency multipliers must be positive integers");
  }
  OscillatorAssignment a;
  a.kappa_ = std::move(kappa);
  a.eps_ = eps;
  return a;
}

double OscillatorAssignment::omega() const { return 2.0 * std::numbers::pi / eps_; }

double OscillatorAssignment::amplitude(std::size_t pair) const {
  return 2.0 * std::sqrt(kappa_.at(pair) * std::numbers::pi / eps_);
}

OscillatorAssignment assign_frequencies(const std::vector<IndexPair>& pairs, double eps,
                                        const std::optional<std::vector<int>>& kappa_override) {
  if (pairs.empty()) throw InvalidArgument("pair set must be nonempty");
  if (kappa_override) {
    if (kappa_override->size() != pairs.size()) {
      throw InvalidArgument("kappa override must have one entry per pair");
    }
    return OscillatorAssignment(*kappa_override, eps);
  }
  std::vector<int> kappa(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) kappa[k] = static_cast<int>(k) + 1;
  return OscillatorAssignment(std::move(kappa), eps);
}

double phi(const OscillatorAssignment& osc, std::size_t pair, OscillatorRole role, double t) {
  const double arg = osc.kappa().at(pair) * osc.omega() * t;
  const double a = osc.amplitude(pair);
  return role == OscillatorRole::First ? a * std::cos(arg) : a * std::sin(arg);
}

SplitComponents split_vI(double vtilde) {
  const double r = std::sqrt(std::abs(vtilde));
  return {r, r * sign(vtilde)};
}

// ---------------------------------------------------------------------------
// Component sources

Synthesis synthesize_components(const VectorFieldSystem& sys, const LyapunovSpec& lyap,
                              const Vector& x) {
  const BracketMatrix f = assemble_F(sys, x);
  if (!(f.condition < kMaxSynthesisCondition)) {
    std::ostringstream os;
    os << "bracket matrix is singular or ill-conditioned (condition " << f.condition << ")";
    throw SingularMatrixError(os.str(), f.condition);
  }
  const Vector grad = lyap.gradient(x);
  const Vector full = f.columns.partialPivLu().solve(-grad);
  const double residual = (f.columns * full + grad).norm();
  if (residual > 1e-10 * std::max(1.0, grad.norm())) {
    std::ostringstream os;
    os << "synthesis residual " << residual << " exceeds tolerance";
    throw SingularMatrixError(os.str(), f.condition);
  }
  Synthesis s;
  s.v0 = full.head(sys.m());
  s.vtilde = full.tail(sys.n() - sys.m());
  s.condition = f.condition;
  s.residual = residual;
  return s;
}

SynthesizedComponents::SynthesizedComponents(std::shared_ptr<const VectorFieldSystem> sys,
                                             std::shared_ptr<const LyapunovSpec> lyap)
    : sys_(std::move(sys)), lyap_(std::move(lyap)) {
  if (!sys_ || !lyap_) throw InvalidArgument("synthesis needs a system and a Lyapunov function");
  if (lyap_->dim() != sys_->n()) throw InvalidArgument("Lyapunov dimension mismatch");
}

Components SynthesizedComponents::evaluate(const Vector& x) const {
  Synthesis s = synthesize_components(*sys_, *lyap_, x);
  return {std::move(s.v0), std::move(s.vtilde)};
}

Vector SynthesizedComponents::vtilde_derivative(const Vector& x, const Vector& d) const {
  // Differentiate F(x) w(x) = -grad V(x):  F dw = -(dF[d] w + H d).
  const BracketMatrix f = assemble_F(*sys_, x);
  if (!(f.condition < kMaxSynthesisCondition)) {
    throw SingularMatrixError("bracket matrix is singular or ill-conditioned", f.condition);
  }
  const auto lu = f.columns.partialPivLu();
  const Vector w = lu.solve(-lyap_->gradient(x));
  Vector rhs = lyap_->hessian_vector(x, d);
  const int m = sys_->m();
  for (int k = 0; k < m; ++k) rhs += w[k] * (sys_->field_jacobian(k, x) * d);
  int c = m;
  for (const auto& p : sys_->pairs()) {
    rhs += w[c++] * lie_bracket_derivative(*sys_, p.i, p.j, x, d);
  }
  const Vector dw = lu.solve(-rhs);
  return dw.tail(sys_->n() - m);
}

ClosedFormComponents::ClosedFormComponents(SmoothMap v0, SmoothMap vtilde)
    : v0_(std::move(v0)), vtilde_(std::move(vtilde)) {
  if (v0_.in_dim() != vtilde_.in_dim()) throw InvalidArgument("closed-form input mismatch");
}

Components ClosedFormComponents::evaluate(const Vector& x) const { return {v0_(x), vtilde_(x)}; }

Vector ClosedFormComponents::vtilde_derivative(const Vector& x, const Vector& d) const {
  return vtilde_.derivative(x, d);
}

// ---------------------------------------------------------------------------
// Feedback law

FeedbackLaw::FeedbackLaw(std::shared_ptr<const VectorFieldSystem> sys, double gamma,
                         OscillatorAssignment oscillators,
                         std::shared_ptr<const ComponentSource> source, LawMode mode)
    : sys_(std::move(sys)),
      gamma_(gamma),
      osc_(std::move(oscillators)),
      source_(std::move(source)),
      mode_(mode) {
  if (!sys_ || !source_) throw InvalidArgument("feedback law needs a system and components");
  if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) throw InvalidArgument("gain must be >= 0");
  if (osc_.size() != sys_->pairs().size()) {
    throw InvalidArgument("one frequency multiplier per pair is required");
  }
}

Components FeedbackLaw::components(const Vector& x) const {
  Components c = source_->evaluate(x);
  if (c.v0.size() != sys_->m() || c.vtilde.size() != sys_->n() - sys_->m()) {
    throw InvalidArgument("component dimensions do not match the system");
  }
  if (!c.v0.allFinite()) throw EvaluationError("non-finite v0 component");
  for (Eigen::Index k = 0; k < c.vtilde.size(); ++k) {
    if (!std::isfinite(c.vtilde[k])) {
      throw EvaluationError("non-finite vtilde for pair " + pair_label(sys_->pairs()[k]));
    }
  }
  return c;
}

Vector FeedbackLaw::eval(const Components& c, double t) const {
  Vector u = c.v0;
  if (gamma_ == 0.0) return u;
  const auto& pairs = sys_->pairs();
  const double wt = osc_.omega() * t;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto s = split_vI(c.vtilde[k]);
    if (s.vi == 0.0) continue;
    const double a = osc_.amplitude(k);
    const double arg = osc_.kappa()[k] * wt;
    u[pairs[k].i] += gamma_ * s.vi * a * std::cos(arg);
    u[pairs[k].j] += gamma_ * s.vj * a * std::sin(arg);
  }
  return u;
}

Vector FeedbackLaw::eval(const Vector& x, double t) const { return eval(components(x), t); }

FeedbackLaw FeedbackLaw::with_gamma(double gamma) const {
  return FeedbackLaw(sys_, gamma, osc_, source_, mode_);
}

FeedbackLaw FeedbackLaw::with_eps(double eps) const {
  return FeedbackLaw(sys_, gamma_, OscillatorAssignment::unchecked(osc_.kappa(), eps), source_,
                     mode_);
}

FeedbackLaw make_synthesized_law(std::shared_ptr<const VectorFieldSystem> sys,
                                 std::shared_ptr<const LyapunovSpec> lyap, double gamma,
                                 OscillatorAssignment oscillators) {
  auto source = std::make_shared<SynthesizedComponents>(sys, std::move(lyap));
  return FeedbackLaw(std::move(sys), gamma, std::move(oscillators), std::move(source),
                     LawMode::Synthesized);
}

Vector drift_field(const FeedbackLaw& law, const Vector& x) {
  const auto& sys = law.system();
  const Components c = law.components(x);
  Vector g0 = Vector::Zero(sys.n());
  for (int k = 0; k < sys.m(); ++k) g0 += c.v0[k] * sys.field(k, x);
  return g0;
}

std::vector<Vector> bracket_gradient_terms(const FeedbackLaw& law, const Vector& x,
                                           const Components& c) {
  const auto& sys = law.system();
  const auto& pairs = sys.pairs();
  std::vector<Vector> fields(sys.m());
  for (int k = 0; k < sys.m(); ++k) fields[k] = sys.field(k, x);
  // Directional derivatives of every vtilde along every input field.
  std::vector<Vector> dv(sys.m());
  std::vector<bool> needed(sys.m(), false);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (c.vtilde[k] != 0.0) needed[pairs[k].i] = needed[pairs[k].j] = true;
  }
  for (int k = 0; k < sys.m(); ++k) {
    if (needed[k]) dv[k] = law.source().vtilde_derivative(x, fields[k]);
  }
  std::vector<Vector> out(pairs.size(), Vector::Zero(sys.n()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (c.vtilde[k] == 0.0) continue;
    const int i = pairs[k].i, j = pairs[k].j;
    out[k] = 0.5 * (fields[j] * dv[i][k] - fields[i] * dv[j][k]);
    if (!out[k].allFinite()) {
      throw EvaluationError("non-finite bracket term for pair " + pair_label(pairs[k]));
    }
  }
  return out;
}

std::vector<Vector> closed_loop_brackets(const FeedbackLaw& law, const Vector& x) {
  const auto& sys = law.system();
  const Components c = law.components(x);
  std::vector<Vector> out = bracket_gradient_terms(law, x, c);
  const auto& pairs = sys.pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (c.vtilde[k] != 0.0) out[k] += c.vtilde[k] * lie_bracket(sys, pairs[k].i, pairs[k].j, x);
  }
  return out;
}

}  // namespace oscstab
