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

#include "oscstab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "oscstab/controller.hpp"
#include "oscstab/errors.hpp"

namespace oscstab {

namespace {

// Runs `visit(acc, index, x)` over sample indices [0, n), split into
// contiguous chunks, then folds the per-chunk accumulators in chunk order.
template <typename Acc, typename Visit, typename Merge>
Acc parallel_scan(const RegionSampler& sampler, std::uint64_t n, Acc init, Visit visit,
                  Merge merge) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(hw, n / 256));
  std::vector<Acc> partial(chunks, init);
  auto work = [&](std::uint64_t c) {
    const std::uint64_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
    for (std::uint64_t k = lo; k < hi; ++k) visit(partial[c], k, sampler.point(k));
  };
  if (chunks == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) workers.emplace_back(work, c);
  }
  Acc out = init;
  for (auto& p : partial) merge(out, p);
  return out;
}

void merge_report(DefinitenessReport& into, const DefinitenessReport& from) {
  into.sample_count += from.sample_count;
  into.violation_count += from.violation_count;
  into.evaluation_failures += from.evaluation_failures;
  if (from.worst_point.size() > 0 &&
      (into.worst_point.size() == 0 || from.worst_value > into.worst_value)) {
    into.worst_value = from.worst_value;
    into.worst_point = from.worst_point;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LyapunovSpec::LyapunovSpec(SmoothMap v, std::optional<double> family_p)
    : v_(std::move(v)), p_(family_p) {
  if (v_.out_dim() != 1 || v_.in_dim() <= 0) throw InvalidArgument("V must map R^n to R");
  if (p_ && !(*p_ >= 1.0)) throw InvalidArgument("family exponent p must be >= 1");
  const Vector zero = Vector::Zero(v_.in_dim());
  if (std::abs(value(zero)) > 1e-14) throw InvalidArgument("V(0) must be 0");
  if (gradient(zero).norm() > 1e-12) throw InvalidArgument("grad V(0) must be 0");
  RegionSampler sampler(v_.in_dim(), Region::ball(1.0, 1e-3), 0x5eed);
  for (std::uint64_t k = 0; k < 256; ++k) {
    if (!(value(sampler.point(k)) > 0.0)) {
      throw InvalidArgument("V is not positive on sampled points of the unit ball");
    }
  }
}

Vector LyapunovSpec::gradient(const Vector& x) const { return v_.jacobian(x).row(0).transpose(); }

Vector LyapunovSpec::hessian_vector(const Vector& x, const Vector& d) const {
  const int n = dim();
  Vector out(n);
  Vector e = Vector::Zero(n);
  const Vector zero = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    e.setZero();
    e[k] = 1.0;
    out[k] = v_.derivative_along(x, d, e, zero)[0];
  }
  return out;
}

nlohmann::json to_json(const DefinitenessReport& r) {
  nlohmann::json worst = nlohmann::json::array();
  for (Eigen::Index k = 0; k < r.worst_point.size(); ++k) worst.push_back(r.worst_point[k]);
  return {
      {"region", r.region.describe()},
      {"N", r.sample_count},
      {"seed", r.seed},
      {"violations", r.violation_count},
      {"evaluation_failures", r.evaluation_failures},
      {"worst_value", std::isfinite(r.worst_value) ? nlohmann::json(r.worst_value) : nlohmann::json()},
      {"worst_point", worst},
  };
}

// ---------------------------------------------------------------------------

Certificate compute_W(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x,
                      double gamma) {
  const Vector grad = lyap.gradient(x);
  if (!grad.allFinite()) throw EvaluationError("non-finite Lyapunov gradient");
  Certificate c;
  if (grad.isZero(0.0)) return c;
  c.alpha = grad.dot(drift_field(law, x));
  double beta = 0.0;
  for (const Vector& b : closed_loop_brackets(law, x)) beta += grad.dot(b);
  c.beta = beta;
  c.W = c.alpha + gamma * gamma * c.beta;
  if (!std::isfinite(c.W)) throw EvaluationError("non-finite certificate");
  return c;
}

Certificate compute_W(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x) {
  return compute_W(law, lyap, x, law.gamma());
}

DefinitenessReport negdef_scan(const std::function<double(const Vector&)>& fn, int dim,
                               const Region& region, std::uint64_t samples,
                               std::uint64_t seed) {
  if (!(region.r_min > 0.0)) throw InvalidArgument("negdef scan needs r_min > 0");
  RegionSampler sampler(dim, region, seed);
  DefinitenessReport init;
  init.region = region;
  init.seed = seed;
  auto visit = [&](DefinitenessReport& acc, std::uint64_t, const Vector& x) {
    ++acc.sample_count;
    double v;
    try {
      v = fn(x);
    } catch (const EvaluationError&) {
      ++acc.evaluation_failures;
      return;
    }
    if (!std::isfinite(v)) {
      ++acc.evaluation_failures;
      return;
    }
    if (v >= 0.0) ++acc.violation_count;
    if (acc.worst_point.size() == 0 || v > acc.worst_value) {
      acc.worst_value = v;
      acc.worst_point = x;
    }
  };
  DefinitenessReport out = parallel_scan(sampler, samples, init, visit, merge_report);
  out.region = region;
  out.seed = seed;
  return out;
}

GainBound gain_bound_scan(const FeedbackLaw& law, const LyapunovSpec& lyap,
                            const Region& region, std::uint64_t samples, double tol_alpha,
                            std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("gain-bound scan needs at least one sample");
  if (!(tol_alpha > 0.0)) throw InvalidArgument("tol_alpha must be positive");
  RegionSampler sampler(law.system().n(), region, seed);

  struct Acc {
    double c_ab = -std::numeric_limits<double>::infinity();
    std::uint64_t admissible = 0;
    DefinitenessReport beta;
  };
  Acc init;
  init.beta.region = region;
  init.beta.seed = seed;
  auto visit = [&](Acc& acc, std::uint64_t, const Vector& x) {
    Certificate c;
    try {
      c = compute_W(law, lyap, x, 1.0);
    } catch (const EvaluationError&) {
      ++acc.beta.evaluation_failures;
      return;
    }
    if (std::abs(c.alpha) > tol_alpha) {
      ++acc.admissible;
      acc.c_ab = std::max(acc.c_ab, -c.beta / c.alpha);
      return;
    }
    if (x.norm() < region.r_min) return;
    ++acc.beta.sample_count;
    if (c.beta >= 0.0) ++acc.beta.violation_count;
    if (acc.beta.worst_point.size() == 0 || c.beta > acc.beta.worst_value) {
      acc.beta.worst_value = c.beta;
      acc.beta.worst_point = x;
    }
  };
  auto merge = [](Acc& into, const Acc& from) {
    into.c_ab = std::max(into.c_ab, from.c_ab);
    into.admissible += from.admissible;
    merge_report(into.beta, from.beta);
  };
  const Acc acc = parallel_scan(sampler, samples, init, visit, merge);
  if (acc.admissible == 0) {
    throw InvalidArgument("no admissible samples with |alpha| > tol_alpha in the region");
  }
  GainBound out;
  out.c_ab = acc.c_ab;
  out.admissible = acc.admissible;
  out.gamma_max = out.c_ab <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : 1.0 / std::sqrt(out.c_ab);
  out.beta_report = acc.beta;
  out.beta_report.region = region;
  out.beta_report.seed = seed;
  return out;
}

std::optional<double> c1_ratio(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x,
                               double gamma) {
  const Vector grad = lyap.gradient(x);
  const double g2 = grad.squaredNorm();
  if (!(std::sqrt(g2) >= 1e-12)) return std::nullopt;
  const auto& sys = law.system();
  const auto& pairs = sys.pairs();
  const Components c = law.components(x);
  const std::vector<Vector> grad_terms = bracket_gradient_terms(law, x, c);
  Vector phi = Vector::Zero(sys.n());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (c.vtilde[k] == 0.0) continue;
    phi += (gamma * gamma - 1.0) * c.vtilde[k] * lie_bracket(sys, pairs[k].i, pairs[k].j, x);
    phi += gamma * gamma * grad_terms[k];
  }
  return grad.dot(phi) / g2;
}

C1Estimate check_c1(std::shared_ptr<const VectorFieldSystem> sys,
                    std::shared_ptr<const LyapunovSpec> lyap, double gamma,
                    const Region& region, std::uint64_t samples, std::uint64_t seed) {
  // Phi does not depend on the oscillators; any valid assignment will do.
  const FeedbackLaw law =
      make_synthesized_law(sys, lyap, gamma, assign_frequencies(sys->pairs(), 1.0));
  RegionSampler sampler(sys->n(), region, seed);
  auto visit = [&](C1Estimate& acc, std::uint64_t, const Vector& x) {
    const auto r = c1_ratio(law, *lyap, x, gamma);
    if (!r) {
      ++acc.skipped;
      return;
    }
    ++acc.evaluated;
    if (acc.worst_point.size() == 0 || *r > acc.supremum) {
      acc.supremum = *r;
      acc.worst_point = x;
    }
  };
  auto merge = [](C1Estimate& into, const C1Estimate& from) {
    into.evaluated += from.evaluated;
    into.skipped += from.skipped;
    if (from.worst_point.size() > 0 &&
        (into.worst_point.size() == 0 || from.supremum > into.supremum)) {
      into.supremum = from.supremum;
      into.worst_point = from.worst_point;
    }
  };
  C1Estimate out = parallel_scan(sampler, samples, C1Estimate{}, visit, merge);
  if (out.evaluated == 0) throw InvalidArgument("c1 scan: every sampled point had grad V = 0");
  return out;
}

}  // namespace oscstab
