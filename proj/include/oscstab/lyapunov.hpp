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
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "oscstab/sampling.hpp"
#include "oscstab/smooth_map.hpp"
#include "oscstab/vecfield.hpp"

namespace oscstab {

class FeedbackLaw;

/// Candidate control Lyapunov function. V must vanish with its gradient at
/// the origin and be positive elsewhere; both are checked on construction.
class LyapunovSpec {
 public:
  LyapunovSpec(SmoothMap v, std::optional<double> family_p = std::nullopt);

  int dim() const { return v_.in_dim(); }
  std::optional<double> family_p() const { return p_; }

  double value(const Vector& x) const { return v_(x)[0]; }
  /// Gradient as a column vector (the row covector, transposed).
  Vector gradient(const Vector& x) const;
  /// Hessian · d
  Vector hessian_vector(const Vector& x, const Vector& d) const;

 private:
  SmoothMap v_;
  std::optional<double> p_;
};

/// Sampled verdict on a sign condition.
struct DefinitenessReport {
  std::uint64_t sample_count = 0;
  std::uint64_t violation_count = 0;
  std::uint64_t evaluation_failures = 0;
  double worst_value = -std::numeric_limits<double>::infinity();
  Vector worst_point;
  Region region;
  std::uint64_t seed = 0;

  bool passed() const { return violation_count == 0 && evaluation_failures == 0; }
};

nlohmann::json to_json(const DefinitenessReport& report);

/// Decrease certificate W = alpha + gamma^2 beta.
struct Certificate {
  double W = 0.0;
  double alpha = 0.0;  ///< L_{g0} V
  double beta = 0.0;   ///< sum over S of L_{[g_i^I, g_j^I]} V
};

/// Evaluates the certificate at x using `gamma` (the law's own gain is
/// ignored so gain sweeps can reuse one law).
Certificate compute_W(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x,
                      double gamma);

/// Same, with the law's gain.
Certificate compute_W(const FeedbackLaw& law, const LyapunovSpec& lyap, const Vector& x);

/// Counts points with fn(x) >= 0 among N quasi-random points of the region.
DefinitenessReport negdef_scan(const std::function<double(const Vector&)>& fn, int dim,
                               const Region& region, std::uint64_t samples,
                               std::uint64_t seed);

struct GainBound {
  /// sup of -beta/alpha over points with |alpha| > tol_alpha.
  double c_ab = 0.0;
  /// +inf when c_ab <= 0, else 1/sqrt(c_ab).
  double gamma_max = 0.0;
  std::uint64_t admissible = 0;
  /// beta < 0 check on points with |alpha| <= tol_alpha.
  DefinitenessReport beta_report;

  bool unbounded() const { return std::isinf(gamma_max); }
};

GainBound gain_bound_scan(const FeedbackLaw& law, const LyapunovSpec& lyap,
                            const Region& region, std::uint64_t samples, double tol_alpha,
                            std::uint64_t seed);

struct C1Estimate {
  double supremum = -std::numeric_limits<double>::infinity();
  Vector worst_point;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  bool passed() const { return supremum < 1.0; }
};

/// Sampled sup of  grad V · Phi(x, gamma) / ||grad V||^2  for the law
/// synthesized from (sys, lyap) by inverting the bracket matrix.
C1Estimate check_c1(std::shared_ptr<const VectorFieldSystem> sys,
                    std::shared_ptr<const LyapunovSpec> lyap, double gamma,
                    const Region& region, std::uint64_t samples, std::uint64_t seed);

/// grad V · Phi(x, gamma) for the synthesized law, or nullopt when
/// ||grad V|| < 1e-12.
std::optional<double> c1_ratio(const FeedbackLaw& synthesized, const LyapunovSpec& lyap,
                               const Vector& x, double gamma);

}  // namespace oscstab
