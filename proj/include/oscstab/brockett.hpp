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

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "oscstab/controller.hpp"
#include "oscstab/lyapunov.hpp"
#include "oscstab/vecfield.hpp"

namespace oscstab::brockett {

inline constexpr int kStateDim = 10;
inline constexpr int kInputDim = 4;
inline constexpr int kPairs = 6;

struct Config {
  double p = 1.0;
  double gamma = 0.5;
  double eps = 0.1;
  double H = 1.0;
  Vector x0;
};

/// Ten-state, four-input nilpotent system with S = (12),(13),(14),(23),(24),(34).
std::shared_ptr<const VectorFieldSystem> system();

/// V = 1/2 sum_{k<=4} x_k^2 + 1/(2p) sum_{k>=5} |x_k|^{2p}
std::shared_ptr<const LyapunovSpec> lyapunov(double p);

/// The six closed-form pair weights -sign(x_c) |x_c|^{2p-1} / 2, c = 5..10.
std::array<double, kPairs> vtilde(double p, const Vector& x);

/// Closed-form law with v0 = -(x1..x4) and the weights above.
FeedbackLaw closed_form_law(double p, double gamma, double eps,
                            const std::optional<std::vector<int>>& kappa_override = {});

/// Law synthesized by inverting the bracket matrix for V with exponent p.
FeedbackLaw synthesized_law(double p, double gamma, double eps,
                            const std::optional<std::vector<int>>& kappa_override = {});

struct ClosedFormW {
  double W = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Some x_c (c >= 5) is exactly zero with p <= 3/2, where the certificate
  /// is a sign(0) = 0 continuation rather than a derivative.
  bool kink = false;
};

/// The certificate written out in coordinates, independent of the generic
/// bracket machinery.
ClosedFormW certificate(double p, double gamma, const Vector& x);

struct GainInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// p = 1: (0, sqrt 2). p > 1: (0, 2 / sqrt((2p-1) H^{2p-1} (1+H))).
GainInterval stability_gain_range(double p, double H);

/// Named initial states: "fig1-left" and "fig1-right".
std::optional<Vector> preset_state(std::string_view name);

/// Exponent p that accompanies a named preset.
std::optional<double> preset_p(std::string_view name);

}  // namespace oscstab::brockett
