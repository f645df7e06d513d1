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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oscstab/config.hpp"
#include "oscstab/controller.hpp"
#include "oscstab/lyapunov.hpp"
#include "oscstab/vecfield.hpp"

namespace oscstab {

/// A named system selectable from a run config.
struct SystemEntry {
  std::string name;
  std::function<std::shared_ptr<const VectorFieldSystem>()> system;
  std::function<std::shared_ptr<const LyapunovSpec>(double p)> lyapunov;
  /// Closed-form law, when the system has one.
  std::function<FeedbackLaw(double p, double gamma, double eps,
                            const std::optional<std::vector<int>>& kappa)>
      closed_form;
  std::function<std::optional<Vector>(std::string_view)> preset;
};

/// Throws ConfigError for unknown names.
const SystemEntry& find_system(std::string_view name);
std::vector<std::string> registered_systems();

/// Everything a subcommand needs, built from a validated config.
struct Setup {
  const SystemEntry* entry = nullptr;
  std::shared_ptr<const VectorFieldSystem> system;
  std::shared_ptr<const LyapunovSpec> lyapunov;
  std::shared_ptr<const FeedbackLaw> law;
  Vector x0;
  double p = 1.0;
};

Setup materialize(const RunConfig& config);

/// A preset name, a comma list of n values, or a single value broadcast to all n.
Vector parse_state(const SystemEntry& entry, std::string_view text, int n);

}  // namespace oscstab
