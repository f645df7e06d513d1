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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oscstab/config.hpp"
#include "oscstab/fit.hpp"
#include "oscstab/integrator.hpp"

namespace oscstab {

inline constexpr int kSummarySchema = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,         ///< config, registry or output-directory error
  kExitDiverged = 2,
  kExitNotConverged = 3,  ///< also used when a verify check fails
};

/// Convergence-rate estimates over the boundary norms of a run.
struct RateFit {
  std::optional<LinearFit> exponential;  ///< log ||x|| against t
  std::optional<LinearFit> polynomial;   ///< log ||x|| against log t
  std::size_t first = 0;                 ///< window index range used, [first, last]
  std::size_t last = 0;
};

/// Fits over the slice [fit_lo, fit_hi) of the windows whose norm exceeds floor.
RateFit estimate_rates(std::span<const double> t, std::span<const double> norm, double fit_lo,
                       double fit_hi, double floor);

struct ModeSummary {
  IntegrationMode mode = IntegrationMode::Classical;
  double initial_norm = 0.0;
  double terminal_norm = 0.0;
  std::size_t window_count = 0;
  bool monotone = true;
  RateFit rates;
  double max_abs_r_hat = 0.0;
  bool diverged = false;
  bool converged = false;
};

ModeSummary summarize(const Trajectory& traj, const RunConfig& config);
nlohmann::json to_json(const ModeSummary& s);

struct ComparisonRow {
  std::size_t j = 0;
  double t = 0.0;
  double norm_classical = 0.0;
  double norm_sampled = 0.0;
  double diff = 0.0;  ///< ||x_classical - x_sampled|| at the boundary
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double sup_diff = 0.0;
  double sup_t = 0.0;
};

Comparison compare_trajectories(const Trajectory& classical, const Trajectory& sampled);
std::string comparison_csv(const Comparison& cmp);

struct CheckResult {
  std::string name;
  bool passed = false;
  nlohmann::json details;
};

/// Outcome of a subcommand. Files are already written when this is returned.
struct Report {
  int exit_code = kExitOk;
  nlohmann::json summary;
  std::string text;           ///< one line per mode or check
  double wall_seconds = 0.0;  ///< kept out of the JSON so artifacts stay reproducible
  std::filesystem::path out_dir;
};

/// `out`, prefixed by $OSCSTAB_OUTPUT_ROOT when that is set and `out` is relative.
std::filesystem::path resolve_output_dir(const RunConfig& config);

Report run_command(const RunConfig& config);
Report compare_command(const RunConfig& config);
Report verify_command(const RunConfig& config);

}  // namespace oscstab
