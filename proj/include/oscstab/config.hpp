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
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oscstab/controller.hpp"
#include "oscstab/smooth_map.hpp"

namespace oscstab {

enum class RunMode { Classical, Sampled, Both };

/// Flat key/value run description. Every field is settable by its key name
/// from a config file ("key = value", '#' comments) or the command line.
struct RunConfig {
  std::string system = "brockett10";
  RunMode mode = RunMode::Classical;
  LawMode law = LawMode::ClosedForm;
  double eps = 0.1;
  double gamma = 0.5;
  double p = 1.0;
  double H = 1.0;
  double T = 50.0;
  int substeps = 400;
  int record_stride = 1;
  std::optional<std::vector<int>> kappa;
  std::string x0 = "fig1-left";  ///< preset name or comma-separated values
  std::uint64_t seed = 42;
  std::string out = "out";
  double threshold = 1e-2;       ///< converged when ||x(T)|| < threshold ||x0||
  double fit_lo = 0.15;          ///< fit window, as fractions of the eligible windows
  double fit_hi = 0.85;
  double fit_floor = 1e-6;       ///< windows with ||x|| below this are not fitted
  bool run_scan = false;         ///< attach a W scan digest to run summaries

  // verify
  std::uint64_t scan_N = 10000;
  double scan_radius = 2.0;
  double scan_rmin = 1e-6;
  double tol_alpha = 1e-9;
  std::uint64_t bracket_N = 1000;
  double c1_radius = 1.0;
  std::vector<double> cf_eps = {0.1, 0.05, 0.025};
  std::string cf_x0;             ///< empty: 0.5 e_1 + e_{m+1}
  int quad_steps = 10000;
  bool check_brackets = true;
  bool check_synthesis = true;
  bool check_negdef = true;
  bool check_gain = true;
  bool check_c1 = true;
  bool check_cf = true;
  bool check_oscillators = true;
  bool check_remainder = true;
  bool resonance_witness = false;  ///< force equal multipliers in the oscillator check

  std::set<std::string> explicit_keys;

  /// Throws ConfigError on unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  void load_text(std::string_view text, std::string_view origin = "<text>");
  void load_file(const std::filesystem::path& path);

  /// Throws ConfigError if the combination is inconsistent.
  void validate() const;

  /// Exponent in effect: explicit p, else the preset's, else the default.
  double effective_p() const;

  nlohmann::json to_json() const;

  static const std::vector<std::string>& keys();
};

std::string to_string(RunMode mode);
std::string to_string(LawMode mode);

/// Parses "1,2,3" (whitespace tolerated).
std::vector<double> parse_double_list(std::string_view text);

}  // namespace oscstab
