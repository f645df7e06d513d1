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

#include "oscstab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "oscstab/brockett.hpp"
#include "oscstab/errors.hpp"

namespace oscstab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) +
                    "' as " + expected);
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "a finite number");
  }
  return out;
}

template <typename I>
I parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  I out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "a boolean");
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split_list(text)) out.push_back(parse_double("list", item));
  return out;
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Classical: return "classical";
    case RunMode::Sampled: return "sampled";
    case RunMode::Both: return "both";
  }
  return "?";
}

std::string to_string(LawMode mode) {
  return mode == LawMode::ClosedForm ? "closed_form" : "synthesized";
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "system", "mode", "law", "eps", "gamma", "p", "H", "T", "substeps", "record_stride",
      "kappa", "x0", "preset", "seed", "out", "threshold", "fit_lo", "fit_hi", "fit_floor",
      "run_scan", "scan_N", "scan_radius", "scan_rmin", "tol_alpha", "bracket_N", "c1_radius",
      "cf_eps", "cf_x0", "quad_steps", "check_brackets", "check_synthesis", "check_negdef",
      "check_gain", "check_c1", "check_cf", "check_oscillators", "check_remainder",
      "resonance_witness"};
  return k;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  const std::string k(trim(key));
  if (k == "system") {
    system = std::string(v);
  } else if (k == "mode") {
    if (v == "classical") mode = RunMode::Classical;
    else if (v == "sampled") mode = RunMode::Sampled;
    else if (v == "both") mode = RunMode::Both;
    else bad_value(k, v, "classical|sampled|both");
  } else if (k == "law") {
    if (v == "closed_form") law = LawMode::ClosedForm;
    else if (v == "synthesized") law = LawMode::Synthesized;
    else bad_value(k, v, "closed_form|synthesized");
  } else if (k == "eps") {
    eps = parse_double(k, v);
  } else if (k == "gamma") {
    gamma = parse_double(k, v);
  } else if (k == "p") {
    p = parse_double(k, v);
  } else if (k == "H") {
    H = parse_double(k, v);
  } else if (k == "T") {
    T = parse_double(k, v);
  } else if (k == "substeps") {
    substeps = parse_int<int>(k, v);
  } else if (k == "record_stride") {
    record_stride = parse_int<int>(k, v);
  } else if (k == "kappa") {
    if (v.empty()) {
      kappa.reset();
    } else {
      std::vector<int> ks;
      for (auto item : split_list(v)) ks.push_back(parse_int<int>(k, item));
      kappa = std::move(ks);
    }
  } else if (k == "x0" || k == "preset") {
    x0 = std::string(v);
    explicit_keys.insert("x0");
  } else if (k == "seed") {
    seed = parse_int<std::uint64_t>(k, v);
  } else if (k == "out") {
    out = std::string(v);
  } else if (k == "threshold") {
    threshold = parse_double(k, v);
  } else if (k == "fit_lo") {
    fit_lo = parse_double(k, v);
  } else if (k == "fit_hi") {
    fit_hi = parse_double(k, v);
  } else if (k == "fit_floor") {
    fit_floor = parse_double(k, v);
  } else if (k == "run_scan") {
    run_scan = parse_bool(k, v);
  } else if (k == "scan_N") {
    scan_N = parse_int<std::uint64_t>(k, v);
  } else if (k == "scan_radius") {
    scan_radius = parse_double(k, v);
  } else if (k == "scan_rmin") {
    scan_rmin = parse_double(k, v);
  } else if (k == "tol_alpha") {
    tol_alpha = parse_double(k, v);
  } else if (k == "bracket_N") {
    bracket_N = parse_int<std::uint64_t>(k, v);
  } else if (k == "c1_radius") {
    c1_radius = parse_double(k, v);
  } else if (k == "cf_eps") {
    cf_eps.clear();
    for (auto item : split_list(v)) cf_eps.push_back(parse_double(k, item));
  } else if (k == "cf_x0") {
    cf_x0 = std::string(v);
  } else if (k == "quad_steps") {
    quad_steps = parse_int<int>(k, v);
  } else if (k == "check_brackets") {
    check_brackets = parse_bool(k, v);
  } else if (k == "check_synthesis") {
    check_synthesis = parse_bool(k, v);
  } else if (k == "check_negdef") {
    check_negdef = parse_bool(k, v);
  } else if (k == "check_gain") {
    check_gain = parse_bool(k, v);
  } else if (k == "check_c1") {
    check_c1 = parse_bool(k, v);
  } else if (k == "check_cf") {
    check_cf = parse_bool(k, v);
  } else if (k == "check_oscillators") {
    check_oscillators = parse_bool(k, v);
  } else if (k == "check_remainder") {
    check_remainder = parse_bool(k, v);
  } else if (k == "resonance_witness") {
    resonance_witness = parse_bool(k, v);
  } else {
    throw ConfigError("unknown config key '" + k + "'");
  }
  explicit_keys.insert(k == "preset" ? "x0" : k);
}

void RunConfig::load_text(std::string_view text, std::string_view origin) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path.string());
}

double RunConfig::effective_p() const {
  if (explicit_keys.count("p")) return p;
  if (auto preset = brockett::preset_p(x0)) return *preset;
  return p;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(eps > 0.0, "eps must be positive");
  require(gamma >= 0.0, "gamma must be non-negative");
  require(effective_p() >= 1.0, "p must be >= 1");
  require(H > 0.0, "H must be positive");
  require(T > 0.0, "T must be positive");
  require(std::round(T / eps) >= 1.0, "T must cover at least one period");
  require(substeps >= 1, "substeps must be positive");
  require(record_stride >= 1 && substeps % record_stride == 0,
          "record_stride must divide substeps");
  require(threshold > 0.0, "threshold must be positive");
  require(0.0 <= fit_lo && fit_lo < fit_hi && fit_hi <= 1.0, "need 0 <= fit_lo < fit_hi <= 1");
  require(fit_floor > 0.0, "fit_floor must be positive");
  require(scan_N >= 1 && bracket_N >= 1, "scan sample counts must be positive");
  require(scan_radius > scan_rmin && scan_rmin > 0.0, "need 0 < scan_rmin < scan_radius");
  require(c1_radius > scan_rmin, "c1_radius must exceed scan_rmin");
  require(tol_alpha > 0.0, "tol_alpha must be positive");
  require(quad_steps >= 10000, "quad_steps must be at least 10000");
  require(cf_eps.size() >= 3, "cf_eps needs at least three values");
  for (std::size_t k = 1; k < cf_eps.size(); ++k) {
    require(cf_eps[k] < cf_eps[k - 1], "cf_eps must be strictly decreasing");
  }
  if (kappa) {
    std::vector<int> sorted = *kappa;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "kappa override must be distinct");
    require(sorted.front() >= 1, "kappa entries must be positive");
    require(substeps >= 50 * sorted.back(), "substeps must be at least 50 * max kappa");
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {
      {"system", system},
      {"mode", to_string(mode)},
      {"law", to_string(law)},
      {"eps", eps},
      {"gamma", gamma},
      {"p", effective_p()},
      {"H", H},
      {"T", T},
      {"substeps", substeps},
      {"record_stride", record_stride},
      {"x0", x0},
      {"seed", seed},
      {"threshold", threshold},
      {"fit_lo", fit_lo},
      {"fit_hi", fit_hi},
      {"fit_floor", fit_floor},
  };
  j["kappa"] = kappa ? nlohmann::json(*kappa) : nlohmann::json();
  return j;
}

}  // namespace oscstab
