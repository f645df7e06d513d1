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

#include "oscstab/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <numbers>
#include <tuple>

#include "oscstab/brockett.hpp"
#include "oscstab/errors.hpp"
#include "oscstab/io.hpp"
#include "oscstab/registry.hpp"

namespace oscstab {

namespace {

using Clock = std::chrono::steady_clock;

// Windows below this norm are at solver noise and exempt from the decrease test.
constexpr double kMonotoneFloor = 1e-8;

// Tolerances of the oscillator identities.
constexpr double kSamePairRelTol = 1e-6;
constexpr double kCrossPairTol = 1e-8;  // times 2 eps, the same-pair magnitude
constexpr double kZeroMeanTol = 1e-10;  // times the amplitude
constexpr double kNormalizationRelTol = 1e-8;

constexpr double kSynthesisTol = 1e-10;
constexpr double kCfExponentFloor = 1.3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::json vec_json(const Vector& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

nlohmann::json fit_json(const std::optional<LinearFit>& f) {
  if (!f) return nullptr;
  return {{"slope", num(f->slope)},
          {"intercept", num(f->intercept)},
          {"r2", num(f->r2)},
          {"points", f->points}};
}

IntegrationOptions options_for(const RunConfig& c) {
  IntegrationOptions o;
  o.substeps = c.substeps;
  o.record_stride = c.record_stride;
  return o;
}

std::vector<IntegrationMode> modes_for(RunMode m) {
  switch (m) {
    case RunMode::Classical: return {IntegrationMode::Classical};
    case RunMode::Sampled: return {IntegrationMode::Sampled};
    case RunMode::Both: return {IntegrationMode::Classical, IntegrationMode::Sampled};
  }
  return {};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string mode_line(const ModeSummary& s) {
  std::string line = to_string(s.mode) + ": terminal_norm=" + fmt(s.terminal_norm) +
                     " initial_norm=" + fmt(s.initial_norm) +
                     " windows=" + std::to_string(s.window_count) +
                     " monotone=" + (s.monotone ? "yes" : "no");
  if (s.rates.exponential) {
    line += " exp_slope=" + fmt(s.rates.exponential->slope) + " R2=" + fmt(s.rates.exponential->r2);
  }
  line += " max|r_hat|=" + fmt(s.max_abs_r_hat);
  line += s.diverged ? " DIVERGED" : (s.converged ? " converged" : " not-converged");
  return line;
}

struct Integrated {
  std::vector<Trajectory> trajectories;
  std::vector<ModeSummary> summaries;
};

Integrated integrate_all(const RunConfig& config, const Setup& s, RunMode mode) {
  const auto opts = options_for(config);
  std::vector<std::future<Trajectory>> jobs;
  for (auto m : modes_for(mode)) {
    jobs.push_back(std::async(std::launch::async, [&, m] {
      return integrate(m, *s.law, *s.lyapunov, s.x0, config.T, opts);
    }));
  }
  Integrated out;
  for (auto& job : jobs) out.trajectories.push_back(job.get());
  for (const auto& traj : out.trajectories) out.summaries.push_back(summarize(traj, config));
  return out;
}

int integration_exit_code(const std::vector<ModeSummary>& summaries) {
  bool all_converged = true;
  for (const auto& s : summaries) {
    if (s.diverged) return kExitDiverged;
    all_converged = all_converged && s.converged;
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

nlohmann::json base_summary(const char* command, const RunConfig& config, const Setup& s) {
  return {{"schema", kSummarySchema},
          {"command", command},
          {"system", s.system->name()},
          {"law", to_string(s.law->mode())},
          {"config", config.to_json()},
          {"x0_state", vec_json(s.x0)}};
}

Report integration_report(const RunConfig& config, const char* command, RunMode mode) {
  const auto start = Clock::now();
  const Setup s = materialize(config);
  const auto dir = resolve_output_dir(config);
  prepare_output_dir(dir);

  Integrated res = integrate_all(config, s, mode);

  Report report;
  report.out_dir = dir;
  report.summary = base_summary(command, config, s);
  nlohmann::json modes = nlohmann::json::object();
  for (const auto& ms : res.summaries) {
    modes[to_string(ms.mode)] = to_json(ms);
    report.text += mode_line(ms) + "\n";
  }
  report.summary["modes"] = modes;

  nlohmann::json digests = nlohmann::json::array();
  if (config.run_scan) {
    const auto W = [&](const Vector& x) { return compute_W(*s.law, *s.lyapunov, x).W; };
    const auto scan = negdef_scan(W, s.system->n(), Region::ball(config.scan_radius, config.scan_rmin),
                                  config.scan_N, config.seed);
    auto j = to_json(scan);
    j["quantity"] = "W";
    digests.push_back(j);
    report.text += "W scan: violations=" + std::to_string(scan.violation_count) + "/" +
                   std::to_string(scan.sample_count) + " worst=" + fmt(scan.worst_value) + "\n";
  }
  report.summary["definiteness"] = digests;

  std::optional<Comparison> cmp;
  if (res.trajectories.size() == 2) {
    cmp = compare_trajectories(res.trajectories[0], res.trajectories[1]);
    report.summary["comparison"] = {{"sup_abs_diff", num(cmp->sup_diff)},
                                    {"t_at_sup", cmp->sup_t},
                                    {"rows", cmp->rows.size()}};
    report.text += "sup |diff| over window boundaries = " + fmt(cmp->sup_diff) + " at t=" +
                   fmt(cmp->sup_t) + "\n";
  }

  report.exit_code = integration_exit_code(res.summaries);
  report.summary["exit_code"] = report.exit_code;

  for (const auto& traj : res.trajectories) {
    const auto name = to_string(traj.mode);
    write_text_file(dir / ("trajectory_" + name + ".csv"), trajectory_csv(traj));
    write_text_file(dir / ("windows_" + name + ".json"), dump(windows_json(traj)));
  }
  if (cmp && std::string(command) == "compare") {
    write_text_file(dir / "compare.csv", comparison_csv(*cmp));
  }
  write_text_file(dir / "summary.json", dump(report.summary));
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

// ---- verify -----------------------------------------------------------------

CheckResult check_brackets(const RunConfig& c, const Setup& s) {
  const RegionSampler sampler(s.system->n(), Region::ball(c.scan_radius, c.scan_rmin), c.seed);
  std::uint64_t failures = 0;
  double min_sv = std::numeric_limits<double>::infinity();
  Vector worst = Vector::Zero(s.system->n());
  for (std::uint64_t k = 0; k <= c.bracket_N; ++k) {
    const Vector x = k == 0 ? Vector::Zero(s.system->n()) : sampler.point(k - 1);
    const auto bc = bracket_generating_check(*s.system, x);
    if (!bc.generating) ++failures;
    if (bc.smallest_singular_value < min_sv) {
      min_sv = bc.smallest_singular_value;
      worst = x;
    }
  }
  return {"bracket_generating",
          failures == 0,
          {{"points", c.bracket_N + 1},
           {"failures", failures},
           {"min_singular_value", num(min_sv)},
           {"worst_point", vec_json(worst)},
           {"seed", c.seed}}};
}

CheckResult check_synthesis(const RunConfig& c, const Setup& s) {
  const RegionSampler sampler(s.system->n(), Region::ball(c.scan_radius, c.scan_rmin), c.seed + 1);
  std::uint64_t failures = 0;
  double max_residual = 0.0, max_mismatch = 0.0;
  const bool compare_closed = s.law->mode() == LawMode::ClosedForm;
  for (std::uint64_t k = 0; k < c.bracket_N; ++k) {
    const Vector x = sampler.point(k);
    try {
      const auto syn = synthesize_components(*s.system, *s.lyapunov, x);
      const double scale = std::max(1.0, s.lyapunov->gradient(x).norm());
      max_residual = std::max(max_residual, syn.residual / scale);
      if (compare_closed) {
        const auto cf = s.law->components(x);
        const double d0 = (cf.v0 - syn.v0).norm() / std::max(1.0, syn.v0.norm());
        const double d1 = (cf.vtilde - syn.vtilde).norm() / std::max(1.0, syn.vtilde.norm());
        max_mismatch = std::max({max_mismatch, d0, d1});
      }
    } catch (const Error&) {
      ++failures;
    }
  }
  nlohmann::json d = {{"points", c.bracket_N},
                      {"failures", failures},
                      {"max_relative_residual", max_residual},
                      {"tolerance", kSynthesisTol},
                      {"seed", c.seed + 1}};
  if (compare_closed) d["max_closed_form_mismatch"] = max_mismatch;
  return {"synthesis", failures == 0 && max_residual <= kSynthesisTol && max_mismatch <= kSynthesisTol,
          d};
}

CheckResult check_positive_V(const RunConfig& c, const Setup& s) {
  const auto rep = negdef_scan([&](const Vector& x) { return -s.lyapunov->value(x); },
                               s.system->n(), Region::ball(c.scan_radius, c.scan_rmin), c.scan_N,
                               c.seed);
  return {"positive_V", rep.passed(), to_json(rep)};
}

CheckResult check_negdef(const RunConfig& c, const Setup& s) {
  const auto rep = negdef_scan([&](const Vector& x) { return compute_W(*s.law, *s.lyapunov, x).W; },
                               s.system->n(), Region::ball(c.scan_radius, c.scan_rmin), c.scan_N,
                               c.seed);
  return {"negdef_W", rep.passed(), to_json(rep)};
}

CheckResult check_gain(const RunConfig& c, const Setup& s) {
  const auto gb = gain_bound_scan(*s.law, *s.lyapunov, Region::ball(c.scan_radius, c.scan_rmin),
                                    c.scan_N, c.tol_alpha, c.seed);
  nlohmann::json d = {{"c_ab", num(gb.c_ab)},
                      {"gamma_max", num(gb.gamma_max)},
                      {"unbounded", gb.unbounded()},
                      {"gamma", c.gamma},
                      {"admissible", gb.admissible},
                      {"beta_report", to_json(gb.beta_report)}};
  if (s.system->name() == "brockett10") {
    const auto iv = brockett::stability_gain_range(s.p, c.H);
    d["stated_interval"] = {iv.lower, iv.upper};
  }
  return {"gain_bound", c.gamma < gb.gamma_max && gb.beta_report.passed(), d};
}

CheckResult check_c1(const RunConfig& c, const Setup& s) {
  const auto est = oscstab::check_c1(s.system, s.lyapunov, c.gamma,
                                     Region::ball(c.c1_radius, c.scan_rmin), c.scan_N, c.seed);
  return {"c1",
          est.passed(),
          {{"supremum", num(est.supremum)},
           {"worst_point", vec_json(est.worst_point)},
           {"evaluated", est.evaluated},
           {"skipped", est.skipped},
           {"region", Region::ball(c.c1_radius, c.scan_rmin).describe()},
           {"seed", c.seed}}};
}

CheckResult check_cf(const RunConfig& c, const Setup& s) {
  const int n = s.system->n();
  Vector x0 = Vector::Zero(n);
  if (c.cf_x0.empty()) {
    x0[0] = 0.5;
    x0[s.system->m()] = 1.0;
  } else {
    x0 = parse_state(*s.entry, c.cf_x0, n);
  }
  nlohmann::json d = {{"x0", vec_json(x0)}, {"expected", 1.5}, {"min_exponent", kCfExponentFloor}};
  try {
    const auto probe = cf_order_probe(*s.law, x0, c.cf_eps, c.substeps);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : probe.rows) {
      rows.push_back({{"eps", r.eps}, {"residual", r.residual}, {"excluded", r.excluded}});
    }
    d["rows"] = rows;
    d["exponent"] = num(probe.exponent);
    d["r2"] = num(probe.r2);
    return {"cf_order", probe.exponent >= kCfExponentFloor, d};
  } catch (const EvaluationError& e) {
    // Every residual at solver noise: the prediction is exact here.
    d["note"] = e.what();
    return {"cf_order", true, d};
  }
}

CheckResult check_oscillators(const RunConfig& c, const Setup& s) {
  const auto& law_osc = s.law->oscillators();
  const OscillatorAssignment osc =
      c.resonance_witness
          ? OscillatorAssignment::unchecked(std::vector<int>(law_osc.size(), 1), law_osc.eps())
          : law_osc;
  const double eps = osc.eps();
  double max_same = 0.0, max_cross = 0.0, max_mean = 0.0, max_norm = 0.0;
  for (std::size_t I = 0; I < osc.size(); ++I) {
    for (std::size_t J = 0; J < osc.size(); ++J) {
      const double A = iterated_integral_check(osc, I, J, c.quad_steps);
      if (I == J) {
        max_same = std::max(max_same, std::abs(A + 2.0 * eps) / (2.0 * eps));
      } else {
        max_cross = std::max(max_cross, std::abs(A) / (2.0 * eps));
      }
    }
    const double target = 2.0 * osc.kappa()[I] * std::numbers::pi / eps;
    for (auto role : {OscillatorRole::First, OscillatorRole::Second}) {
      const auto m = oscillator_moments(osc, I, role, c.quad_steps);
      max_mean = std::max(max_mean, std::abs(m.integral) / osc.amplitude(I));
      max_norm = std::max(max_norm, std::abs(m.mean_square - target) / target);
    }
  }
  const bool ok = max_same <= kSamePairRelTol && max_cross <= kCrossPairTol &&
                  max_mean <= kZeroMeanTol && max_norm <= kNormalizationRelTol;
  return {"oscillators",
          ok,
          {{"kappa", osc.kappa()},
           {"eps", eps},
           {"resonance_witness", c.resonance_witness},
           {"max_same_pair_rel_error", max_same},
           {"max_cross_pair_over_2eps", max_cross},
           {"max_mean_over_amplitude", max_mean},
           {"max_normalization_rel_error", max_norm},
           {"tolerances",
            {{"same_pair", kSamePairRelTol},
             {"cross_pair", kCrossPairTol},
             {"zero_mean", kZeroMeanTol},
             {"normalization", kNormalizationRelTol}}}}};
}

CheckResult check_remainder(const RunConfig& c, const Setup& s) {
  const auto traj = integrate_classical(*s.law, *s.lyapunov, s.x0, c.T, options_for(c));
  const auto ms = summarize(traj, c);
  double c2 = 0.0, over_W = 0.0;
  for (const auto& w : traj.windows) {
    const Vector& x = traj.boundary_state(static_cast<std::size_t>(w.j));
    if (x.norm() <= kMonotoneFloor || !std::isfinite(w.r_hat)) continue;
    const double g2 = s.lyapunov->gradient(x).squaredNorm();
    if (g2 > 0.0) c2 = std::max(c2, std::abs(w.r_hat) / g2);
    if (std::isfinite(w.W) && w.W != 0.0) over_W = std::max(over_W, std::abs(w.r_hat / w.W));
  }
  return {"remainder",
          !ms.diverged && std::isfinite(ms.max_abs_r_hat) && ms.monotone,
          {{"max_abs_r_hat", num(ms.max_abs_r_hat)},
           {"max_r_hat_over_grad_sq", num(c2)},
           {"max_r_hat_over_W", num(over_W)},
           {"monotone", ms.monotone},
           {"windows", ms.window_count},
           {"terminal_norm", num(ms.terminal_norm)}}};
}

std::string check_line(const CheckResult& r) {
  std::string line = std::string(r.passed ? "PASS " : "FAIL ") + r.name;
  const auto& d = r.details;
  auto add = [&](const char* key) {
    if (d.contains(key) && !d[key].is_null()) {
      line += std::string(" ") + key + "=" + (d[key].is_number_float() ? fmt(d[key].get<double>()) : d[key].dump());
    }
  };
  for (const char* key : {"failures", "violations", "worst_value", "max_relative_residual",
                          "gamma_max", "supremum", "exponent", "max_same_pair_rel_error",
                          "max_cross_pair_over_2eps", "max_abs_r_hat", "error"}) {
    add(key);
  }
  return line;
}

}  // namespace

RateFit estimate_rates(std::span<const double> t, std::span<const double> norm, double fit_lo,
                       double fit_hi, double floor) {
  if (t.size() != norm.size()) throw InvalidArgument("rate fit: length mismatch");
  std::vector<std::size_t> eligible;
  for (std::size_t k = 0; k < norm.size(); ++k) {
    if (std::isfinite(norm[k]) && norm[k] > floor) eligible.push_back(k);
  }
  const auto K = static_cast<double>(eligible.size());
  const auto lo = static_cast<std::size_t>(std::floor(fit_lo * K));
  const auto hi = std::min(eligible.size(), static_cast<std::size_t>(std::ceil(fit_hi * K)));
  RateFit out;
  if (hi < lo + 2) return out;
  std::vector<double> xs, ys, lxs, lys;
  for (std::size_t k = lo; k < hi; ++k) {
    const std::size_t i = eligible[k];
    xs.push_back(t[i]);
    ys.push_back(std::log(norm[i]));
    if (t[i] > 0.0) {
      lxs.push_back(std::log(t[i]));
      lys.push_back(std::log(norm[i]));
    }
  }
  out.first = eligible[lo];
  out.last = eligible[hi - 1];
  out.exponential = linear_fit(xs, ys);
  if (lxs.size() >= 2) out.polynomial = linear_fit(lxs, lys);
  return out;
}

ModeSummary summarize(const Trajectory& traj, const RunConfig& config) {
  ModeSummary s;
  s.mode = traj.mode;
  s.initial_norm = traj.norm.front();
  s.terminal_norm = traj.norm.back();
  s.window_count = traj.completed_windows();
  s.diverged = traj.diverged;
  std::vector<double> bt, bn;
  for (std::size_t j = 0; j < traj.boundary.size(); ++j) {
    bt.push_back(traj.t[traj.boundary[j]]);
    bn.push_back(traj.boundary_norm(j));
    if (j + 1 < traj.boundary.size() && traj.boundary_norm(j) > kMonotoneFloor &&
        !(traj.V[traj.boundary[j + 1]] < traj.V[traj.boundary[j]])) {
      s.monotone = false;
    }
  }
  s.rates = estimate_rates(bt, bn, config.fit_lo, config.fit_hi, config.fit_floor);
  s.max_abs_r_hat = increment_diagnostics(traj).max_abs;
  s.converged = !s.diverged && (s.terminal_norm < config.threshold * s.initial_norm ||
                                s.terminal_norm == 0.0);
  return s;
}

nlohmann::json to_json(const ModeSummary& s) {
  nlohmann::json rates = {{"exponential", fit_json(s.rates.exponential)},
                          {"polynomial", fit_json(s.rates.polynomial)}};
  if (s.rates.exponential) rates["window_range"] = {s.rates.first, s.rates.last};
  return {{"initial_norm", num(s.initial_norm)},
          {"terminal_norm", num(s.terminal_norm)},
          {"window_count", s.window_count},
          {"monotone_decrease", s.monotone},
          {"rates", rates},
          {"max_abs_r_hat", num(s.max_abs_r_hat)},
          {"diverged", s.diverged},
          {"converged", s.converged}};
}

Comparison compare_trajectories(const Trajectory& classical, const Trajectory& sampled) {
  Comparison cmp;
  const std::size_t count = std::min(classical.boundary.size(), sampled.boundary.size());
  for (std::size_t j = 0; j < count; ++j) {
    ComparisonRow row;
    row.j = j;
    row.t = classical.t[classical.boundary[j]];
    row.norm_classical = classical.boundary_norm(j);
    row.norm_sampled = sampled.boundary_norm(j);
    row.diff = (classical.boundary_state(j) - sampled.boundary_state(j)).norm();
    if (row.diff > cmp.sup_diff || !std::isfinite(row.diff)) {
      cmp.sup_diff = row.diff;
      cmp.sup_t = row.t;
    }
    cmp.rows.push_back(row);
  }
  return cmp;
}

std::string comparison_csv(const Comparison& cmp) {
  std::string out = "t,norm_classical,norm_sampled,|diff|\n";
  for (const auto& r : cmp.rows) {
    out += format_double(r.t) + ',' + format_double(r.norm_classical) + ',' +
           format_double(r.norm_sampled) + ',' + format_double(r.diff) + '\n';
  }
  return out;
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
  std::filesystem::path out(config.out);
  if (out.is_relative()) {
    if (const char* root = std::getenv("OSCSTAB_OUTPUT_ROOT"); root && *root) {
      return std::filesystem::path(root) / out;
    }
  }
  return out;
}

Report run_command(const RunConfig& config) {
  return integration_report(config, "run", config.mode);
}

Report compare_command(const RunConfig& config) {
  return integration_report(config, "compare", RunMode::Both);
}

Report verify_command(const RunConfig& config) {
  const auto start = Clock::now();
  const Setup s = materialize(config);
  const auto dir = resolve_output_dir(config);
  prepare_output_dir(dir);

  using CheckFn = CheckResult (*)(const RunConfig&, const Setup&);
  const std::vector<std::tuple<bool, const char*, CheckFn>> plan = {
      {config.check_brackets, "bracket_generating", check_brackets},
      {config.check_synthesis, "synthesis", check_synthesis},
      {config.check_negdef, "positive_V", check_positive_V},
      {config.check_negdef, "negdef_W", check_negdef},
      {config.check_gain, "gain_bound", check_gain},
      {config.check_c1, "c1", check_c1},
      {config.check_cf, "cf_order", check_cf},
      {config.check_oscillators, "oscillators", check_oscillators},
      {config.check_remainder, "remainder", check_remainder},
  };

  Report report;
  report.out_dir = dir;
  report.summary = base_summary("verify", config, s);
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& [enabled, name, fn] : plan) {
    if (!enabled) continue;
    CheckResult r;
    try {
      r = fn(config, s);
    } catch (const Error& e) {
      r = {name, false, {{"error", e.what()}}};
    }
    all = all && r.passed;
    report.text += check_line(r) + "\n";
    nlohmann::json j = {{"name", r.name}, {"passed", r.passed}};
    j["details"] = r.details;
    checks.push_back(j);
  }
  report.summary["checks"] = checks;
  report.summary["all_passed"] = all;
  report.exit_code = all ? kExitOk : kExitNotConverged;
  report.summary["exit_code"] = report.exit_code;
  write_text_file(dir / "verify.json", dump(report.summary));
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace oscstab
