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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "oscstab/app.hpp"
#include "oscstab/config.hpp"
#include "oscstab/errors.hpp"
#include "oscstab/registry.hpp"
#include "support.hpp"

namespace oscstab {
namespace {

RunConfig quick(const std::filesystem::path& out) {
  RunConfig c;
  c.set("T", "2");
  c.set("substeps", "300");
  c.set("out", out.string());
  c.set("scan_N", "500");
  c.set("bracket_N", "50");
  return c;
}

TEST(RunConfig, ParsesTextWithComments) {
  RunConfig c;
  c.load_text("# header\n  system = brockett10  \nmode=both # trailing\n\ngamma = 0.25\nkappa = 2,1,3,4,5,6\n");
  EXPECT_EQ(c.system, "brockett10");
  EXPECT_EQ(c.mode, RunMode::Both);
  EXPECT_EQ(c.gamma, 0.25);
  EXPECT_EQ(*c.kappa, (std::vector<int>{2, 1, 3, 4, 5, 6}));
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
  RunConfig c;
  try {
    c.load_text("eps = 0.1\nbogus = 3\n", "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
  }
  EXPECT_THROW(c.load_text("eps 0.1\n"), ConfigError);
  EXPECT_THROW(c.set("eps", "abc"), ConfigError);
  EXPECT_THROW(c.set("substeps", "4.5"), ConfigError);
  EXPECT_THROW(c.set("check_c1", "maybe"), ConfigError);
  EXPECT_THROW(c.set("mode", "fast"), ConfigError);
  EXPECT_THROW(c.load_file("/nonexistent/oscstab.cfg"), ConfigError);
}

TEST(RunConfig, ValidationRules) {
  RunConfig c;
  c.set("kappa", "1,1,2,3,4,5");
  EXPECT_THROW(c.validate(), ConfigError);
  c.set("kappa", "");
  EXPECT_NO_THROW(c.validate());
  c.set("record_stride", "7");
  EXPECT_THROW(c.validate(), ConfigError);
  c.set("record_stride", "4");
  c.set("T", "0.01");
  EXPECT_THROW(c.validate(), ConfigError);
  c.set("T", "0.1");
  c.set("fit_lo", "0.9");
  EXPECT_THROW(c.validate(), ConfigError);
  c.set("fit_lo", "0.1");
  c.set("p", "0.5");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RunConfig, PresetSetsExponentUnlessExplicit) {
  RunConfig c;
  c.set("preset", "fig1-right");
  EXPECT_EQ(c.effective_p(), 1.5);
  c.set("p", "2");
  EXPECT_EQ(c.effective_p(), 2.0);
  RunConfig d;
  EXPECT_EQ(d.effective_p(), 1.0);
}

TEST(RunConfig, EveryKeyIsSettable) {
  for (const auto& key : RunConfig::keys()) {
    RunConfig c;
    EXPECT_NO_THROW({
      try {
        c.set(key, "1");
      } catch (const ConfigError& e) {
        // Only value errors are acceptable here, never an unknown key.
        if (std::string(e.what()).find("unknown") != std::string::npos) throw;
      }
    }) << key;
  }
}

TEST(Registry, KnownAndUnknownSystems) {
  EXPECT_EQ(find_system("brockett10").system()->n(), 10);
  EXPECT_EQ(find_system("heisenberg3").system()->n(), 3);
  EXPECT_THROW(find_system("nope"), ConfigError);
  const auto& e = find_system("brockett10");
  EXPECT_EQ(parse_state(e, "0", 10), Vector::Zero(10));
  EXPECT_EQ(parse_state(e, "fig1-left", 10)[8], 3.0);
  EXPECT_THROW(parse_state(e, "1,2", 10), ConfigError);
  EXPECT_THROW(parse_state(e, "fig2", 10), ConfigError);
}

TEST(Registry, KappaLengthAndSubsteps) {
  RunConfig c;
  c.set("kappa", "1,2,3");
  EXPECT_THROW(materialize(c), ConfigError);
  c.set("kappa", "1,2,3,4,5,60");
  EXPECT_THROW(materialize(c), ConfigError);
  RunConfig h;
  h.set("system", "heisenberg3");
  h.set("x0", "unit");
  EXPECT_THROW(materialize(h), ConfigError);  // no closed form
  h.set("law", "synthesized");
  EXPECT_NO_THROW(materialize(h));
}

TEST(Rates, SyntheticExponential) {
  std::vector<double> t, norm;
  for (int j = 0; j <= 500; ++j) {
    t.push_back(0.1 * j);
    norm.push_back(std::exp(-0.3 * 0.1 * j));
  }
  const auto r = estimate_rates(t, norm, 0.15, 0.85, 1e-6);
  ASSERT_TRUE(r.exponential.has_value());
  EXPECT_NEAR(r.exponential->slope, -0.3, 1e-6);
  EXPECT_NEAR(r.exponential->r2, 1.0, 1e-12);
  EXPECT_GT(r.first, 0u);
  EXPECT_LT(r.last, 500u);
}

TEST(Rates, SyntheticPowerLaw) {
  std::vector<double> t, norm;
  for (int j = 1; j <= 400; ++j) {
    t.push_back(0.1 * j);
    norm.push_back(std::pow(0.1 * j, -2.0));
  }
  const auto r = estimate_rates(t, norm, 0.15, 0.85, 1e-6);
  EXPECT_NEAR(r.polynomial->slope, -2.0, 1e-9);
}

TEST(Rates, FloorExcludesNoise) {
  std::vector<double> t = {0, 1, 2, 3, 4}, norm = {1, 1e-7, 1e-8, 1e-9, 0};
  EXPECT_FALSE(estimate_rates(t, norm, 0.15, 0.85, 1e-6).exponential.has_value());
}

TEST(RunCommand, WritesArtifactsAndSummary) {
  const auto dir = test::scratch_dir("run");
  auto c = quick(dir);
  c.set("mode", "both");
  const auto r = run_command(c);
  for (const char* f : {"trajectory_classical.csv", "trajectory_sampled.csv", "windows_classical.json",
                        "windows_sampled.json", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto summary = nlohmann::json::parse(test::read_file(dir / "summary.json"));
  EXPECT_EQ(summary["schema"], 1);
  EXPECT_EQ(summary["modes"]["classical"]["window_count"], 20);
  EXPECT_TRUE(summary["modes"]["classical"]["monotone_decrease"].get<bool>());
  EXPECT_TRUE(summary["modes"]["sampled"].contains("max_abs_r_hat"));
  EXPECT_FALSE(summary.contains("wall_clock"));
  EXPECT_EQ(r.exit_code, summary["exit_code"].get<int>());
  const auto csv = test::read_file(dir / "trajectory_classical.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 20 * 300 + 2);
}

TEST(RunCommand, ZeroStateIsTrivial) {
  const auto dir = test::scratch_dir("zero");
  auto c = quick(dir);
  c.set("x0", "0");
  const auto r = run_command(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.summary["modes"]["classical"]["terminal_norm"].get<double>(), 0.0);
}

TEST(RunCommand, DivergenceExitCode) {
  const auto dir = test::scratch_dir("diverge");
  auto c = quick(dir);
  c.set("gamma", "3");
  c.set("x0", "1,0,0,0,0.01,0.01,0.01,0,0,0");
  c.set("T", "20");
  EXPECT_EQ(run_command(c).exit_code, kExitDiverged);
}

TEST(RunCommand, NotConvergedExitCode) {
  const auto dir = test::scratch_dir("slow");
  auto c = quick(dir);
  EXPECT_EQ(run_command(c).exit_code, kExitNotConverged);  // T = 2 is too short
}

TEST(RunCommand, OutputRootFromEnvironment) {
  const auto root = test::scratch_dir("envroot");
  ::setenv("OSCSTAB_OUTPUT_ROOT", root.c_str(), 1);
  auto c = quick("nested/run");
  const auto r = run_command(c);
  ::unsetenv("OSCSTAB_OUTPUT_ROOT");
  EXPECT_EQ(r.out_dir, root / "nested/run");
  EXPECT_TRUE(std::filesystem::exists(root / "nested/run/summary.json"));
}

TEST(RunCommand, UnwritableOutputDirectory) {
  auto c = quick("/proc/oscstab_cannot_write");
  EXPECT_THROW(run_command(c), IoError);
}

TEST(RunCommand, Deterministic) {
  const auto a = test::scratch_dir("det_a");
  const auto b = test::scratch_dir("det_b");
  for (const auto& dir : {a, b}) {
    auto c = quick(dir);
    c.set("mode", "both");
    c.set("run_scan", "true");
    run_command(c);
  }
  for (const char* f : {"trajectory_classical.csv", "trajectory_sampled.csv", "windows_classical.json",
                        "windows_sampled.json", "summary.json"}) {
    EXPECT_EQ(test::read_file(a / f), test::read_file(b / f)) << f;
  }
}

TEST(CompareCommand, TableAndSupremum) {
  const auto dir = test::scratch_dir("compare");
  const auto r = compare_command(quick(dir));
  const auto csv = test::read_file(dir / "compare.csv");
  EXPECT_EQ(csv.rfind("t,norm_classical,norm_sampled,|diff|\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 22);
  EXPECT_GT(r.summary["comparison"]["sup_abs_diff"].get<double>(), 0.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory_sampled.csv"));
}

TEST(CompareCommand, ZeroStateZeroDiscrepancy) {
  const auto dir = test::scratch_dir("compare0");
  auto c = quick(dir);
  c.set("x0", "0");
  EXPECT_EQ(compare_command(c).summary["comparison"]["sup_abs_diff"].get<double>(), 0.0);
}

TEST(VerifyCommand, DefaultConfigurationPasses) {
  const auto dir = test::scratch_dir("verify");
  auto c = quick(dir);
  c.set("scan_N", "2000");
  const auto r = verify_command(c);
  EXPECT_EQ(r.exit_code, kExitOk) << r.text;
  const auto j = nlohmann::json::parse(test::read_file(dir / "verify.json"));
  EXPECT_TRUE(j["all_passed"].get<bool>());
  std::set<std::string> names;
  for (const auto& check : j["checks"]) names.insert(check["name"].get<std::string>());
  for (const char* n : {"bracket_generating", "synthesis", "negdef_W", "gain_bound", "c1", "cf_order",
                        "oscillators", "remainder"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
}

TEST(VerifyCommand, DuplicateKappaRejectedBeforeRunning) {
  const auto dir = test::scratch_dir("verify_dup");
  auto c = quick(dir);
  c.set("kappa", "1,2,2,4,5,6");
  EXPECT_THROW(verify_command(c), ConfigError);
  EXPECT_FALSE(std::filesystem::exists(dir / "verify.json"));
}

TEST(VerifyCommand, ResonanceWitnessFails) {
  const auto dir = test::scratch_dir("verify_res");
  auto c = quick(dir);
  for (const char* k : {"check_brackets", "check_synthesis", "check_negdef", "check_gain", "check_c1",
                        "check_cf", "check_remainder"}) {
    c.set(k, "false");
  }
  c.set("resonance_witness", "true");
  const auto r = verify_command(c);
  EXPECT_EQ(r.exit_code, kExitNotConverged);
  const auto& check = r.summary["checks"][0];
  EXPECT_EQ(check["name"], "oscillators");
  EXPECT_FALSE(check["passed"].get<bool>());
  EXPECT_GT(check["details"]["max_cross_pair_over_2eps"].get<double>(), 0.1);
}

TEST(VerifyCommand, SynthesizedHeisenberg) {
  const auto dir = test::scratch_dir("verify_h");
  auto c = quick(dir);
  c.set("system", "heisenberg3");
  c.set("law", "synthesized");
  c.set("x0", "unit");
  c.set("check_cf", "false");
  const auto r = verify_command(c);
  for (const auto& check : r.summary["checks"]) {
    if (check["name"] == "bracket_generating" || check["name"] == "synthesis" ||
        check["name"] == "oscillators") {
      EXPECT_TRUE(check["passed"].get<bool>()) << check.dump();
    }
  }
}

}  // namespace
}  // namespace oscstab
