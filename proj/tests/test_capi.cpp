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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oscstab/oscstab.h"

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("oscstab_capi_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

struct ConfigGuard {
  oscstab_config* c = nullptr;
  ConfigGuard() { EXPECT_EQ(oscstab_config_create(&c), OSCSTAB_OK); }
  ~ConfigGuard() { oscstab_config_destroy(c); }
};

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(oscstab_version(), "");
  EXPECT_STREQ(oscstab_status_name(OSCSTAB_OK), "ok");
  EXPECT_STRNE(oscstab_status_name(OSCSTAB_ERR_CONFIG), oscstab_status_name(OSCSTAB_ERR_IO));
}

TEST(CApi, NullArgumentsRejected) {
  EXPECT_EQ(oscstab_config_create(nullptr), OSCSTAB_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(oscstab_config_set(nullptr, "eps", "0.1"), OSCSTAB_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(oscstab_run(nullptr, nullptr), OSCSTAB_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(oscstab_system_create(nullptr, nullptr), OSCSTAB_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(oscstab_last_error()), "");
  oscstab_config_destroy(nullptr);
  oscstab_report_destroy(nullptr);
  oscstab_system_destroy(nullptr);
  oscstab_law_destroy(nullptr);
  oscstab_trajectory_destroy(nullptr);
}

TEST(CApi, ConfigErrorsAndKeys) {
  ConfigGuard g;
  EXPECT_EQ(oscstab_config_set(g.c, "nope", "1"), OSCSTAB_ERR_CONFIG);
  EXPECT_NE(std::string(oscstab_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(oscstab_config_load_text(g.c, "eps = 0.05\ngamma = x\n"), OSCSTAB_ERR_CONFIG);
  EXPECT_NE(std::string(oscstab_last_error()).find(":2"), std::string::npos);
  EXPECT_EQ(oscstab_config_load_file(g.c, "/nonexistent.cfg"), OSCSTAB_ERR_CONFIG);
  EXPECT_EQ(oscstab_config_set(g.c, "kappa", "1,1,2,3,4,5"), OSCSTAB_OK);
  EXPECT_EQ(oscstab_config_validate(g.c), OSCSTAB_ERR_CONFIG);
  bool has_gamma = false;
  for (size_t k = 0; k < oscstab_config_key_count(); ++k) {
    has_gamma = has_gamma || std::string(oscstab_config_key_name(k)) == "gamma";
  }
  EXPECT_TRUE(has_gamma);
  EXPECT_EQ(oscstab_config_key_name(oscstab_config_key_count()), nullptr);
}

TEST(CApi, InitialState) {
  ConfigGuard g;
  std::vector<double> x(10);
  ASSERT_EQ(oscstab_config_initial_state(g.c, x.data(), 10), OSCSTAB_OK);
  EXPECT_EQ(x[0], 1.0);
  EXPECT_EQ(x[9], -3.0);
  EXPECT_EQ(oscstab_config_initial_state(g.c, x.data(), 3), OSCSTAB_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SystemSurface) {
  ASSERT_GE(oscstab_system_registered_count(), 1u);
  EXPECT_STREQ(oscstab_system_registered_name(0), "brockett10");
  oscstab_system* sys = nullptr;
  EXPECT_EQ(oscstab_system_create("missing", &sys), OSCSTAB_ERR_CONFIG);
  ASSERT_EQ(oscstab_system_create("brockett10", &sys), OSCSTAB_OK);
  EXPECT_EQ(oscstab_system_state_dim(sys), 10);
  EXPECT_EQ(oscstab_system_input_dim(sys), 4);
  EXPECT_EQ(oscstab_system_pair_count(sys), 6);
  int i = -1, j = -1;
  ASSERT_EQ(oscstab_system_pair(sys, 5, &i, &j), OSCSTAB_OK);
  EXPECT_EQ(i, 2);
  EXPECT_EQ(j, 3);
  EXPECT_EQ(oscstab_system_pair(sys, 6, &i, &j), OSCSTAB_ERR_INVALID_ARGUMENT);

  std::vector<double> x = {0.3, -1, 2, 0.5, 0, 0, 0, 0, 0, 0}, out(10), F(100);
  ASSERT_EQ(oscstab_system_lie_bracket(sys, 0, 1, x.data(), out.data()), OSCSTAB_OK);
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(out[k], k == 4 ? 2.0 : 0.0, 1e-12);
  ASSERT_EQ(oscstab_system_field(sys, 0, x.data(), out.data()), OSCSTAB_OK);
  EXPECT_EQ(out[0], 1.0);
  EXPECT_EQ(oscstab_system_field(sys, 4, x.data(), out.data()), OSCSTAB_ERR_INVALID_ARGUMENT);
  double cond = 0.0;
  ASSERT_EQ(oscstab_system_assemble_F(sys, x.data(), F.data(), &cond), OSCSTAB_OK);
  EXPECT_TRUE(std::isfinite(cond));
  EXPECT_NEAR(F[4 * 10 + 4], 2.0, 1e-12);  // column 4 is the first bracket
  oscstab_system_destroy(sys);
}

TEST(CApi, LawAndTrajectory) {
  ConfigGuard g;
  oscstab_law* law = nullptr;
  ASSERT_EQ(oscstab_law_create(g.c, &law), OSCSTAB_OK);
  EXPECT_EQ(oscstab_law_state_dim(law), 10);
  EXPECT_EQ(oscstab_law_input_dim(law), 4);
  std::vector<double> x(10, 0.0), u(4);
  x[0] = 1.0;
  ASSERT_EQ(oscstab_law_eval(law, x.data(), 0.0, u.data()), OSCSTAB_OK);
  EXPECT_EQ(u[0], -1.0);
  double V = 0, W = 0, a = 0, b = 0;
  ASSERT_EQ(oscstab_law_lyapunov(law, x.data(), &V), OSCSTAB_OK);
  EXPECT_DOUBLE_EQ(V, 0.5);
  ASSERT_EQ(oscstab_law_certificate(law, x.data(), &W, &a, &b), OSCSTAB_OK);
  EXPECT_DOUBLE_EQ(W, a + 0.25 * b);
  EXPECT_LT(W, 0.0);

  std::vector<double> x0(10);
  ASSERT_EQ(oscstab_config_initial_state(g.c, x0.data(), 10), OSCSTAB_OK);
  oscstab_trajectory* traj = nullptr;
  EXPECT_EQ(oscstab_integrate(law, x0.data(), 1.0, 300, 7, 0, &traj), OSCSTAB_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(oscstab_integrate(law, x0.data(), 1.0, 300, 1, 1, &traj), OSCSTAB_OK);
  EXPECT_EQ(oscstab_trajectory_size(traj), 3001u);
  EXPECT_EQ(oscstab_trajectory_window_count(traj), 10u);
  EXPECT_EQ(oscstab_trajectory_diverged(traj), 0);
  double t = -1, norm = -1;
  std::vector<double> xs(10);
  ASSERT_EQ(oscstab_trajectory_sample(traj, 3000, &t, xs.data(), nullptr, &norm), OSCSTAB_OK);
  EXPECT_DOUBLE_EQ(t, 1.0);
  EXPECT_GT(norm, 0.0);
  EXPECT_EQ(oscstab_trajectory_sample(traj, 3001, &t, xs.data(), nullptr, nullptr),
            OSCSTAB_ERR_INVALID_ARGUMENT);
  const auto dir = scratch("traj");
  std::filesystem::create_directories(dir);
  EXPECT_EQ(oscstab_trajectory_write_csv(traj, (dir / "t.csv").c_str()), OSCSTAB_OK);
  EXPECT_EQ(oscstab_trajectory_write_windows(traj, (dir / "w.json").c_str()), OSCSTAB_OK);
  EXPECT_EQ(oscstab_trajectory_write_csv(traj, "/proc/oscstab/t.csv"), OSCSTAB_ERR_IO);
  EXPECT_TRUE(std::filesystem::exists(dir / "w.json"));
  oscstab_trajectory_destroy(traj);
  oscstab_law_destroy(law);
}

TEST(CApi, RunReport) {
  ConfigGuard g;
  const auto dir = scratch("run");
  ASSERT_EQ(oscstab_config_load_text(g.c, "T = 1\nsubsteps = 300\nx0 = 0\n"), OSCSTAB_OK);
  ASSERT_EQ(oscstab_config_set(g.c, "out", dir.c_str()), OSCSTAB_OK);
  oscstab_report* rep = nullptr;
  ASSERT_EQ(oscstab_run(g.c, &rep), OSCSTAB_OK) << oscstab_last_error();
  EXPECT_EQ(oscstab_report_exit_code(rep), 0);
  const auto j = nlohmann::json::parse(oscstab_report_json(rep));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "run");
  EXPECT_EQ(std::filesystem::path(oscstab_report_output_dir(rep)), dir);
  EXPECT_GE(oscstab_report_wall_seconds(rep), 0.0);
  EXPECT_NE(std::string(oscstab_report_text(rep)), "");
  oscstab_report_destroy(rep);
}

TEST(CApi, SubcommandErrorsLeaveNoReport) {
  ConfigGuard g;
  ASSERT_EQ(oscstab_config_set(g.c, "system", "nothing"), OSCSTAB_OK);
  oscstab_report* rep = nullptr;
  EXPECT_EQ(oscstab_verify(g.c, &rep), OSCSTAB_ERR_CONFIG);
  EXPECT_EQ(rep, nullptr);
  ASSERT_EQ(oscstab_config_set(g.c, "system", "brockett10"), OSCSTAB_OK);
  ASSERT_EQ(oscstab_config_set(g.c, "out", "/proc/oscstab_out"), OSCSTAB_OK);
  EXPECT_EQ(oscstab_compare(g.c, &rep), OSCSTAB_ERR_IO);
}

}  // namespace
