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
#include <random>

#include "oscstab/brockett.hpp"
#include "oscstab/errors.hpp"
#include "oscstab/sampling.hpp"
#include "support.hpp"

namespace oscstab {
namespace {

TEST(BrockettSystem, FieldsAsListed) {
  const auto sys = brockett::system();
  EXPECT_EQ(sys->n(), 10);
  EXPECT_EQ(sys->m(), 4);
  EXPECT_EQ(sys->field(0, Vector::Zero(10)), Vector::Unit(10, 0));
  Vector x = Vector::Zero(10);
  x[1] = 1.0;
  EXPECT_EQ(sys->field(0, x)[4], -1.0);
  const std::vector<IndexPair> want = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(sys->pairs(), want);
}

TEST(BrockettSystem, AnalyticJacobiansMatchFiniteDifferences) {
  const auto sys = brockett::system();
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const Vector x = test::random_ball_point(rng, 10, 3.0);
    for (int f = 0; f < 4; ++f) {
      for (int c = 0; c < 10; ++c) {
        const Vector fd = test::fd_directional([&](const Vector& y) { return sys->field(f, y); }, x,
                                               Vector::Unit(10, c));
        EXPECT_LE((sys->field_jacobian(f, x).col(c) - fd).norm(), 1e-9);
      }
    }
  }
}

TEST(BrockettSystem, PairTwentyThreeGivesTwiceE8) {
  EXPECT_EQ(lie_bracket(*brockett::system(), 1, 2, Vector::Ones(10)), 2.0 * Vector::Unit(10, 7));
}

TEST(BrockettSystem, IteratedBracketsVanish) {
  const auto sys = brockett::system();
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const Vector x = test::random_ball_point(rng, 10, 3.0);
    for (const auto& [i, j] : sys->pairs()) {
      for (int f = 0; f < 4; ++f) {
        EXPECT_LE(lie_bracket_derivative(*sys, i, j, x, sys->field(f, x)).norm(), 1e-12);
      }
    }
  }
}

TEST(BrockettVtilde, Examples) {
  Vector x = Vector::Zero(10);
  x[4] = 1.0;
  EXPECT_EQ(brockett::vtilde(1.0, x)[0], -0.5);
  Vector xa = Vector::Zero(10);
  xa.head(4).setOnes();
  for (double v : brockett::vtilde(1.3, xa)) EXPECT_EQ(v, 0.0);
  x = Vector::Zero(10);
  x[9] = -2.0;
  EXPECT_DOUBLE_EQ(brockett::vtilde(1.5, x)[5], 2.0);
}

TEST(BrockettLaw, SynthesizedMatchesClosedForm) {
  for (double p : {1.0, 1.5}) {
    const auto cf = brockett::closed_form_law(p, 0.5, 0.1);
    const auto syn = brockett::synthesized_law(p, 0.5, 0.1);
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
      const Vector x = test::random_ball_point(rng, 10, 3.0);
      const auto a = cf.components(x);
      const auto b = syn.components(x);
      EXPECT_LE((a.v0 - b.v0).norm(), 1e-10);
      EXPECT_LE((a.vtilde - b.vtilde).norm(), 1e-10);
      const auto vt = brockett::vtilde(p, x);
      for (int I = 0; I < 6; ++I) EXPECT_NEAR(b.vtilde[I], vt[I], 1e-10);
    }
  }
}

TEST(BrockettCertificate, Examples) {
  EXPECT_DOUBLE_EQ(brockett::certificate(1.0, 0.5, Vector::Unit(10, 0)).W, -1.0);
  EXPECT_DOUBLE_EQ(brockett::certificate(1.0, 0.5, Vector::Unit(10, 4)).W, -0.25);
  const auto zero = brockett::certificate(1.0, 0.5, Vector::Zero(10));
  EXPECT_EQ(zero.W, 0.0);
  EXPECT_TRUE(zero.kink);
  EXPECT_FALSE(brockett::certificate(1.0, 0.5, Vector::Ones(10)).kink);
}

TEST(BrockettCertificate, AgreesWithGenericComputation) {
  for (double p : {1.0, 1.25, 1.5, 2.0}) {
    const auto law = brockett::synthesized_law(p, 0.5, 0.1);
    const auto lyap = brockett::lyapunov(p);
    std::mt19937_64 rng(33);
    int checked = 0;
    while (checked < 100) {
      const Vector x = test::random_ball_point(rng, 10, 2.0);
      if (x.tail(6).cwiseAbs().minCoeff() <= 0.01) continue;
      ++checked;
      const auto cf = brockett::certificate(p, 0.5, x);
      const auto gen = compute_W(law, *lyap, x);
      EXPECT_NEAR(cf.W, gen.W, 1e-9);
      EXPECT_NEAR(cf.alpha, gen.alpha, 1e-9);
      EXPECT_NEAR(cf.beta, gen.beta, 1e-9);
    }
  }
}

TEST(BrockettGain, Intervals) {
  auto r = brockett::stability_gain_range(1.0, 1.0);
  EXPECT_EQ(r.lower, 0.0);
  EXPECT_NEAR(r.upper, 1.41421356, 1e-8);
  r = brockett::stability_gain_range(1.5, 1.0);
  EXPECT_DOUBLE_EQ(r.upper, 1.0);
  EXPECT_GT(brockett::stability_gain_range(1.5, 1e-8).upper, 1e3);
  EXPECT_THROW(brockett::stability_gain_range(1.5, 0.0), InvalidArgument);
}

std::uint64_t gain_violations(double p, double gamma, const Region& region) {
  return negdef_scan([&](const Vector& x) { return brockett::certificate(p, gamma, x).W; }, 10,
                     region, 10000, 42)
      .violation_count;
}

TEST(BrockettGain, ThreeHalvesSoundOnDomain) {
  const double H = 1.0;
  const double gamma = 0.9 * brockett::stability_gain_range(1.5, H).upper;
  EXPECT_EQ(gain_violations(1.5, gamma, Region::split_ball(4, 2.0, H)), 0u);
  EXPECT_EQ(gain_violations(1.5, gamma, Region::split_ball(4, 10.0, H)), 0u);
}

// For p = 1 the certificate tends to -|x_a|^2 (1 - 3 gamma^2 / 4) as the bracket
// coordinates shrink to zero, so 2/sqrt(3) is the largest gain that is safe everywhere.
TEST(BrockettGain, UnitExponentSoundBelowTwoOverRootThree) {
  const double gamma = 0.9 * 2.0 / std::sqrt(3.0);
  EXPECT_EQ(gain_violations(1.0, gamma, Region::split_ball(4, 2.0, 1.0)), 0u);
  EXPECT_EQ(gain_violations(1.0, gamma, Region::split_ball(4, 10.0, 1.0)), 0u);
  EXPECT_EQ(gain_violations(1.0, gamma, Region::ball(2.0)), 0u);
}

TEST(BrockettGain, UnitExponentLimitNearAxis) {
  Vector x = Vector::Zero(10);
  x[0] = 1.0;
  for (double d : {1e-3, 1e-5, 1e-7}) {
    x[4] = x[5] = x[6] = d;
    const auto c = brockett::certificate(1.0, 1.0, x);
    EXPECT_NEAR(c.beta, 0.75, 1e-2);
  }
}

TEST(BrockettPresets, Named) {
  EXPECT_EQ(brockett::preset_state("fig1-left")->size(), 10);
  EXPECT_EQ(*brockett::preset_p("fig1-right"), 1.5);
  EXPECT_EQ((*brockett::preset_state("fig1-right"))[9], -1.0);
  EXPECT_FALSE(brockett::preset_state("nope").has_value());
}

}  // namespace
}  // namespace oscstab
