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

// Stated global gain range for the unit exponent, checked as stated.
// This check is expected to fail: see the README section on known deviations.
#include <gtest/gtest.h>

#include <cmath>

#include "oscstab/brockett.hpp"
#include "oscstab/lyapunov.hpp"
#include "oscstab/sampling.hpp"

namespace oscstab {
namespace {

TEST(BrockettGain, UnitExponentStatedRangeSound) {
  const double gamma = 0.9 * brockett::stability_gain_range(1.0, 1.0).upper;
  for (const auto& region : {Region::split_ball(4, 10.0, 1.0), Region::ball(1.0)}) {
    const auto rep = negdef_scan(
        [&](const Vector& x) { return brockett::certificate(1.0, gamma, x).W; }, 10, region, 10000, 42);
    EXPECT_EQ(rep.violation_count, 0u) << region.describe() << " worst W " << rep.worst_value;
  }
}

}  // namespace
}  // namespace oscstab
