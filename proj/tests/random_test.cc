// Copyright 2026 The pkpram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pkpram/random.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace pkpram {
namespace {

TEST(RandomTest, DeriveSeedIsDeterministicAndStreamSeparated) {
  EXPECT_EQ(DeriveSeed(7, 0, 3), DeriveSeed(7, 0, 3));
  EXPECT_NE(DeriveSeed(7, 0, 3), DeriveSeed(7, 1, 3));
  EXPECT_NE(DeriveSeed(7, 0, 3), DeriveSeed(7, 0, 4));
  EXPECT_NE(DeriveSeed(7, 0, 3), DeriveSeed(8, 0, 3));
}

TEST(RandomTest, UnitIntervalStaysInHalfOpenRange) {
  EXPECT_EQ(UnitInterval(0), 0.0);
  EXPECT_LT(UnitInterval(~uint64_t{0}), 1.0);
  EXPECT_GT(UnitInterval(~uint64_t{0}), 1.0 - 1e-15);
}

TEST(RandomTest, UniformIntCoversBoundEvenly) {
  SplitMixRng rng(99);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) ++counts[rng.UniformInt(7)];
  const double p = 1.0 / 7, sigma = std::sqrt(draws * p * (1 - p));
  for (int c : counts) EXPECT_NEAR(c, draws * p, 4 * sigma);
}

TEST(RandomTest, SampleDiscreteSkipsZeroWeights) {
  const std::vector<double> weights = {0.0, 0.5, 0.0, 0.5};
  EXPECT_EQ(SampleDiscrete(weights, 0.0), 1u);
  EXPECT_EQ(SampleDiscrete(weights, 0.49), 1u);
  EXPECT_EQ(SampleDiscrete(weights, 0.51), 3u);
  EXPECT_EQ(SampleDiscrete(weights, 0.999999999), 3u);
}

TEST(RandomTest, SampleDiscreteNeverReturnsTrailingZeroWeight) {
  const std::vector<double> weights = {0.3, 0.7, 0.0};
  EXPECT_EQ(SampleDiscrete(weights, 1.0 - 1e-17), 1u);
}

}  // namespace
}  // namespace pkpram
