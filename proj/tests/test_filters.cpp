// Copyright 2026 The qoct Authors
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
#include <numbers>

#include "common.hpp"

using namespace qoct;


TEST(Filter, MaskValues) {
  EXPECT_DOUBLE_EQ(evaluate(AllPass{}, 3.0), 1.0);
  // both mirror Gaussians contribute at w = 0
  EXPECT_NEAR(evaluate(GaussianPass{{0.1568}, 500.0}, 0.0), 2.0 * std::exp(-500.0 * 0.1568 * 0.1568), 1e-18);
  EXPECT_NEAR(evaluate(GaussianPass{{0.1568}, 500.0}, 0.1568), 1.0, 1e-9);
  EXPECT_NEAR(evaluate(GaussianPass{{0.1568}, 500.0}, -0.1568), 1.0, 1e-9);
  EXPECT_NEAR(evaluate(GaussianStop{0.5454, 500.0}, 0.5454), 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(evaluate(Band{0.0, 0.12}, -0.1), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(Band{0.0, 0.12}, 0.13), 0.0);
}

TEST(Filter, OverlappingGaussiansClamped) {
  const GaussianPass p{{0.3, 0.3}, 500.0};
  EXPECT_DOUBLE_EQ(evaluate(p, 0.3), 1.0);
  EXPECT_GE(evaluate(GaussianStop{0.0, 500.0}, 0.0), 0.0);
}

TEST(Filter, Validation) {
  EXPECT_THROW(validate(GaussianPass{{}, 500.0}), InvalidArgument);
  EXPECT_THROW(validate(GaussianStop{0.1, 0.0}), InvalidArgument);
  EXPECT_THROW(validate(Band{0.2, 0.1}), InvalidArgument);
  EXPECT_THROW(validate(Band{-0.1, 0.1}), InvalidArgument);
}

TEST(Filter, AllPassIsExactCopy) {
  const auto f = Field::from_function(TimeGrid::make(10.0, 0.01), [](double t) { return std::sin(t) + 0.1 * t; });
  EXPECT_TRUE(apply_filter(AllPass{}, f) == f);
}

TEST(Filter, BandKeepsOnlyDcOfConstant) {
  const auto f = Field::constant(TimeGrid::make(400.0, 0.005), -0.2);
  const auto out = apply_filter(Band{0.0, 0.12}, f);
  for (std::size_t n = 0; n < out.size(); n += 997) EXPECT_NEAR(out[n], -0.2, 1e-12);
}

TEST(Filter, StopRemovesResonantTone) {
  // an exact bin frequency so the tone occupies a single bin pair
  const auto tg = TimeGrid::make(400.0, 0.005);
  const double dw = frequency_spacing(tg);
  const double w = std::round(0.1568 / dw) * dw;
  const auto f = Field::from_function(tg, [&](double t) { return 0.02 * std::sin(w * t); });
  const auto out = apply_filter(GaussianStop{w, 500.0}, f);
  EXPECT_LT(fluence(out), 1e-3 * fluence(f));
}

TEST(Filter, SupportConfinement) {
  const auto f = Field::from_function(TimeGrid::make(200.0, 0.01), [](double t) {
    return 0.03 * std::sin(0.1568 * t) + 0.02 * std::sin(0.5454 * t) + 0.01 * std::cos(0.05 * t) - 0.01;
  });
  const FilterSpec specs[] = {Band{0.0, 0.12}, Band{0.094, 0.236}, GaussianPass{{0.1568, 0.5454}, 500.0}};
  for (const auto& spec : specs) {
    EXPECT_GT(out_of_band_fraction(f, spec), 1e-3);
    EXPECT_LT(out_of_band_fraction(apply_filter(spec, f), spec), 1e-10);
  }
  EXPECT_EQ(out_of_band_fraction(f, AllPass{}), 0.0);
}

TEST(Filter, Linear) {
  const auto tg = TimeGrid::make(50.0, 0.01);
  const auto a = Field::from_function(tg, [](double t) { return std::sin(0.3 * t); });
  const auto b = Field::from_function(tg, [](double t) { return std::cos(0.9 * t); });
  auto sum = Field::from_function(tg, [](double t) { return std::sin(0.3 * t) + 2.0 * std::cos(0.9 * t); });
  const FilterSpec spec = GaussianPass{{0.3}, 50.0};
  const auto fa = apply_filter(spec, a), fb = apply_filter(spec, b), fs = apply_filter(spec, sum);
  for (std::size_t n = 0; n < fs.size(); n += 101) EXPECT_NEAR(fs[n], fa[n] + 2.0 * fb[n], 1e-12);
}

TEST(Filter, SingleBin) {
  const auto tg = TimeGrid::make(400.0, 0.005);
  const double dw = frequency_spacing(tg);
  const Band b = single_bin(0.1568, tg);
  EXPECT_NEAR(b.omega_b - b.omega_a, dw, 1e-15);
  std::size_t hits = 0;
  for (double m : mask_values(b, tg)) hits += m > 0.5;
  EXPECT_EQ(hits, 2u);  // +w and -w
}

TEST(Spectrum, AscendingAndPeaked) {
  const auto tg = TimeGrid::make(400.0, 0.005);
  const double dw = frequency_spacing(tg);
  const double w = 25 * dw;
  const auto f = Field::from_function(tg, [&](double t) { return std::cos(w * t); });
  const auto s = spectrum(f);
  ASSERT_EQ(s.size(), tg.n_samples());
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].omega, s[i].omega);
  const auto peak = std::max_element(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return std::abs(a.amplitude) < std::abs(b.amplitude);
  });
  EXPECT_NEAR(std::abs(peak->omega), w, 1e-12);
}
