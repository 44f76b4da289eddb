// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "simpath/error.hpp"
#include "simpath/kinematics.hpp"

using namespace simpath;
using namespace simpath::kinematics;
using telemetry::RawSample;
using telemetry::UniformSeries;

namespace {

UniformSeries series(int n, double rate, double (*v)(double), double gz) {
  UniformSeries s;
  s.rate_hz = rate;
  for (int i = 0; i < n; ++i) {
    RawSample r;
    r.t = i / rate;
    r.speed = v(r.t);
    r.gyro.z = gz;
    s.samples.push_back(r);
  }
  return s;
}

}  // namespace

TEST(DeriveMotion, ConstantInputs) {
  const auto states = derive_motion(series(100, 50.0, [](double) { return 10.0; }, 5.0));
  ASSERT_EQ(states.size(), 100u);
  for (const auto& m : states) {
    EXPECT_EQ(m.a_steer, 5.0);
    EXPECT_EQ(m.a_long, 0.0);
    EXPECT_EQ(m.v, 10.0);
  }
}

TEST(DeriveMotion, RampSlope) {
  const auto states = derive_motion(series(51, 50.0, [](double t) { return 10.0 + 2.0 * t; }, 0.0));
  for (const auto& m : states) EXPECT_NEAR(m.a_long, 2.0, 1e-9);
}

TEST(DeriveMotion, AllZero) {
  for (const auto& m : derive_motion(series(20, 10.0, [](double) { return 0.0; }, 0.0))) {
    EXPECT_EQ(m.v, 0.0);
    EXPECT_EQ(m.a_long, 0.0);
    EXPECT_EQ(m.a_steer, 0.0);
  }
}

TEST(DeriveMotion, Errors) {
  EXPECT_THROW(derive_motion(UniformSeries{}), InsufficientDataError);
  EXPECT_THROW(derive_motion(series(5, 5.0, [](double) { return 1.0; }, 0.0)), ArgumentError);
  auto s = series(5, 50.0, [](double) { return 1.0; }, 0.0);
  s.samples[2].speed_valid = false;
  EXPECT_THROW(derive_motion(s), InsufficientDataError);
  s = series(5, 50.0, [](double) { return -1.0; }, 0.0);
  EXPECT_THROW(derive_motion(s), ValidationError);
}

TEST(Smooth, HandRecurrence) {
  const std::vector<MotionState> in{{0, 0, 0, 0}, {0.1, 0, 0, 10}};
  const auto out = smooth(in, 0.5);
  EXPECT_EQ(out[0].a_steer, 0.0);
  EXPECT_EQ(out[1].a_steer, 5.0);
}

TEST(Smooth, IdentityAndConstant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<MotionState> in;
  for (int i = 0; i < 200; ++i) in.push_back({i * 0.02, u(rng), u(rng), u(rng)});
  EXPECT_EQ(smooth(in, 1.0), in);

  const std::vector<MotionState> flat(50, MotionState{0.0, 11.1, -0.7, 6.3});
  for (double a : {0.01, 0.3, 0.77}) {
    for (const auto& m : smooth(flat, a)) {
      EXPECT_EQ(m.v, 11.1);
      EXPECT_EQ(m.a_long, -0.7);
      EXPECT_EQ(m.a_steer, 6.3);
    }
  }
}

TEST(Smooth, BoundedByInputRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<MotionState> in;
  for (int i = 0; i < 500; ++i) in.push_back({i * 0.02, u(rng), u(rng), u(rng)});
  for (const auto& m : smooth(in, 0.3)) {
    EXPECT_GE(m.a_steer, -10.0);
    EXPECT_LE(m.a_steer, 10.0);
  }
}

TEST(Smooth, Errors) {
  const std::vector<MotionState> one(1);
  EXPECT_THROW(smooth(one, 0.0), ArgumentError);
  EXPECT_THROW(smooth(one, 1.5), ArgumentError);
  EXPECT_THROW(smooth(std::vector<MotionState>{}, 0.5), InsufficientDataError);
}

TEST(SampleAt, InterpolatesAndClamps) {
  const std::vector<MotionState> s{{0, 0, 0, 0}, {1, 10, 2, -4}};
  const auto mid = sample_at(s, 0.25);
  EXPECT_DOUBLE_EQ(mid.v, 2.5);
  EXPECT_DOUBLE_EQ(mid.a_long, 0.5);
  EXPECT_DOUBLE_EQ(mid.a_steer, -1.0);
  EXPECT_EQ(sample_at(s, -1).v, 0.0);
  EXPECT_EQ(sample_at(s, 5).v, 10.0);
  EXPECT_EQ(sample_at(s, 1.0).a_steer, -4.0);
}
