// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "simpath/analysis.hpp"
#include "simpath/error.hpp"

using namespace simpath;
using namespace simpath::analysis;

namespace {

MSReport report(int e, int h, int s, std::optional<GeoPoint> pos = GeoPoint{34.2, 108.9},
                std::string who = "p1", double t = 0.0) {
  MSReport r;
  r.t = t;
  r.eye = e;
  r.head = h;
  r.stomach = s;
  r.position = pos;
  r.participant = std::move(who);
  return r;
}

std::vector<double> sine(double f, double seconds, double rate, double amp = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / rate);
  }
  return out;
}

// Continuous-time Butterworth magnitudes, normalized at 0.16 Hz. With
// `rate` set, frequencies are mapped through the bilinear warp tan(pi f / fs),
// which makes the result exact for a prewarped digital design.
double analog_gain(double f, double rate = 0.0) {
  const auto warp = [rate](double x) {
    return rate > 0.0 ? std::tan(std::numbers::pi * x / rate) : x;
  };
  const auto raw = [&](double x) {
    const double rh = warp(x) / warp(0.08);
    const double rl = warp(x) / warp(0.63);
    return rh * rh / std::sqrt(1.0 + std::pow(rh, 4)) / std::sqrt(1.0 + std::pow(rl, 4));
  };
  return raw(f) / raw(0.16);
}

double rms(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

TEST(MsScore, Examples) {
  EXPECT_EQ(ms_score(report(0, 0, 0)), 0.0);
  EXPECT_EQ(ms_score(report(1, 1, 1)), 11.22);
  EXPECT_EQ(ms_score(report(7, 7, 7)), 78.54);
  EXPECT_THROW(ms_score(report(8, 0, 0)), ValidationError);
  EXPECT_THROW(ms_score(report(0, -1, 0)), ValidationError);
}

TEST(Reports, ParseAndSerialize) {
  const auto r = parse_report(R"({"t":31.5,"lat":34.2,"lon":108.9,"eye":1,"head":2,"stomach":3,"participant":"a"})");
  EXPECT_EQ(r.t, 31.5);
  ASSERT_TRUE(r.position);
  EXPECT_EQ(r.head, 2);
  EXPECT_EQ(parse_report(report_to_json(r).dump()), r);
  const auto no_pos = parse_report(R"({"t":1,"eye":0,"head":0,"stomach":0})");
  EXPECT_FALSE(no_pos.position);
  EXPECT_EQ(parse_report(report_to_json(no_pos).dump()), no_pos);
  EXPECT_THROW(parse_report(R"({"t":1,"eye":9,"head":0,"stomach":0})"), ParseError);
  EXPECT_THROW(parse_report(R"({"t":1,"eye":1.5,"head":0,"stomach":0})"), ParseError);
  std::istringstream in("{\"t\":1,\"eye\":0,\"head\":0,\"stomach\":0}\n\nbroken\n");
  try {
    parse_reports(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Msdv, ConstantClosedForm) {
  const std::vector<double> a(900 * 50, 0.5);
  const auto r = msdv(a, 50.0, Axis::Z);
  EXPECT_EQ(r.value, 15.0);
  EXPECT_EQ(r.duration, 900.0);
  EXPECT_EQ(r.axis, Axis::Z);
}

TEST(Msdv, ZeroAndEmpty) {
  EXPECT_EQ(msdv(std::vector<double>(100, 0.0), 50.0, Axis::X).value, 0.0);
  EXPECT_EQ(msdv(std::vector<double>(100, 0.0), 50.0, Axis::X, Weighting::on).value, 0.0);
  EXPECT_THROW(msdv(std::vector<double>{}, 50.0, Axis::X), InsufficientDataError);
  EXPECT_THROW(msdv(telemetry::UniformSeries{}, Axis::X), InsufficientDataError);
}

TEST(Msdv, SineNumericalIntegration) {
  const auto s = sine(0.16, 600.0, 50.0);
  // Independent trapezoid oracle over the continuous signal.
  const int fine = 600 * 1000;
  double acc = 0.0;
  for (int i = 0; i < fine; ++i) {
    const double t0 = i / 1000.0;
    const double t1 = (i + 1) / 1000.0;
    const double a0 = std::sin(2 * std::numbers::pi * 0.16 * t0);
    const double a1 = std::sin(2 * std::numbers::pi * 0.16 * t1);
    acc += 0.5 * (a0 * a0 + a1 * a1) / 1000.0;
  }
  const double oracle = std::sqrt(acc);
  EXPECT_NEAR(oracle, std::sqrt(300.0), 1e-6);
  const double off = msdv(s, 50.0, Axis::X).value;
  EXPECT_NEAR(off, oracle, 0.1);
  EXPECT_NEAR(off, std::sqrt(300.0), 0.1);
  const double on = msdv(s, 50.0, Axis::X, Weighting::on).value;
  EXPECT_NEAR(on / off, 1.0, 0.05);
}

TEST(Msdv, Homogeneity) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(5000);
  for (double& x : a) x = n(rng);
  const double base_off = msdv(a, 50.0, Axis::X).value;
  const double base_on = msdv(a, 50.0, Axis::X, Weighting::on).value;
  for (double c : {0.0, 0.5, 2.0, 4.0, 17.3}) {
    std::vector<double> scaled(a);
    for (double& x : scaled) x *= c;
    const double off = msdv(scaled, 50.0, Axis::X).value;
    const double on = msdv(scaled, 50.0, Axis::X, Weighting::on).value;
    EXPECT_LE(std::abs(off - c * base_off), 1e-9 * std::max(1.0, c * base_off));
    EXPECT_LE(std::abs(on - c * base_on), 1e-9 * std::max(1.0, c * base_on));
  }
  // Power-of-two scaling is exact in binary floating point.
  std::vector<double> twice(a);
  for (double& x : twice) x *= 2.0;
  EXPECT_EQ(msdv(twice, 50.0, Axis::X).value, 2.0 * base_off);
}

TEST(Weighting, BandPassShape) {
  const MotionSicknessWeighting w(50.0);
  EXPECT_NEAR(w.gain(0.16), 1.0, 1e-12);
  EXPECT_GT(w.gain(0.16), w.gain(0.02));
  EXPECT_GT(w.gain(0.16), w.gain(0.5));
  EXPECT_LT(w.gain(5.0), 0.05);
  EXPECT_LT(w.gain(0.005), 0.01);
  for (double f : {0.01, 0.05, 0.1, 0.16, 0.3, 0.63, 1.0, 2.0, 10.0}) {
    EXPECT_NEAR(w.gain(f), analog_gain(f, 50.0), 1e-9 * analog_gain(f, 50.0) + 1e-15) << f;
    if (f <= 1.0) EXPECT_NEAR(w.gain(f), analog_gain(f), 0.005 * analog_gain(f)) << f;
  }
  EXPECT_THROW(MotionSicknessWeighting(1.0), ArgumentError);
}

// Steady-state sine amplitude after filtering matches the reported gain.
TEST(Weighting, MeasuredResponseMatchesGain) {
  const MotionSicknessWeighting w(50.0);
  for (double f : {0.04, 0.1, 0.16, 0.4, 0.8}) {
    const double periods = 40.0;
    const double settle = 120.0;
    const auto x = sine(f, settle + periods / f, 50.0);
    const auto y = w.apply(x);
    const auto first = static_cast<std::size_t>(settle * 50.0);
    const std::span<const double> tail(y.data() + first, y.size() - first);
    const double measured = rms(tail) * std::numbers::sqrt2;
    EXPECT_NEAR(measured, w.gain(f), 0.01 * w.gain(f)) << f;
  }
}

TEST(Anova, HandExamples) {
  const std::vector<std::vector<double>> g{{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
  const auto r = anova_oneway(g);
  EXPECT_EQ(r.f, 3.0);
  EXPECT_EQ(r.df_between, 2);
  EXPECT_EQ(r.df_within, 6);

  const std::vector<std::vector<double>> same{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  EXPECT_EQ(anova_oneway(same).f, 0.0);
  EXPECT_EQ(anova_oneway(same).df_within, 6);

  const std::vector<std::vector<double>> eq_mean{{4, 6}, {0, 5, 10, 5}};
  EXPECT_EQ(anova_oneway(eq_mean).f, 0.0);

  const std::vector<std::vector<double>> no_within{{1, 1}, {2, 2}};
  EXPECT_TRUE(std::isinf(anova_oneway(no_within).f));
}

TEST(Anova, Degenerate) {
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{1, 2, 3}}), ArgumentError);
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{1, 2}, {3}}), ArgumentError);
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{2, 2}, {2, 2}}), ArgumentError);
}

// Independent textbook oracle: F from the raw-sum computing formula in long
// double.
TEST(Anova, InvarianceAndOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> sz(2, 12);
  std::uniform_int_distribution<int> ng(2, 5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<double>> g(ng(rng));
    for (auto& grp : g) {
      grp.resize(sz(rng));
      for (double& v : grp) v = u(rng);
    }
    long double n = 0, sum = 0, sumsq = 0, between = 0;
    for (const auto& grp : g) {
      long double s = 0;
      for (double v : grp) {
        s += v;
        sumsq += static_cast<long double>(v) * v;
      }
      between += s * s / grp.size();
      sum += s;
      n += grp.size();
    }
    const long double ssb = between - sum * sum / n;
    const long double ssw = sumsq - between;
    const long double f = (ssb / (g.size() - 1)) / (ssw / (n - g.size()));
    const double base = anova_oneway(g).f;
    EXPECT_NEAR(base, static_cast<double>(f), 1e-9 * std::max(1.0, base));

    const double shift = u(rng) * 100.0;
    const double scale = std::exp(u(rng));
    auto t = g;
    for (auto& grp : t) {
      for (double& v : grp) v = scale * v + shift;
    }
    EXPECT_NEAR(anova_oneway(t).f, base, 1e-8 * std::max(1.0, base));
  }
}

TEST(Pearson, HandExamples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(pearson(x, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_EQ(pearson(x, std::vector<double>{6, 4, 2}), -1.0);
  // cov = 1.5, var_x = 1, var_y = 7/3: r = 1.5 / sqrt(7/3)
  EXPECT_NEAR(pearson(x, std::vector<double>{1, 2, 4}), 0.98198, 1e-5);
  EXPECT_NEAR(pearson(x, std::vector<double>{1, 2, 4}), 1.5 / std::sqrt(7.0 / 3.0), 1e-15);
}

TEST(Pearson, Errors) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(pearson(x, std::vector<double>{5, 5, 5}), UndefinedCorrelationError);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), ArgumentError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ArgumentError);
}

TEST(Pearson, AffineInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(3 + trial % 40), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = 0.3 * x[i] + u(rng);
    }
    const double r = pearson(x, y);
    ASSERT_LE(std::abs(r), 1.0);
    const double a = std::exp(u(rng) / 4), b = u(rng) * 50;
    const double c = std::exp(u(rng) / 4), d = u(rng) * 50;
    std::vector<double> x2(x), y2(y), yneg(y);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x2[i] = a * x[i] + b;
      y2[i] = c * y[i] + d;
      yneg[i] = -c * y[i] + d;
    }
    EXPECT_NEAR(pearson(x2, y2), r, 1e-9);
    EXPECT_NEAR(pearson(x2, yneg), -r, 1e-9);
    EXPECT_NEAR(pearson(y, x), r, 1e-12);
  }
}

TEST(Heatmap, Examples) {
  EXPECT_TRUE(heatmap(std::vector<MSReport>{}).cells.empty());

  const std::vector<MSReport> two{report(0, 0, 0), report(1, 1, 1)};
  const auto g2 = heatmap(two);
  ASSERT_EQ(g2.cells.size(), 1u);
  EXPECT_EQ(g2.cells.begin()->second, 1);

  const std::vector<MSReport> three{report(0, 0, 0), report(1, 1, 1), report(1, 0, 2)};
  const auto g3 = heatmap(three);
  ASSERT_EQ(g3.cells.size(), 1u);
  EXPECT_EQ(g3.cells.begin()->second, 1);
}

TEST(Heatmap, ParticipantsIndependentAndBinned) {
  const GeoPoint a{34.2, 108.9};
  const GeoPoint b = offset_to_geo(a, 60.0, 60.0);  // two cells away at 25 m
  const std::vector<MSReport> rs{
      report(0, 0, 0, a, "p1"), report(0, 0, 0, a, "p2"), report(1, 0, 0, a, "p1"),
      report(1, 0, 0, b, "p2"), report(2, 0, 0, b, "p1"), report(3, 0, 0, std::nullopt, "p1")};
  const auto g = heatmap(rs, 25.0);
  EXPECT_EQ(g.skipped, 1u);
  ASSERT_EQ(g.cells.size(), 2u);
  EXPECT_EQ((g.cells.at({0, 0})), 1);
  EXPECT_EQ((g.cells.at({2, 2})), 2);
  const auto doc = heatmap_to_json(g);
  EXPECT_EQ(doc["cells"].size(), 2u);
  EXPECT_EQ(doc["skipped"], 1);
  EXPECT_THROW(heatmap(rs, 0.0), ArgumentError);
}
