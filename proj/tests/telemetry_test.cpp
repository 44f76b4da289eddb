// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "simpath/error.hpp"
#include "simpath/synthetic.hpp"
#include "simpath/telemetry.hpp"

using namespace simpath;
using namespace simpath::telemetry;

namespace {

RawSample at(double t, double v) {
  RawSample s;
  s.t = t;
  s.speed = v;
  s.accel = {0.0, 0.0, 9.81};
  s.lat = 34.2;
  s.lon = 108.9;
  return s;
}

// Sort-based median of the replicate-padded window; independent of the
// nth_element implementation.
std::vector<double> brute_median(const std::vector<double>& xs, int w) {
  const int h = w / 2;
  const int n = static_cast<int>(xs.size());
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> win;
    for (int j = i - h; j <= i + h; ++j) win.push_back(xs[std::clamp(j, 0, n - 1)]);
    std::sort(win.begin(), win.end());
    out.push_back(win[h]);
  }
  return out;
}

UniformSeries gyro_series(const std::vector<double>& gz) {
  UniformSeries s;
  s.rate_hz = 50.0;
  for (std::size_t i = 0; i < gz.size(); ++i) {
    RawSample r = at(static_cast<double>(i) / 50.0, 10.0);
    r.gyro.z = gz[i];
    s.samples.push_back(r);
  }
  return s;
}

}  // namespace

TEST(ParseLog, SingleRecordMapsFields) {
  const auto out = parse_log(
      R"({"t":0.0,"ax":0,"ay":0,"az":9.81,"gx":0,"gy":0,"gz":0,"lat":34.2,"lon":108.9,"v":0})");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].t, 0.0);
  EXPECT_EQ(out[0].accel, (Vec3{0, 0, 9.81}));
  EXPECT_EQ(out[0].gyro, (Vec3{0, 0, 0}));
  EXPECT_EQ(out[0].lat, 34.2);
  EXPECT_EQ(out[0].lon, 108.9);
  EXPECT_EQ(out[0].speed, 0.0);
  EXPECT_TRUE(out[0].accel_valid && out[0].gyro_valid && out[0].gps_valid && out[0].speed_valid);
}

TEST(ParseLog, EmptyInput) {
  EXPECT_TRUE(parse_log("").empty());
  EXPECT_TRUE(parse_log("\n\n").empty());
}

TEST(ParseLog, OrderingErrorCarriesLine) {
  try {
    parse_log("{\"t\":1.0}\n{\"t\":0.5}\n");
    FAIL() << "expected OrderingError";
  } catch (const OrderingError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseLog, MalformedRecordCarriesLine) {
  try {
    parse_log("{\"t\":0.0}\n{\"t\":0.1}\nnot json\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_log("{\"ax\":1}"), ParseError);
  EXPECT_THROW(parse_log("{\"t\":\"x\"}"), ParseError);
}

TEST(ParseLog, UnknownFieldsIgnoredMissingGroupsInvalid) {
  const auto s = parse_record(R"({"t":1,"ax":1,"ay":2,"az":3,"v":4,"extra":"x"})");
  EXPECT_TRUE(s.accel_valid);
  EXPECT_TRUE(s.speed_valid);
  EXPECT_FALSE(s.gyro_valid);
  EXPECT_FALSE(s.gps_valid);
  const auto partial = parse_record(R"({"t":1,"ax":1,"ay":2,"v":null})");
  EXPECT_FALSE(partial.accel_valid);
  EXPECT_FALSE(partial.speed_valid);
}

TEST(ParseLog, SerializeRoundTrip) {
  const auto ride = session::synthetic_ride();
  const auto text = serialize_log(ride);
  EXPECT_EQ(parse_log(text), ride);
  EXPECT_EQ(serialize_log(parse_log(text)), text);
}

TEST(ParseLog, BundledSyntheticRideMatchesGenerator) {
  std::ifstream in(std::string(SIMPATH_DATA_DIR) + "/synthetic_ride.jsonl");
  ASSERT_TRUE(in) << "missing data/synthetic_ride.jsonl";
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), serialize_log(session::synthetic_ride()));
}

TEST(Resample, TwoPointGrid) {
  const std::vector<RawSample> in{at(0, 0), at(1, 10)};
  const auto out = resample(in, 2.0);
  ASSERT_EQ(out.size(), 3u);
  const double ts[] = {0.0, 0.5, 1.0};
  const double vs[] = {0.0, 5.0, 10.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(out.samples[i].t, ts[i]);
    EXPECT_DOUBLE_EQ(out.samples[i].speed, vs[i]);
  }
}

TEST(Resample, HandInterpolation) {
  const std::vector<RawSample> in{at(0, 0), at(1, 10), at(2, 0)};
  const auto out = resample(in, 4.0);
  ASSERT_EQ(out.size(), 9u);
  EXPECT_EQ(out.samples[1].t, 0.25);
  EXPECT_DOUBLE_EQ(out.samples[1].speed, 2.5);
  EXPECT_DOUBLE_EQ(out.samples[6].speed, 5.0);  // t = 1.5
}

TEST(Resample, ConstantChannelStaysConstant) {
  std::vector<RawSample> in;
  for (double t : {0.0, 0.13, 0.5, 0.77, 1.9}) in.push_back(at(t, 7.25));
  for (double rate : {1.0, 7.0, 50.0, 333.0}) {
    for (const auto& s : resample(in, rate).samples) {
      EXPECT_EQ(s.speed, 7.25);
      EXPECT_EQ(s.accel.z, 9.81);
    }
  }
}

TEST(Resample, IdempotentOnUniformSeries) {
  const auto once = resample(session::synthetic_ride(), 50.0);
  const auto twice = resample(once.samples, 50.0);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.samples[i], twice.samples[i]);
}

TEST(Resample, Errors) {
  EXPECT_THROW(resample(std::vector<RawSample>{at(0, 0)}, 50.0), InsufficientDataError);
  const std::vector<RawSample> two{at(0, 0), at(1, 1)};
  EXPECT_THROW(resample(two, 0.0), ArgumentError);
  EXPECT_THROW(resample(two, 1001.0), ArgumentError);
  const std::vector<RawSample> gap{at(0, 0), at(2.5, 1)};
  EXPECT_THROW(resample(gap, 50.0), GapError);
}

TEST(Resample, InvalidGroupInterpolatesAroundMissing) {
  std::vector<RawSample> in{at(0, 0), at(1, 100), at(2, 20)};
  in[1].speed_valid = false;
  const auto out = resample(in, 2.0);
  EXPECT_DOUBLE_EQ(out.samples[2].speed, 10.0);  // t = 1, between 0 and 20
  EXPECT_TRUE(out.samples[2].speed_valid);
}

TEST(Despike, SingleSpikeRemoved) {
  const auto out = despike(gyro_series({0, 0, 9, 0, 0}), 3, 100.0);
  for (const auto& s : out.samples) EXPECT_EQ(s.gyro.z, 0.0);
}

TEST(Despike, WindowOneNoClampIsIdentity) {
  const auto in = resample(session::synthetic_ride(), 50.0);
  const auto out = despike(in, 1, kNoClamp);
  ASSERT_EQ(in.size(), out.size());
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(in.samples[i], out.samples[i]);
}

TEST(Despike, ConstantUnchanged) {
  const auto out = despike(gyro_series(std::vector<double>(20, 5.0)), 5, 100.0);
  for (const auto& s : out.samples) EXPECT_EQ(s.gyro.z, 5.0);
}

TEST(Despike, EvenWindowRejected) {
  EXPECT_THROW(despike(gyro_series({0, 1, 2}), 4, 100.0), ArgumentError);
  EXPECT_THROW(despike(gyro_series({0, 1, 2}), 0, 100.0), ArgumentError);
  EXPECT_THROW(despike(gyro_series({0, 1, 2}), 3, 0.0), ArgumentError);
}

TEST(Despike, ClampApplied) {
  const auto out = despike(gyro_series(std::vector<double>(9, 500.0)), 3, 200.0);
  for (const auto& s : out.samples) EXPECT_EQ(s.gyro.z, 200.0);
}

TEST(Despike, TimestampsUnchangedAndMatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(1 + trial * 3);
    for (double& x : xs) x = u(rng);
    for (int w : {1, 3, 5, 7, 9}) {
      EXPECT_EQ(median_filter(xs, w), brute_median(xs, w));
      const auto in = gyro_series(xs);
      const auto out = despike(in, w, kNoClamp);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_EQ(out.samples[i].t, in.samples[i].t);
        EXPECT_EQ(out.samples[i].gyro.z, brute_median(xs, w)[i]);
      }
    }
  }
}
