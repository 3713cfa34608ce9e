#include <doctest.h>

#include "rpsgmm/errors.hpp"
#include "rpsgmm/preprocess.hpp"

using namespace rpsgmm;

TEST_CASE("hv_anomaly") {
  CHECK(hv_anomaly(-20.0, -10.0) == -10.0);
  CHECK(hv_anomaly(-15.0, -15.0) == 0.0);
  CHECK(hv_anomaly(-12.3, -9.8) == doctest::Approx(-2.5));
  CHECK_THROWS_AS(hv_anomaly(std::nan(""), 0.0), DomainError);
  // Antisymmetric under swapping arguments.
  for (double a : {-20.0, -3.5, 0.0, 4.0}) {
    for (double b : {-11.0, 0.25, 9.0}) {
      CHECK(hv_anomaly(a, b) == -hv_anomaly(b, a));
    }
  }
}

TEST_CASE("water_percentage") {
  CHECK(water_percentage(50, 200) == 25.0);
  CHECK(water_percentage(0, 500) == 0.0);
  CHECK(water_percentage(500, 500) == 100.0);
  CHECK_THROWS_AS(water_percentage(1, 0), DomainError);
  CHECK_THROWS_AS(water_percentage(501, 500), DomainError);
  // Monotone nondecreasing in n_water.
  double prev = -1.0;
  for (int w = 0; w <= 200; w += 10) {
    const double p = water_percentage(w, 200);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("interpolate_daily: linear interior, constant extrapolation") {
  RawObservations raw;
  raw.id = "a";
  raw.samples["x"] = {{0, 0.0}, {4, 4.0}};
  const auto ts = interpolate_daily(raw, 0, 4);
  REQUIRE(ts.length() == 5);
  for (int d = 0; d <= 4; ++d) CHECK(ts.values(d, 0) == doctest::Approx(d));

  RawObservations flat;
  flat.id = "b";
  flat.samples["x"] = {{2, 7.0}, {5, 7.0}};
  const auto out = interpolate_daily(flat, 0, 7);
  REQUIRE(out.length() == 8);
  for (int d = 0; d <= 7; ++d) CHECK(out.values(d, 0) == 7.0);

  RawObservations slope;
  slope.id = "c";
  slope.samples["x"] = {{0, 0.0}, {10, 5.0}};
  CHECK(interpolate_daily(slope, 0, 10).values(3, 0) == doctest::Approx(1.5));
}

TEST_CASE("interpolate_daily: exact on already-daily input") {
  RawObservations raw;
  raw.id = "daily";
  for (int d = 0; d < 20; ++d) {
    raw.samples["x"].emplace_back(d, std::sin(0.3 * d));
  }
  const auto ts = interpolate_daily(raw, 0, 19);
  for (int d = 0; d < 20; ++d) {
    CHECK(ts.values(d, 0) == raw.samples["x"][static_cast<std::size_t>(d)].second);
  }
}

TEST_CASE("interpolate_daily: one observation is insufficient") {
  RawObservations raw;
  raw.id = "short";
  raw.samples["x"] = {{3, 1.0}};
  CHECK_THROWS_AS(interpolate_daily(raw, 0, 10), InsufficientDataError);
}

namespace {

TimeSeries daily_series(std::initializer_list<double> vals) {
  TimeSeries ts;
  ts.id = "s";
  ts.channels = {"x"};
  int day = 0;
  ts.values.resize(static_cast<int>(vals.size()), 1);
  for (double v : vals) {
    ts.timestamps.push_back(day);
    ts.values(day, 0) = v;
    ++day;
  }
  return ts;
}

}  // namespace

TEST_CASE("smooth: constant series is unchanged") {
  const auto ts = daily_series({3, 3, 3, 3, 3, 3, 3});
  for (int w : {1, 3, 4, 12}) {
    const auto out = smooth(ts, "x", w);
    for (int d = 0; d < 7; ++d) CHECK(out.values(d, 0) == doctest::Approx(3.0));
  }
}

TEST_CASE("smooth: 3-point window at a spike and at the boundary") {
  const auto spike = smooth(daily_series({0, 0, 0, 12, 0, 0, 0}), "x", 3);
  CHECK(spike.values(3, 0) == doctest::Approx(4.0));

  const auto edge = smooth(daily_series({12, 0, 0, 0, 0, 0, 0}), "x", 3);
  CHECK(edge.values(0, 0) == doctest::Approx(6.0));  // truncated 2-point window
}

TEST_CASE("smooth: even window covers [t-w/2, t+w/2-1]") {
  // Window 4 at t=5 of an impulse at day 3 must include day 3 (t-2) but an
  // impulse at day 7 (t+2) must be excluded.
  auto ts = daily_series({0, 0, 0, 8, 0, 0, 0, 8, 0, 0, 0});
  const auto out = smooth(ts, "x", 4);
  CHECK(out.values(5, 0) == doctest::Approx(8.0 / 4.0));
}

TEST_CASE("smooth: unknown channel") {
  CHECK_THROWS_AS(smooth(daily_series({1, 2}), "nope", 3), SchemaError);
}

TEST_CASE("smooth: other channels untouched") {
  TimeSeries ts;
  ts.id = "two";
  ts.channels = {"a", "b"};
  ts.timestamps = {0, 1, 2};
  ts.values.resize(3, 2);
  ts.values << 1, 9, 5, 9, 9, 9;
  const auto out = smooth(ts, "a", 3);
  for (int d = 0; d < 3; ++d) CHECK(out.values(d, 1) == 9.0);
}

TEST_CASE("preprocess_lake: differencing then interpolation then smoothing") {
  RawObservations raw;
  raw.id = "lake1";
  // hv observed on days 0 and 12; background on 0, 6, 12. Anomaly exists
  // only on shared days 0 and 12.
  raw.samples[channels::kHvLake] = {{0, -15.0}, {12, -15.0}};
  raw.samples[channels::kHvBackground] = {{0, -10.0}, {6, -99.0}, {12, -10.0}};
  raw.samples[channels::kNWater] = {{0, 0.0}, {12, 60.0}};
  raw.samples[channels::kNTotal] = {{0, 100.0}, {12, 100.0}};

  PreprocessOptions opts;
  opts.day_start = 0;
  opts.day_end = 12;
  opts.smooth_window = 1;  // identity smoothing to check the interpolation
  const auto ts = preprocess_lake(raw, opts);
  REQUIRE(ts.length() == 13);
  REQUIRE(ts.channels ==
          std::vector<std::string>{channels::kHvAnom, channels::kPWater});
  // Constant -5 anomaly; the day-6 background-only observation is ignored.
  for (int d = 0; d <= 12; ++d) CHECK(ts.values(d, 0) == doctest::Approx(-5.0));
  CHECK(ts.values(6, 1) == doctest::Approx(30.0));
  CHECK(ts.values(12, 1) == doctest::Approx(60.0));
}
