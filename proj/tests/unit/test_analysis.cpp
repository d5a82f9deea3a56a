#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "easym/analysis.hpp"

using namespace easym;

namespace {
TimeSeries grid(double t_max, double dt, auto f) {
  std::vector<double> t, v;
  for (int k = 0; k * dt <= t_max + 1e-12; ++k) {
    t.push_back(k * dt);
    v.push_back(f(k * dt));
  }
  return TimeSeries(t, v);
}
}  // namespace

TEST(TimeSeries, Validation) {
  EXPECT_THROW(TimeSeries({0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(TimeSeries({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  const TimeSeries s({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  EXPECT_EQ(s.window(0.5, 2.0).size(), 2u);
  EXPECT_EQ(s.scaled(2.0).values()[2], 6.0);
  EXPECT_EQ(s.shifted(1.0).values()[0], 2.0);
}

TEST(FindPeak, Examples) {
  const auto p = find_peak(TimeSeries({0, 1, 2, 3}, {0, 1, 0.3, 0.3}));
  EXPECT_EQ(p.time, 1.0);
  EXPECT_EQ(p.value, 1.0);
  const auto mono = find_peak(grid(5.0, 0.5, [](double t) { return t; }));
  EXPECT_EQ(mono.time, 5.0);
  const auto tie = find_peak(TimeSeries({0, 1, 2}, {2.0, 1.0, 2.0}));
  EXPECT_EQ(tie.time, 0.0);
  EXPECT_THROW(find_peak(TimeSeries()), std::invalid_argument);
}

TEST(FindPeak, ScaleCovariance) {
  const auto s = grid(10.0, 0.1, [](double t) { return std::sin(t) * std::exp(-0.1 * t); });
  const auto a = find_peak(s), b = find_peak(s.scaled(3.5));
  EXPECT_EQ(a.time, b.time);
  EXPECT_DOUBLE_EQ(b.value, 3.5 * a.value);
}

TEST(LateTimeAverage, Examples) {
  const auto c = late_time_average(grid(100.0, 1.0, [](double) { return 0.7; }), 20.0, 80.0);
  EXPECT_DOUBLE_EQ(c.mean, 0.7);
  EXPECT_EQ(c.std_dev, 0.0);
  EXPECT_EQ(c.samples, 61);
  const auto z = late_time_average(grid(100.0, 1.0, [](double) { return 0.0; }), 20.0, 80.0);
  EXPECT_EQ(z.mean, 0.0);
  const auto s = late_time_average(grid(2000.0, 0.37, [](double t) { return 1.0 + 0.1 * std::sin(t); }), 200.0, 2000.0);
  EXPECT_NEAR(s.mean, 1.0, 0.01);
  EXPECT_NEAR(s.std_dev, 0.1 / std::sqrt(2.0), 0.005);
  EXPECT_THROW(late_time_average(grid(10.0, 1.0, [](double t) { return t; }), 2.0, 5.0), std::invalid_argument);
}

TEST(DetectCrossing, Examples) {
  const auto one = grid(3.0, 0.01, [](double) { return 1.0; });
  const auto two = grid(3.0, 0.01, [](double) { return 2.0; });
  EXPECT_FALSE(detect_crossing(one, two).crossed);
  const auto falling = grid(3.0, 0.01, [](double t) { return 2.0 - t; });
  const auto r = detect_crossing(one, falling);
  EXPECT_TRUE(r.crossed);
  EXPECT_NEAR(r.t_cross, 1.0, 1e-9);
  EXPECT_GE(r.persistence, 3);
  EXPECT_THROW(detect_crossing(one, grid(3.0, 0.02, [](double) { return 1.0; })), std::invalid_argument);
}

TEST(DetectCrossing, PersistenceFiltersBriefDips) {
  std::vector<double> t, less, more;
  for (int k = 0; k < 20; ++k) {
    t.push_back(k);
    less.push_back(0.0);
    more.push_back(k == 5 || k == 6 ? -0.1 : 1.0);
  }
  EXPECT_FALSE(detect_crossing(TimeSeries(t, less), TimeSeries(t, more), 3).crossed);
  const auto r = detect_crossing(TimeSeries(t, less), TimeSeries(t, more), 2);
  EXPECT_TRUE(r.crossed);
  EXPECT_NEAR(r.t_cross, 4.0 + 1.0 / 1.1, 1e-12);
}

TEST(DetectCrossing, Antisymmetry) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t, a, b;
    const double slope = g(rng), offset = g(rng);
    for (int k = 0; k < 50; ++k) {
      t.push_back(0.1 * k);
      a.push_back(offset + 0.1 * g(rng));
      b.push_back(slope * 0.1 * k + 0.1 * g(rng));
    }
    const TimeSeries sa(t, a), sb(t, b);
    EXPECT_FALSE(detect_crossing(sa, sb).crossed && detect_crossing(sb, sa).crossed);
  }
}

TEST(ClassifyEarlyGrowth, Examples) {
  EXPECT_EQ(classify_early_growth(grid(5.0, 0.1, [](double t) { return 1.0 - t; }), 3.0), EarlyGrowth::StaysBelow);
  EXPECT_EQ(classify_early_growth(grid(5.0, 0.1, [](double t) { return t; }), 3.0), EarlyGrowth::Exceeds);
  // growth after the horizon is ignored
  EXPECT_EQ(classify_early_growth(grid(5.0, 0.1, [](double t) { return t > 4 ? 2.0 : 1.0 - 0.01 * t; }), 3.0),
            EarlyGrowth::StaysBelow);
  EXPECT_THROW(classify_early_growth(TimeSeries({1.0, 2.0}, {0.0, 1.0}), 2.0), std::invalid_argument);
}

TEST(ClassifyEarlyGrowth, ShiftInvariance) {
  const auto s = grid(5.0, 0.1, [](double t) { return std::sin(3 * t) - 0.5 * t; });
  const auto base = classify_early_growth(s, 4.0);
  for (double c : {-10.0, 0.5, 3.0}) EXPECT_EQ(classify_early_growth(s.shifted(c), 4.0), base);
}

TEST(PowerLawFit, Examples) {
  const std::vector<double> x{0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 * std::sqrt(v));
  const auto f = power_law_fit(x, y);
  EXPECT_NEAR(f.a, 2.0, 1e-10);
  EXPECT_NEAR(f.b, 0.5, 1e-10);
  const std::vector<double> c(5, 4.2);
  EXPECT_NEAR(power_law_fit(x, c).b, 0.0, 1e-12);
  const std::vector<double> xu{1.0, 7.0, 7.5, 100.0};
  std::vector<double> yu;
  for (double v : xu) yu.push_back(1.9 * std::pow(v, 0.9));
  const auto g = power_law_fit(xu, yu);
  EXPECT_NEAR(g.a, 1.9, 1e-10);
  EXPECT_NEAR(g.b, 0.9, 1e-10);
  EXPECT_THROW(power_law_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(power_law_fit(std::vector<double>{1, 2, 0}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(LinearFit, Examples) {
  const std::vector<double> x{0.0, 1.0, 2.0, 5.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v + 1);
  const auto f = linear_fit_extrapolate(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 3.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  const auto two = linear_fit_extrapolate(std::vector<double>{0.5, 1.5}, std::vector<double>{2.0, -1.0});
  EXPECT_NEAR(two.slope, -3.0, 1e-14);
  EXPECT_NEAR(two.intercept, 3.5, 1e-14);
  EXPECT_THROW(linear_fit_extrapolate(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(linear_fit_extrapolate(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}
