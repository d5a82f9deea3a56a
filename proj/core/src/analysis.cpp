#include "easym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace easym {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw std::invalid_argument("TimeSeries: length mismatch");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw std::invalid_argument("TimeSeries: times must increase strictly");
  }
}

TimeSeries TimeSeries::scaled(double factor) const {
  auto v = values_;
  for (auto& x : v) x *= factor;
  return TimeSeries(times_, std::move(v));
}

TimeSeries TimeSeries::shifted(double offset) const {
  auto v = values_;
  for (auto& x : v) x += offset;
  return TimeSeries(times_, std::move(v));
}

TimeSeries TimeSeries::window(double t1, double t2) const {
  std::vector<double> t, v;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] >= t1 && times_[k] <= t2) {
      t.push_back(times_[k]);
      v.push_back(values_[k]);
    }
  }
  return TimeSeries(std::move(t), std::move(v));
}

Peak find_peak(const TimeSeries& series) {
  if (series.empty()) throw std::invalid_argument("find_peak: empty series");
  std::size_t best = 0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series.values()[k] > series.values()[best]) best = k;
  }
  return {series.times()[best], series.values()[best]};
}

WindowStats late_time_average(const TimeSeries& series, double t1, double t2) {
  const TimeSeries w = series.window(t1, t2);
  if (static_cast<int>(w.size()) < kMinWindowSamples) {
    throw std::invalid_argument("late_time_average: window [" + std::to_string(t1) + ", " +
                                std::to_string(t2) + "] holds " + std::to_string(w.size()) +
                                " samples, need at least " + std::to_string(kMinWindowSamples));
  }
  const auto& v = w.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    return {v.front(), 0.0, static_cast<int>(v.size())};
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size())), static_cast<int>(v.size())};
}

CrossingReport detect_crossing(const TimeSeries& less_tilted, const TimeSeries& more_tilted,
                               int min_persistence) {
  if (less_tilted.times() != more_tilted.times()) {
    throw std::invalid_argument("detect_crossing: series must share one time grid");
  }
  if (min_persistence < 1) throw std::invalid_argument("detect_crossing: min_persistence must be >= 1");
  const auto& t = less_tilted.times();
  const std::size_t n = t.size();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = more_tilted.values()[k] - less_tilted.values()[k];

  std::size_t first = 0;
  while (first < n && d[first] == 0.0) ++first;
  if (first == n || d[first] < 0.0) return {};

  for (std::size_t k = first + 1; k < n; ++k) {
    if (!(d[k] < 0.0 && d[k - 1] >= 0.0)) continue;
    int run = 0;
    while (k + static_cast<std::size_t>(run) < n && d[k + static_cast<std::size_t>(run)] < 0.0) ++run;
    if (run >= min_persistence) {
      const double frac = d[k - 1] / (d[k - 1] - d[k]);
      return {true, t[k - 1] + frac * (t[k] - t[k - 1]), run};
    }
  }
  return {};
}

EarlyGrowth classify_early_growth(const TimeSeries& series, double horizon) {
  if (series.empty() || series.times().front() != 0.0) {
    throw std::invalid_argument("classify_early_growth: series must start at t = 0");
  }
  const double v0 = series.values().front();
  const double tol = 1e-9 + 1e-6 * std::abs(v0);
  for (std::size_t k = 1; k < series.size() && series.times()[k] <= horizon; ++k) {
    if (series.values()[k] > v0 + tol) return EarlyGrowth::Exceeds;
  }
  return EarlyGrowth::StaysBelow;
}

namespace {

LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear fit: all x values are equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

PowerLaw power_law_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("power_law_fit: need >= 3 paired samples");
  }
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("power_law_fit: data must be positive");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  const auto fit = ordinary_least_squares(lx, ly);
  return {std::exp(fit.intercept), fit.slope};
}

LinearFit linear_fit_extrapolate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit_extrapolate: need >= 2 paired samples");
  }
  return ordinary_least_squares(x, y);
}

}  // namespace easym
