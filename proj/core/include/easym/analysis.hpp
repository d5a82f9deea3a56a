#pragma once

#include <span>
#include <utility>
#include <vector>

namespace easym {

/// (time, value) samples with strictly increasing times.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  TimeSeries scaled(double factor) const;
  TimeSeries shifted(double offset) const;
  /// Samples with t in [t1, t2].
  TimeSeries window(double t1, double t2) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

struct Peak {
  double time;
  double value;
};

/// Global maximum; earliest sample wins ties.
Peak find_peak(const TimeSeries& series);

struct WindowStats {
  double mean;
  double std_dev;  // population standard deviation
  int samples;
};

inline constexpr int kMinWindowSamples = 10;

WindowStats late_time_average(const TimeSeries& series, double t1, double t2);

struct CrossingReport {
  bool crossed = false;
  double t_cross = 0.0;
  int persistence = 0;
};

inline constexpr int kDefaultCrossingPersistence = 3;

/// Detects the first persistent reversal of an initially positive difference
/// more_tilted - less_tilted. The crossing time is linearly interpolated and the
/// reversed ordering must hold for `min_persistence` consecutive samples.
/// Only the orientation whose first nonzero difference is positive can report a crossing.
CrossingReport detect_crossing(const TimeSeries& less_tilted, const TimeSeries& more_tilted,
                               int min_persistence = kDefaultCrossingPersistence);

enum class EarlyGrowth { Exceeds, StaysBelow };

/// Exceeds iff max over (0, horizon] exceeds value(0) + 1e-9 + 1e-6 |value(0)|.
EarlyGrowth classify_early_growth(const TimeSeries& series, double horizon);

struct PowerLaw {
  double a;
  double b;
};

/// y = a x^b by least squares on (ln x, ln y).
PowerLaw power_law_fit(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope;
  double intercept;
};

LinearFit linear_fit_extrapolate(std::span<const double> x, std::span<const double> y);

}  // namespace easym
