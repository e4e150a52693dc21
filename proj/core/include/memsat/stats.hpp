#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace memsat {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // sqrt(ssr / (k - 2) / Sxx)
  double ssr = 0.0;           // residual sum of squares
  std::size_t points = 0;
};

struct ScalingPoint {
  double n;
  double value;
};

/// Needs >= 3 points with distinct x; throws InsufficientPoints otherwise.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Slope of log(value) against log(n): the exponent a of value ~ n^a.
LinearFit fit_power_law(std::span<const ScalingPoint> points);

/// Slope of log(value) against n: the rate b of value ~ e^{b n}.
/// Both fits measure residuals in log(value), so their ssr compare directly.
LinearFit fit_exponential(std::span<const ScalingPoint> points);

/// Linearly interpolated quantile (q in [0, 1]) of `values`, which may hold
/// +infinity for censored samples; the result is +infinity whenever the
/// interpolation touches one.
double percentile(std::vector<double> values, double q);

/// Median of `values` (censored entries = +infinity), defined only when
/// strictly more than half of the samples are finite.
std::optional<double> majority_median(const std::vector<double>& values);

}  // namespace memsat
