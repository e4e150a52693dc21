#include "memsat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "memsat/error.hpp"

namespace memsat {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "fit inputs differ in length");
  const std::size_t k = x.size();
  if (k < 3) throw Error(ErrorCode::InsufficientPoints, "a fit needs at least 3 points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientPoints, "fit needs at least two distinct x values");

  LinearFit fit;
  fit.points = k;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(fit.ssr / static_cast<double>(k - 2) / sxx);
  return fit;
}

namespace {

LinearFit fit_log(std::span<const ScalingPoint> points, bool log_x) {
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.n > 0.0) || !(p.value > 0.0) || !std::isfinite(p.value)) {
      throw Error(ErrorCode::OutOfRange, "scaling fits need positive finite points");
    }
    x.push_back(log_x ? std::log(p.n) : p.n);
    y.push_back(std::log(p.value));
  }
  return least_squares(x, y);
}

}  // namespace

LinearFit fit_power_law(std::span<const ScalingPoint> points) { return fit_log(points, true); }

LinearFit fit_exponential(std::span<const ScalingPoint> points) { return fit_log(points, false); }

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::InsufficientPoints, "percentile of empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::OutOfRange, "quantile must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (std::isinf(values[lo]) || std::isinf(values[hi])) return std::numeric_limits<double>::infinity();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::optional<double> majority_median(const std::vector<double>& values) {
  const auto finite = std::count_if(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  if (values.empty() || 2 * static_cast<std::size_t>(finite) <= values.size()) return std::nullopt;
  return percentile(values, 0.5);
}

}  // namespace memsat
