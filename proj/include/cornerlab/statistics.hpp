#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cornerlab {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double stderr_ = 0;
};

Summary summarize(std::span<const double> samples);

/// Sample Pearson correlation. Identical inputs give exactly 1.
double pearson(std::span<const double> x, std::span<const double> y);

/// Large-sample standard error of a correlation estimate, (1 - r^2)/sqrt(n - 1).
double pearson_stderr(double r, std::size_t n);

/// A tabulated continuous CDF, linearly interpolated between nodes.
struct CdfTable {
  std::vector<double> x;  // ascending
  std::vector<double> f;

  double operator()(double value) const;
  /// Inverse by bisection on the interpolant.
  double quantile(double p) const;
};

inline constexpr std::size_t kMinKsSamples = 100;

/// sup |F_n - F| between the empirical CDF of the samples and the table.
/// Requires at least kMinKsSamples samples inside the table's range.
double ks_distance(std::span<const double> samples, const CdfTable& cdf);

/// sup |F_n - G_m| between two empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
};

/// Least squares y = intercept + slope * x; needs at least 3 points for a
/// standard error.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace cornerlab
