#include "cornerlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cornerlab {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

Summary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: no samples");
  Summary out;
  out.count = samples.size();
  CompensatedSum sum;
  for (double x : samples) sum.add(x);
  out.mean = sum.value() / static_cast<double>(out.count);
  if (out.count > 1) {
    CompensatedSum squares;
    for (double x : samples) squares.add((x - out.mean) * (x - out.mean));
    out.variance = squares.value() / static_cast<double>(out.count - 1);
    out.stderr_ = std::sqrt(out.variance / static_cast<double>(out.count));
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need two equal-length samples");
  if (std::equal(x.begin(), x.end(), y.begin())) return 1.0;
  const double mx = summarize(x).mean;
  const double my = summarize(y).mean;
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (sxx.value() <= 0 || syy.value() <= 0) throw std::invalid_argument("pearson: constant sample");
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

double pearson_stderr(double r, std::size_t n) {
  if (n < 2) throw std::invalid_argument("pearson_stderr: need two samples");
  return (1 - r * r) / std::sqrt(static_cast<double>(n - 1));
}

double CdfTable::operator()(double value) const {
  if (x.empty() || x.size() != f.size()) throw std::invalid_argument("cdf table: malformed");
  if (value <= x.front()) return f.front();
  if (value >= x.back()) return f.back();
  const auto upper = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), value) - x.begin());
  const std::size_t lower = upper - 1;
  const double w = (value - x[lower]) / (x[upper] - x[lower]);
  return (1 - w) * f[lower] + w * f[upper];
}

double CdfTable::quantile(double p) const {
  double lo = x.front(), hi = x.back();
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * (1 + std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_distance(std::span<const double> samples, const CdfTable& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  if (samples.size() < kMinKsSamples) throw std::invalid_argument("ks_distance: fewer than 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < cdf.x.front() || sorted.back() > cdf.x.back()) {
    throw std::out_of_range("ks_distance: samples fall outside the table range");
  }
  const double n = static_cast<double>(sorted.size());
  double d = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t end = i;
    while (end < sorted.size() && sorted[end] == sorted[i]) ++end;
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(end) / n - f});
    i = end;
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two points");
  const double n = static_cast<double>(x.size());
  const double mx = summarize(x).mean, my = summarize(y).mean;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

}  // namespace cornerlab
