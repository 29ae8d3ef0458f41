#include "cornerlab/entry_process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cornerlab/rng.hpp"

namespace cornerlab {

namespace {

// Stream labels, so that different uses of one entry key never collide.
enum : std::uint64_t {
  kLabelEntry = 0x454e5452,      // "ENTR"
  kLabelClock = 1,
  kLabelValues = 2,
  kLabelOuComponent = 3,
  kLabelOuNode = 4,
  kLabelOuLeaf = 5,
};

// Depth of the dyadic refinement used for the OU path. Below this the cell
// width is 2^-47 and a query inside a cell is drawn from the exact OU bridge.
constexpr int kOuMaxDepth = 48;

double standard_normal(std::uint64_t key) {
  StreamEngine engine(key);
  std::normal_distribution<double> normal;
  return normal(engine);
}

// Conditional draw of a unit stationary OU process at time m given its
// values xa at a < m and xb at b > m. Uses expm1 so tiny cells stay accurate.
double ou_bridge(double a, double xa, double b, double xb, double m, double z) {
  const double d1 = m - a;
  const double d2 = b - m;
  const double r1 = std::exp(-d1);
  const double r2 = std::exp(-d2);
  const double v1 = -std::expm1(-2 * d1);
  const double v2 = -std::expm1(-2 * d2);
  const double v = -std::expm1(-2 * (d1 + d2));
  const double var = v1 * v2 / v;
  const double mean = var * (r1 * xa / v1 + r2 * xb / v2);
  return mean + std::sqrt(var) * z;
}

// Unit-variance stationary OU path, -1 <= tau <= 1, realized lazily by
// midpoint refinement keyed on the dyadic node.
double ou_value(std::uint64_t key, double tau) {
  double a = -1.0;
  double b = 1.0;
  double xa = standard_normal(derive_key(key, {kLabelOuNode, 0, 0}));
  const double rho = std::exp(-2.0);
  double xb = rho * xa + std::sqrt(-std::expm1(-4.0)) *
                             standard_normal(derive_key(key, {kLabelOuNode, 0, 1}));
  if (tau == a) return xa;
  if (tau == b) return xb;

  std::uint64_t index = 0;
  for (int depth = 1; depth <= kOuMaxDepth; ++depth) {
    const double m = 0.5 * (a + b);
    const double z = standard_normal(derive_key(
        key, {kLabelOuNode, static_cast<std::uint64_t>(depth), index}));
    const double xm = ou_bridge(a, xa, b, xb, m, z);
    if (tau == m) return xm;
    if (tau < m) {
      b = m;
      xb = xm;
      index = 2 * index;
    } else {
      a = m;
      xa = xm;
      index = 2 * index + 1;
    }
  }
  const double z =
      standard_normal(derive_key(key, {kLabelOuLeaf, std::bit_cast<std::uint64_t>(tau)}));
  return ou_bridge(a, xa, b, xb, tau, z);
}

void check_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(std::abs(times[k]) <= 1.0)) {
      throw std::invalid_argument("entry path: time outside [-1, 1]");
    }
    if (k > 0 && times[k] < times[k - 1]) {
      throw std::invalid_argument("entry path: times must be sorted");
    }
  }
}

}  // namespace

SymmetryClass symmetry_from_beta(int beta) {
  if (beta == 1) return SymmetryClass::orthogonal;
  if (beta == 2) return SymmetryClass::unitary;
  throw std::invalid_argument("beta must be 1 or 2, got " + std::to_string(beta));
}

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::gaussian_ou: return "gaussian-ou";
    case EntryKind::resampled_gaussian: return "resampled-gaussian";
    case EntryKind::resampled_unimodular: return "resampled-unimodular";
  }
  return "?";
}

EntryKind entry_kind_from_string(std::string_view name) {
  if (name == "gaussian-ou") return EntryKind::gaussian_ou;
  if (name == "resampled-gaussian") return EntryKind::resampled_gaussian;
  if (name == "resampled-unimodular") return EntryKind::resampled_unimodular;
  throw std::invalid_argument("unknown entry kind '" + std::string(name) + "'");
}

EntryProcessSpec EntryProcessSpec::make(EntryKind kind, SymmetryClass beta) {
  EntryProcessSpec spec;
  spec.kind = kind;
  spec.beta = beta;
  spec.zero_diagonal = (kind == EntryKind::resampled_unimodular);
  return spec;
}

void EntryProcessSpec::validate() const {
  if (beta != SymmetryClass::orthogonal && beta != SymmetryClass::unitary) {
    throw std::invalid_argument("entry spec: beta must be 1 or 2");
  }
  if (resampled() && resample_intensity != 1.0) {
    throw std::invalid_argument("entry spec: resampling intensity must be 1");
  }
  if (kind == EntryKind::resampled_unimodular && !zero_diagonal) {
    throw std::invalid_argument("entry spec: unimodular entries require a zero diagonal");
  }
  if (!(subgaussian_c0 > 0)) {
    throw std::invalid_argument("entry spec: subgaussian constant must be positive");
  }
}

bool operator==(const EntryProcessSpec& a, const EntryProcessSpec& b) {
  return a.kind == b.kind && a.beta == b.beta && a.resample_intensity == b.resample_intensity &&
         a.zero_diagonal == b.zero_diagonal && a.subgaussian_c0 == b.subgaussian_c0;
}

MatrixPath::MatrixPath(EntryProcessSpec spec, std::uint64_t seed) : spec_(spec), seed_(seed) {
  spec_.validate();
}

void MatrixPath::upper_entry(std::size_t i, std::size_t j, std::span<const double> times,
                             std::span<Complex> out) const {
  const bool diagonal = (i == j);
  const bool real = (spec_.beta == SymmetryClass::orthogonal) || diagonal;
  if (diagonal && spec_.zero_diagonal) {
    std::fill(out.begin(), out.end(), Complex{});
    return;
  }
  const std::uint64_t key = derive_key(seed_, {kLabelEntry, i, j});

  // Standard deviation of each real component.
  double sigma = 1.0;
  if (diagonal) {
    sigma = spec_.beta == SymmetryClass::orthogonal ? std::numbers::sqrt2 : 1.0;
  } else if (!real) {
    sigma = std::numbers::sqrt2 / 2;
  }

  if (spec_.kind == EntryKind::gaussian_ou) {
    const std::uint64_t re_key = derive_key(key, {kLabelOuComponent, 0});
    const std::uint64_t im_key = derive_key(key, {kLabelOuComponent, 1});
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double re = sigma * ou_value(re_key, times[k]);
      const double im = real ? 0.0 : sigma * ou_value(im_key, times[k]);
      out[k] = Complex(re, im);
    }
    return;
  }

  // Resampling events of a rate-1 Poisson clock on [-1, 1].
  StreamEngine clock(derive_key(key, {kLabelClock}));
  std::exponential_distribution<double> wait(spec_.resample_intensity);
  std::vector<double> events;
  for (double t = -1.0 + wait(clock); t <= 1.0; t += wait(clock)) events.push_back(t);

  StreamEngine draws(derive_key(key, {kLabelValues}));
  std::vector<Complex> values(events.size() + 1);
  if (spec_.kind == EntryKind::resampled_unimodular) {
    for (auto& v : values) {
      if (real) {
        v = (draws() >> 63) ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
      } else {
        const double theta = 2 * std::numbers::pi * draws.uniform_open();
        v = std::polar(1.0, theta);
      }
    }
  } else {
    std::normal_distribution<double> normal;
    for (auto& v : values) {
      const double re = sigma * normal(draws);
      const double im = real ? 0.0 : sigma * normal(draws);
      v = Complex(re, im);
    }
  }

  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto segment = std::upper_bound(events.begin(), events.end(), times[k]) - events.begin();
    out[k] = values[static_cast<std::size_t>(segment)];
  }
}

Complex MatrixPath::value(std::size_t i, std::size_t j, double tau) const {
  const double times[1] = {tau};
  return sample(i, j, times).front();
}

std::vector<Complex> MatrixPath::sample(std::size_t i, std::size_t j,
                                        std::span<const double> times) const {
  if (i < 1 || j < 1) throw std::invalid_argument("entry path: indices are 1-based");
  check_times(times);
  std::vector<Complex> out(times.size());
  upper_entry(std::min(i, j) - 1, std::max(i, j) - 1, times, out);
  if (i > j) {
    for (auto& v : out) v = std::conj(v);
  }
  return out;
}

std::vector<Complex> sample_entry_path(const MatrixPath& path, std::size_t i, std::size_t j,
                                       std::span<const double> times) {
  return path.sample(i, j, times);
}

std::vector<HermitianMatrix> hermitian_snapshots(const MatrixPath& path,
                                                 std::span<const double> taus, std::size_t n) {
  if (n < 1) throw std::invalid_argument("snapshot: size must be at least 1");
  check_times(taus);
  std::vector<HermitianMatrix> out(taus.size(), HermitianMatrix(n, n));
  std::vector<Complex> buffer(taus.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const auto values = path.sample(i + 1, j + 1, taus);
      for (std::size_t k = 0; k < taus.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(i);
        const auto c = static_cast<Eigen::Index>(j);
        out[k](r, c) = values[k];
        out[k](c, r) = std::conj(values[k]);
      }
    }
  }
  return out;
}

HermitianMatrix hermitian_snapshot(const MatrixPath& path, double tau, std::size_t n) {
  const double taus[1] = {tau};
  return std::move(hermitian_snapshots(path, taus, n).front());
}

CovarianceReport covariance_check(const EntryProcessSpec& spec, double delta_tau,
                                  std::size_t trials, std::uint64_t seed) {
  if (!(delta_tau >= 0.0 && delta_tau <= 2.0)) {
    throw std::invalid_argument("covariance_check: delta tau must lie in [0, 2]");
  }
  if (trials < 1000) throw std::invalid_argument("covariance_check: need at least 1000 trials");
  const double times[2] = {-0.5 * delta_tau, 0.5 * delta_tau};

  double sum = 0, sum_sq = 0;
  Complex sum_h{};
  double sum_re_sq = 0, sum_im_sq = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const MatrixPath path(spec, trial_seed(seed, t));
    const auto v = path.sample(1, 2, times);
    const double x = (v[0] * std::conj(v[1])).real();
    const Complex y = v[0] * v[1];
    sum += x;
    sum_sq += x * x;
    sum_h += y;
    sum_re_sq += y.real() * y.real();
    sum_im_sq += y.imag() * y.imag();
  }
  const double n = static_cast<double>(trials);
  CovarianceReport report;
  report.delta_tau = delta_tau;
  report.trials = trials;
  report.empirical = sum / n;
  report.model = std::exp(-delta_tau);
  report.stderr_ = std::sqrt(std::max(0.0, sum_sq / n - report.empirical * report.empirical) / (n - 1));
  report.empirical_square = sum_h / n;
  report.model_square = spec.beta == SymmetryClass::orthogonal ? std::exp(-delta_tau) : 0.0;
  const double se_re = std::sqrt(
      std::max(0.0, sum_re_sq / n - std::norm(report.empirical_square.real())) / (n - 1));
  const double se_im = std::sqrt(
      std::max(0.0, sum_im_sq / n - std::norm(report.empirical_square.imag())) / (n - 1));
  report.stderr_square = std::max(se_re, se_im);
  return report;
}

nlohmann::json to_json(const EntryProcessSpec& spec) {
  return nlohmann::json{{"kind", std::string(to_string(spec.kind))},
                        {"beta", beta_of(spec.beta)},
                        {"zero_diagonal", spec.zero_diagonal}};
}

EntryProcessSpec entry_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("entry spec: expected a JSON object");
  const auto kind = entry_kind_from_string(j.at("kind").get<std::string>());
  const auto beta = symmetry_from_beta(j.at("beta").get<int>());
  auto spec = EntryProcessSpec::make(kind, beta);
  if (j.contains("zero_diagonal")) spec.zero_diagonal = j.at("zero_diagonal").get<bool>();
  spec.validate();
  return spec;
}

}  // namespace cornerlab
