#include "cornerlab/airy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>

#include "cornerlab/quadrature.hpp"

namespace cornerlab {

namespace {

double ai(double x) { return boost::math::airy_ai(x); }
double aip(double x) { return boost::math::airy_ai_prime(x); }

void check_range(double x) {
  if (!(x >= kAiryMin && x <= kAiryMax)) {
    throw std::out_of_range("Airy function argument outside [-15, 10]: " + std::to_string(x));
  }
}

constexpr double kKernelTolerance = 1e-13;

// int_0^U e^{-u c} Ai(a + u) Ai(b + u) du by adaptive Gauss-Kronrod.
double weighted_half_line(double c, double a, double b, double upper) {
  auto f = [&](double u) { return std::exp(-u * c) * ai(a + u) * ai(b + u); };
  double error = 0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 20, kKernelTolerance, &error);
  if (!(error <= 1e-11 * std::max(1.0, std::abs(value)))) {
    throw std::runtime_error("extended Airy kernel: quadrature did not converge");
  }
  return value;
}

// Upper limit beyond which e^{-u c} Ai(a + u) Ai(b + u) is negligible.
double half_line_cutoff(double c, double a, double b) {
  return kAiryTruncation + 4 * std::max(0.0, -c) - std::min({a, b, 0.0});
}

double gaussian_term(double z, double a, double b) {
  return std::exp(z * z * z / 12 - (a + b) * z / 2 - (a - b) * (a - b) / (4 * z)) /
         std::sqrt(4 * std::numbers::pi * z);
}

}  // namespace

double airy_ai(double x) {
  check_range(x);
  return ai(x);
}

double airy_ai_prime(double x) {
  check_range(x);
  return aip(x);
}

double airy_kernel(double a, double b) {
  const double h = 0.5 * (a - b);
  if (std::abs(a - b) < 1e-3) {
    const double c = 0.5 * (a + b);
    const double y = ai(c), yp = aip(c);
    const double diagonal = yp * yp - c * y * y;
    // d^2/dh^2 of int Ai(c + h + u) Ai(c - h + u) du at h = 0, halved.
    const double curvature = (2 * (c * yp * yp - c * c * y * y) + y * yp) / 3;
    return diagonal + h * h * curvature;
  }
  return (ai(a) * aip(b) - aip(a) * ai(b)) / (a - b);
}

double extended_airy_kernel(double s1, double a, double s2, double b) {
  if (s1 == s2) return airy_kernel(a, b);
  const double d = s1 - s2;
  if (d > 0) return weighted_half_line(d, a, b, half_line_cutoff(d, a, b));
  const double z = -d;
  return weighted_half_line(d, a, b, half_line_cutoff(d, a, b)) - gaussian_term(z, a, b);
}

double extended_airy_kernel_direct(double s1, double a, double s2, double b) {
  if (s1 >= s2) return extended_airy_kernel(s1, a, s2, b);
  const double z = s2 - s1;
  // e^{-z U} / (pi sqrt(U)) < 1e-12
  double upper = 1;
  while (std::exp(-z * upper) / (std::numbers::pi * std::sqrt(upper)) >= 1e-12) upper *= 1.25;
  auto f = [&](double u) { return std::exp(u * z) * ai(a + u) * ai(b + u); };
  double error = 0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, -upper, 0.0, 25, kKernelTolerance, &error);
  if (!(error <= 1e-10)) throw std::runtime_error("extended Airy kernel: quadrature did not converge");
  return -value;
}

std::size_t KernelDiscretization::size() const {
  std::size_t n = 0;
  for (const auto& block : nodes) n += block.size();
  return n;
}

KernelDiscretization discretize_kernel(std::span<const double> times, std::span<const double> cutoffs,
                                       std::size_t nodes) {
  if (times.size() != cutoffs.size() || times.empty()) {
    throw std::invalid_argument("kernel discretization: one cutoff per time");
  }
  if (nodes < 20) throw std::invalid_argument("kernel discretization: at least 20 nodes per block");
  KernelDiscretization k;
  k.times.assign(times.begin(), times.end());
  k.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  for (double x : cutoffs) {
    const auto rule = gauss_legendre(nodes, x, std::max(x, 0.0) + kAiryTruncation);
    k.nodes.push_back(rule.nodes);
    k.weights.push_back(rule.weights);
  }
  return k;
}

Eigen::MatrixXd KernelDiscretization::operator_matrix() const {
  const std::size_t blocks = times.size();
  std::vector<std::size_t> start(blocks + 1, 0);
  for (std::size_t p = 0; p < blocks; ++p) start[p + 1] = start[p] + nodes[p].size();
  const auto n = static_cast<Eigen::Index>(start.back());
  Eigen::MatrixXd m(n, n);

  // Shared u-grid for blocks at distinct times.
  double lowest = 0, spread = 0;
  for (std::size_t p = 0; p < blocks; ++p) {
    lowest = std::min(lowest, cutoffs[p]);
    for (std::size_t q = 0; q < blocks; ++q) spread = std::max(spread, std::abs(times[p] - times[q]));
  }
  const double upper = kAiryTruncation + 4 * spread - lowest;
  const auto urule = gauss_legendre(std::max<std::size_t>(200, static_cast<std::size_t>(8 * upper)), 0.0, upper);
  const auto nu = static_cast<Eigen::Index>(urule.nodes.size());
  std::vector<Eigen::MatrixXd> shifted(blocks);
  if (spread > 0) {
    for (std::size_t p = 0; p < blocks; ++p) {
      shifted[p].resize(static_cast<Eigen::Index>(nodes[p].size()), nu);
      for (std::size_t i = 0; i < nodes[p].size(); ++i) {
        for (Eigen::Index q = 0; q < nu; ++q) {
          shifted[p](static_cast<Eigen::Index>(i), q) = ai(nodes[p][i] + urule.nodes[q]);
        }
      }
    }
  }

  for (std::size_t p = 0; p < blocks; ++p) {
    for (std::size_t q = 0; q < blocks; ++q) {
      const auto rows = static_cast<Eigen::Index>(nodes[p].size());
      const auto cols = static_cast<Eigen::Index>(nodes[q].size());
      Eigen::MatrixXd block(rows, cols);
      const double d = times[p] - times[q];
      if (d == 0) {
        for (Eigen::Index i = 0; i < rows; ++i) {
          for (Eigen::Index j = 0; j < cols; ++j) block(i, j) = airy_kernel(nodes[p][i], nodes[q][j]);
        }
      } else {
        Eigen::VectorXd w(nu);
        for (Eigen::Index r = 0; r < nu; ++r) w(r) = urule.weights[r] * std::exp(-urule.nodes[r] * d);
        block = shifted[p] * w.asDiagonal() * shifted[q].transpose();
        if (d < 0) {
          for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) block(i, j) -= gaussian_term(-d, nodes[p][i], nodes[q][j]);
          }
        }
      }
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          block(i, j) *= std::sqrt(weights[p][i] * weights[q][j]);
        }
      }
      m.block(static_cast<Eigen::Index>(start[p]), static_cast<Eigen::Index>(start[q]), rows, cols) = -block;
    }
  }
  m.diagonal().array() += 1.0;
  return m;
}

double fredholm_determinant(const KernelDiscretization& k) {
  return k.operator_matrix().partialPivLu().determinant();
}

}  // namespace cornerlab
