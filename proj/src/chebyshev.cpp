#include "cornerlab/chebyshev.hpp"

#include <cmath>

namespace cornerlab {

namespace {

constexpr double kUnimodularTolerance = 1e-12;

void require_unimodular(const HermitianMatrix& h) {
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      const double deviation = i == j ? std::abs(h(i, j)) : std::abs(std::abs(h(i, j)) - 1.0);
      if (deviation > kUnimodularTolerance) {
        throw std::invalid_argument("trace_p_paths: matrix is not unimodular");
      }
    }
  }
}

}  // namespace

double trace_p_spectral(const SpectrumFrame& frame, int n) {
  if (frame.eigenvalues.size() != frame.n) throw std::invalid_argument("trace_p_spectral: incomplete frame");
  double sum = 0;
  for (double xi : frame.eigenvalues) sum += p_eval(n, frame.n, xi);
  return sum;
}

double trace_p_paths(const HermitianMatrix& h, int n, BacktrackConvention convention) {
  if (h.rows() != h.cols()) throw std::invalid_argument("trace_p_paths: matrix is not square");
  if (h.rows() < 3) throw std::invalid_argument("trace_p_paths: N must be at least 3");
  if (n < 0) throw std::invalid_argument("trace_p_paths: n must be non-negative");
  require_unimodular(h);
  const auto size = static_cast<std::size_t>(h.rows());
  if (n == 0) return static_cast<double>(size);

  Complex sum = 0;
  enumerate_nb_loopless(
      size, static_cast<std::size_t>(n),
      [&](std::span<const std::size_t> u) {
        Complex product = 1;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
          product *= h(static_cast<Eigen::Index>(u[i] - 1), static_cast<Eigen::Index>(u[i + 1] - 1));
        }
        sum += product;
      },
      convention);
  return sum.real() / std::pow(static_cast<double>(size - 2), n / 2.0);
}

}  // namespace cornerlab
