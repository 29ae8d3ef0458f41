#include "cornerlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cornerlab {

namespace {

// Nodes and weights from the symmetric tridiagonal Jacobi matrix of the
// orthogonal polynomial family; mu0 is the total mass of the weight.
QuadratureRule golub_welsch(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& offdiagonal,
                            double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, offdiagonal, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("quadrature: eigensolver failed");
  QuadratureRule rule;
  const auto n = diagonal.size();
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd off(std::max<Eigen::Index>(size - 1, 0));
  for (Eigen::Index i = 1; i < size; ++i) {
    const double k = static_cast<double>(i);
    off(i - 1) = k / std::sqrt(4 * k * k - 1);
  }
  auto rule = golub_welsch(diagonal, off, 2.0);
  // Symmetrize to remove eigensolver noise.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  auto rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureRule gauss_laguerre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diagonal(size);
  Eigen::VectorXd off(std::max<Eigen::Index>(size - 1, 0));
  for (Eigen::Index i = 0; i < size; ++i) diagonal(i) = 2.0 * static_cast<double>(i) + 1;
  for (Eigen::Index i = 1; i < size; ++i) off(i - 1) = static_cast<double>(i);
  return golub_welsch(diagonal, off, 1.0);
}

}  // namespace cornerlab
