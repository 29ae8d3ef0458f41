#pragma once

#include <cstddef>
#include <vector>

namespace cornerlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(std::size_t n);

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// n-point Gauss-Laguerre rule for the weight e^{-u} on (0, inf).
QuadratureRule gauss_laguerre(std::size_t n);

}  // namespace cornerlab
