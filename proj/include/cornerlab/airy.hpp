#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cornerlab {

inline constexpr double kAiryMin = -15;
inline constexpr double kAiryMax = 10;

/// Ai(x) and Ai'(x) for x in [-15, 10]; std::out_of_range otherwise.
double airy_ai(double x);
double airy_ai_prime(double x);

/// A(a, b) = int_0^inf Ai(a + u) Ai(b + u) du, via
///   (Ai(a) Ai'(b) - Ai'(a) Ai(b)) / (a - b)   off the diagonal,
///   Ai'(a)^2 - a Ai(a)^2                      on it,
/// and a second-order expansion about (a + b)/2 when |a - b| < 1e-3.
double airy_kernel(double a, double b);

/// Extended Airy kernel A(s1, a; s2, b):
///   s1 >= s2:  int_0^inf  e^{-u (s1 - s2)} Ai(a + u) Ai(b + u) du,
///   s1 <  s2: -int_-inf^0 e^{-u (s1 - s2)} Ai(a + u) Ai(b + u) du.
/// The second branch is computed from
///   int_R e^{u z} Ai(a + u) Ai(b + u) du
///     = (4 pi z)^{-1/2} exp(z^3/12 - (a + b) z / 2 - (a - b)^2 / (4 z)),  z > 0,
/// which leaves only a rapidly decaying integral over (0, inf).
/// Throws std::runtime_error when the quadrature misses its tolerance.
double extended_airy_kernel(double s1, double a, double s2, double b);

/// The s1 < s2 branch by direct quadrature over [-U, 0], with U chosen so
/// that the envelope |u|^{-1/2} e^{-|s1 - s2| |u|} drops below 1e-12.
double extended_airy_kernel_direct(double s1, double a, double s2, double b);

/// Nystrom discretization of an extended Airy kernel restricted to
/// (x_p, inf) at times s_p. Each interval is truncated at max(x_p, 0) + 14,
/// where the kernel is below 1e-30, and carries a Gauss-Legendre rule.
struct KernelDiscretization {
  std::vector<double> times;
  std::vector<double> cutoffs;
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> weights;

  std::size_t size() const;
  /// I - sqrt(W) K sqrt(W).
  Eigen::MatrixXd operator_matrix() const;
};

inline constexpr double kAiryTruncation = 14;
inline constexpr std::size_t kDefaultFredholmNodes = 80;

KernelDiscretization discretize_kernel(std::span<const double> times, std::span<const double> cutoffs,
                                       std::size_t nodes = kDefaultFredholmNodes);

double fredholm_determinant(const KernelDiscretization& k);

}  // namespace cornerlab
