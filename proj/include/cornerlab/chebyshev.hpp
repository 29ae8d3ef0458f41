#pragma once

// Chebyshev polynomials of the second kind and the non-backtracking basis
//   P_n^{(N)}(l) = U_n(l / (2 sqrt(N-2))) - U_{n-2}(l / (2 sqrt(N-2))) / (N-2),
// with U_{-2} = U_{-1} = 0.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cornerlab/corner_spectra.hpp"
#include "cornerlab/paths.hpp"

namespace cornerlab {

/// Floating type with enough digits to reproduce l^m from its P-basis
/// expansion; the expansion cancels terms of size (2 sqrt(N-2) + 3)^m.
using PreciseReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

/// U_n(x) by the three-term recurrence; n >= -2.
template <class Real>
Real chebyshev_U(int n, const Real& x) {
  if (n < -2) throw std::invalid_argument("chebyshev_U: n must be at least -2");
  if (n < 0) return Real(0);
  Real prev(0), cur(1);
  for (int k = 0; k < n; ++k) {
    Real next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// U_0(x) ... U_n(x).
template <class Real>
std::vector<Real> chebyshev_U_table(int n, const Real& x) {
  std::vector<Real> u(static_cast<std::size_t>(n + 1));
  if (n < 0) return u;
  u[0] = 1;
  if (n >= 1) u[1] = 2 * x;
  for (int k = 2; k <= n; ++k) u[k] = 2 * x * u[k - 1] - u[k - 2];
  return u;
}

template <class Real>
Real p_eval(int n, std::size_t size, const Real& lambda) {
  if (size < 3) throw std::invalid_argument("P_n^{(N)}: N must be at least 3");
  if (n < 0) throw std::invalid_argument("P_n^{(N)}: n must be non-negative");
  using std::sqrt;
  const Real d(static_cast<double>(size - 2));
  const Real x = lambda / (2 * sqrt(d));
  return chebyshev_U(n, x) - chebyshev_U(n - 2, x) / d;
}

/// P_0 ... P_n at one point.
template <class Real>
std::vector<Real> p_table(int n, std::size_t size, const Real& lambda) {
  if (size < 3) throw std::invalid_argument("P_n^{(N)}: N must be at least 3");
  using std::sqrt;
  const Real d(static_cast<double>(size - 2));
  const auto u = chebyshev_U_table(n, Real(lambda / (2 * sqrt(d))));
  std::vector<Real> p(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) p[k] = k >= 2 ? Real(u[k] - u[k - 2] / d) : u[k];
  return p;
}

/// sum_j P_n^{(N)}(xi_j) with N = frame.n.
double trace_p_spectral(const SpectrumFrame& frame, int n);

/// (N-2)^{-n/2} sum over closed loopless non-backtracking paths of
/// prod H(u_i, u_{i+1}). H must be unimodular: zero diagonal, unit-modulus
/// off-diagonal entries (tolerance 1e-12).
double trace_p_paths(const HermitianMatrix& h, int n,
                     BacktrackConvention convention = BacktrackConvention::sequence);

/// Coefficients of l^m in the basis {P_n^{(N)}}: l^m = sum_n c_n P_n^{(N)}(l).
template <class Real>
struct BasicPBasisExpansion {
  std::size_t size = 0;
  int target_power = 0;
  std::vector<Real> coefficients;  // index n; zero for n of the wrong parity

  Real evaluate(const Real& lambda) const {
    const auto p = p_table(target_power, size, lambda);
    Real sum(0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) sum += coefficients[k] * p[k];
    return sum;
  }
};

using PBasisExpansion = BasicPBasisExpansion<double>;

namespace detail {

// log binom(a, b) as a sum of logs.
template <class Real>
Real log_binomial(int a, int b) {
  using std::log;
  Real out(0);
  for (int i = 1; i <= b; ++i) out += log(Real(a - b + i) / Real(i));
  return out;
}

// log of the coefficient of U_j(x) in x^m:
//   x^{2q}   = (2q+1)^{-1} 2^{-2q}   sum_{r=0}^{q} (2r+1) C(2q+1, q-r) U_{2r}(x),
//   x^{2q-1} = (2q)^{-1}   2^{-2q+1} sum_{r=1}^{q} 2r     C(2q,   q-r) U_{2r-1}(x).
template <class Real>
Real log_snyder_coefficient(int m, int j) {
  using std::log;
  const Real log2 = log(Real(2));
  if (m % 2 == 0) {
    const int q = m / 2, r = j / 2;
    return log(Real(2 * r + 1)) + log_binomial<Real>(2 * q + 1, q - r) - log(Real(2 * q + 1)) -
           Real(2 * q) * log2;
  }
  const int q = (m + 1) / 2, r = (j + 1) / 2;
  return log(Real(2 * r)) + log_binomial<Real>(2 * q, q - r) - log(Real(2 * q)) -
         Real(2 * q - 1) * log2;
}

}  // namespace detail

/// Chebyshev-U expansion of x^m followed by the telescoping
///   U_n = P_n + P_{n-2}/(N-2) + P_{n-4}/(N-2)^2 + ...,
/// rescaled by (2 sqrt(N-2))^m. All terms are positive and accumulated from
/// their logarithms.
template <class Real>
BasicPBasisExpansion<Real> power_in_p_basis(int m, std::size_t size) {
  if (m < 0 || m > 200) throw std::invalid_argument("power_in_p_basis: m must lie in [0, 200]");
  if (size < 3) throw std::invalid_argument("power_in_p_basis: N must be at least 3");
  using std::exp;
  using std::log;
  BasicPBasisExpansion<Real> out;
  out.size = size;
  out.target_power = m;
  out.coefficients.assign(static_cast<std::size_t>(m + 1), Real(0));
  const Real log_d = log(Real(static_cast<double>(size - 2)));
  const Real log_scale = Real(m) * (log(Real(2)) + log_d / 2);
  for (int j = m % 2; j <= m; j += 2) {
    const Real log_u = log_scale + detail::log_snyder_coefficient<Real>(m, j);
    for (int n = j; n >= 0; n -= 2) {
      out.coefficients[n] += exp(log_u - Real((j - n) / 2) * log_d);
    }
  }
  return out;
}

}  // namespace cornerlab
