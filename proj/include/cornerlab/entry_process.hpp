#pragma once

// Time-dependent Hermitian entry fields H^{(tau)}(i, j), -1 <= tau <= 1.
//
// Three kinds of entry processes are provided:
//   gaussian-ou           stationary Ornstein-Uhlenbeck entries (Dyson Brownian
//                         motion), covariance exp(-|tau - tau'|);
//   resampled-gaussian    Gaussian entries redrawn at the events of a rate-1
//                         Poisson clock;
//   resampled-unimodular  unit-modulus entries (random sign for beta = 1,
//                         uniform phase for beta = 2) with zero diagonal,
//                         redrawn at the events of a rate-1 Poisson clock.
//
// Off-diagonal entries have E|H|^2 = 1 and E H^2 = 1 (beta = 1) or 0 (beta = 2).
// Gaussian diagonals have variance 2 (beta = 1) and 1 (beta = 2).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace cornerlab {

using Complex = std::complex<double>;
using HermitianMatrix = Eigen::MatrixXcd;

enum class SymmetryClass : int { orthogonal = 1, unitary = 2 };

enum class EntryKind { gaussian_ou, resampled_gaussian, resampled_unimodular };

inline int beta_of(SymmetryClass s) { return static_cast<int>(s); }
SymmetryClass symmetry_from_beta(int beta);

std::string_view to_string(EntryKind kind);
EntryKind entry_kind_from_string(std::string_view name);

struct EntryProcessSpec {
  EntryKind kind = EntryKind::gaussian_ou;
  SymmetryClass beta = SymmetryClass::orthogonal;
  double resample_intensity = 1.0;
  bool zero_diagonal = false;
  // Subgaussian constant of the entry law; informational only.
  double subgaussian_c0 = 1.0;

  /// Spec with the canonical flags for a kind (zero diagonal for unimodular).
  static EntryProcessSpec make(EntryKind kind, SymmetryClass beta);

  /// Throws std::invalid_argument if the invariants are violated.
  void validate() const;

  bool resampled() const { return kind != EntryKind::gaussian_ou; }
};

bool operator==(const EntryProcessSpec& a, const EntryProcessSpec& b);

/// One realization of the entry field, addressed by seed. Immutable and
/// safe to share between threads; every query is a pure function of
/// (seed, i, j, tau).
class MatrixPath {
 public:
  MatrixPath(EntryProcessSpec spec, std::uint64_t seed);

  const EntryProcessSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

  /// H^{(tau)}(i, j) with 1-based indices.
  Complex value(std::size_t i, std::size_t j, double tau) const;

  /// Values of one entry at sorted times; one clock realization is shared
  /// across all requested times.
  std::vector<Complex> sample(std::size_t i, std::size_t j, std::span<const double> times) const;

 private:
  // Upper-triangular entry (i <= j, 0-based) at sorted times.
  void upper_entry(std::size_t i, std::size_t j, std::span<const double> times,
                   std::span<Complex> out) const;

  EntryProcessSpec spec_;
  std::uint64_t seed_;
};

/// sample_entry_path: values of entry (i, j) at the given sorted times.
/// Rejects unsorted times, |tau| > 1 and indices < 1.
std::vector<Complex> sample_entry_path(const MatrixPath& path, std::size_t i, std::size_t j,
                                       std::span<const double> times);

/// The leading N x N corner of H^{(tau)}.
HermitianMatrix hermitian_snapshot(const MatrixPath& path, double tau, std::size_t n);

/// Snapshots of the same N x N corner at several sorted times, realizing each
/// entry's clock once.
std::vector<HermitianMatrix> hermitian_snapshots(const MatrixPath& path,
                                                 std::span<const double> taus, std::size_t n);

struct CovarianceReport {
  double delta_tau = 0;
  std::size_t trials = 0;
  // E Re[H^{(0)} conj(H^{(dt)})]
  double empirical = 0;
  double model = 0;
  double stderr_ = 0;
  // E H^{(0)} H^{(dt)}
  Complex empirical_square{};
  double model_square = 0;
  double stderr_square = 0;  // max of the real/imaginary standard errors
};

/// Monte Carlo estimate of the pair covariances of entry (1, 2) at times
/// -dt/2 and +dt/2 over independent seeds derived from `seed`.
CovarianceReport covariance_check(const EntryProcessSpec& spec, double delta_tau,
                                  std::size_t trials, std::uint64_t seed);

// JSON form {kind, beta, zero_diagonal[, seed]}.
nlohmann::json to_json(const EntryProcessSpec& spec);
EntryProcessSpec entry_spec_from_json(const nlohmann::json& j);

}  // namespace cornerlab
