#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cornerlab/entry_process.hpp"

namespace cornerlab {

/// Raised when a matrix handed to the eigensolver is not Hermitian.
class NonHermitianError : public std::invalid_argument {
 public:
  explicit NonHermitianError(double asymmetry);
  double asymmetry() const { return asymmetry_; }

 private:
  double asymmetry_;
};

/// Sorted spectrum of one corner H^{(tau), (N)}.
struct SpectrumFrame {
  double tau = 0;
  std::size_t n = 0;
  std::vector<double> eigenvalues;  // descending

  /// Spectrum of -H: negated and reversed.
  SpectrumFrame mirrored() const;
  /// max |eigenvalue|, i.e. the operator norm of the corner.
  double spectral_norm() const;
};

/// Frames for every (tau, N) on a Cartesian grid. Frames at one tau come
/// from a single snapshot of size max(n_values).
struct CornerGrid {
  std::vector<double> tau_values;
  std::vector<std::size_t> n_values;
  std::uint64_t seed = 0;
  std::map<std::pair<std::size_t, std::size_t>, SpectrumFrame> frames;  // (tau idx, n idx)

  const SpectrumFrame& frame(std::size_t tau_index, std::size_t n_index) const;
};

inline constexpr double kHermitianTolerance = 1e-12;

/// Descending real spectrum of a Hermitian matrix (Householder
/// tridiagonalization followed by implicit QL/QR sweeps, no eigenvectors).
/// Real input (all imaginary parts zero) takes the real symmetric path.
std::vector<double> eigenvalues(const HermitianMatrix& h);

struct EigenPairs {
  std::vector<double> values;  // descending
  HermitianMatrix vectors;     // column k belongs to values[k]
};

/// Eigenvalues together with eigenvectors; the slow path used for residual
/// verification.
EigenPairs eigen_pairs(const HermitianMatrix& h);

/// Spectra of the leading corners of one snapshot at time tau.
std::vector<SpectrumFrame> corner_spectra(const MatrixPath& path, double tau,
                                          std::span<const std::size_t> n_values);

/// Spectra of the leading corners of an explicit matrix.
std::vector<SpectrumFrame> corner_spectra(const HermitianMatrix& h, double tau,
                                          std::span<const std::size_t> n_values);

CornerGrid build_corner_grid(const MatrixPath& path, std::span<const double> tau_values,
                             std::span<const std::size_t> n_values, unsigned threads = 1);

struct InterlacingReport {
  bool pass = true;
  double worst_violation = 0;  // largest amount by which an inequality fails (0 if none)
  double tolerance = 0;
};

inline constexpr double kInterlacingRelativeTolerance = 1e-8;

/// Cauchy interlacing between the spectra of nested corners of sizes n, n+1.
InterlacingReport check_interlacing(const SpectrumFrame& lower, const SpectrumFrame& upper);

/// CSV rows tau,n,j,xi with j = 1 for the largest eigenvalue.
void write_spectrum_csv(std::ostream& out, std::span<const SpectrumFrame> frames,
                        bool header = true);

}  // namespace cornerlab
