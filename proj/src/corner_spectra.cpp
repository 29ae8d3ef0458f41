#include "cornerlab/corner_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "cornerlab/io.hpp"
#include "cornerlab/parallel.hpp"

namespace cornerlab {

namespace {

double asymmetry(const HermitianMatrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_real(const HermitianMatrix& h) {
  return (h.imag().array() == 0.0).all();
}

void check_square_hermitian(const HermitianMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
  if (h.rows() == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  const double a = asymmetry(h);
  if (!(a <= kHermitianTolerance)) throw NonHermitianError(a);
}

std::vector<double> descending(const Eigen::VectorXd& ascending) {
  std::vector<double> out(ascending.data(), ascending.data() + ascending.size());
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

NonHermitianError::NonHermitianError(double asymmetry)
    : std::invalid_argument("matrix is not Hermitian: max |H - H*| = " + format_double(asymmetry)),
      asymmetry_(asymmetry) {}

SpectrumFrame SpectrumFrame::mirrored() const {
  SpectrumFrame out{tau, n, {}};
  out.eigenvalues.reserve(eigenvalues.size());
  for (auto it = eigenvalues.rbegin(); it != eigenvalues.rend(); ++it) out.eigenvalues.push_back(-*it);
  return out;
}

double SpectrumFrame::spectral_norm() const {
  if (eigenvalues.empty()) return 0;
  return std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
}

const SpectrumFrame& CornerGrid::frame(std::size_t tau_index, std::size_t n_index) const {
  const auto it = frames.find({tau_index, n_index});
  if (it == frames.end()) throw std::out_of_range("corner grid: missing frame");
  return it->second;
}

std::vector<double> eigenvalues(const HermitianMatrix& h) {
  check_square_hermitian(h);
  if (is_real(h)) {
    const Eigen::MatrixXd real = h.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: no convergence");
    return descending(solver.eigenvalues());
  }
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: no convergence");
  return descending(solver.eigenvalues());
}

EigenPairs eigen_pairs(const HermitianMatrix& h) {
  check_square_hermitian(h);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_pairs: no convergence");
  EigenPairs out;
  out.values = descending(solver.eigenvalues());
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

std::vector<SpectrumFrame> corner_spectra(const HermitianMatrix& h, double tau,
                                          std::span<const std::size_t> n_values) {
  if (!std::is_sorted(n_values.begin(), n_values.end())) {
    throw std::invalid_argument("corner_spectra: corner sizes must be sorted");
  }
  std::vector<SpectrumFrame> frames;
  frames.reserve(n_values.size());
  for (std::size_t n : n_values) {
    if (n < 1 || n > static_cast<std::size_t>(h.rows())) {
      throw std::invalid_argument("corner_spectra: corner size out of range");
    }
    const auto size = static_cast<Eigen::Index>(n);
    frames.push_back({tau, n, eigenvalues(h.topLeftCorner(size, size))});
  }
  return frames;
}

std::vector<SpectrumFrame> corner_spectra(const MatrixPath& path, double tau,
                                          std::span<const std::size_t> n_values) {
  if (n_values.empty()) return {};
  if (!std::is_sorted(n_values.begin(), n_values.end())) {
    throw std::invalid_argument("corner_spectra: corner sizes must be sorted");
  }
  const auto snapshot = hermitian_snapshot(path, tau, n_values.back());
  return corner_spectra(snapshot, tau, n_values);
}

CornerGrid build_corner_grid(const MatrixPath& path, std::span<const double> tau_values,
                             std::span<const std::size_t> n_values, unsigned threads) {
  if (tau_values.empty() || n_values.empty()) {
    throw std::invalid_argument("corner grid: empty tau or size list");
  }
  if (!std::is_sorted(n_values.begin(), n_values.end())) {
    throw std::invalid_argument("corner grid: corner sizes must be sorted");
  }
  CornerGrid grid;
  grid.tau_values.assign(tau_values.begin(), tau_values.end());
  grid.n_values.assign(n_values.begin(), n_values.end());
  grid.seed = path.seed();

  // Parallel over (tau, N) cells; each tau's snapshot is drawn once.
  std::vector<HermitianMatrix> snapshots(tau_values.size());
  parallel_for(tau_values.size(), threads, [&](std::size_t a) {
    snapshots[a] = hermitian_snapshot(path, tau_values[a], n_values.back());
  });
  const std::size_t cells = tau_values.size() * n_values.size();
  std::vector<SpectrumFrame> frames(cells);
  parallel_for(cells, threads, [&](std::size_t c) {
    const std::size_t a = c / n_values.size();
    const std::size_t b = c % n_values.size();
    const auto size = static_cast<Eigen::Index>(n_values[b]);
    frames[c] = {tau_values[a], n_values[b], eigenvalues(snapshots[a].topLeftCorner(size, size))};
  });
  for (std::size_t c = 0; c < cells; ++c) {
    grid.frames.emplace(std::pair{c / n_values.size(), c % n_values.size()}, std::move(frames[c]));
  }
  return grid;
}

InterlacingReport check_interlacing(const SpectrumFrame& lower, const SpectrumFrame& upper) {
  if (upper.n != lower.n + 1 || upper.eigenvalues.size() != upper.n ||
      lower.eigenvalues.size() != lower.n) {
    throw std::invalid_argument("check_interlacing: expected corner sizes n and n + 1");
  }
  InterlacingReport report;
  report.tolerance = kInterlacingRelativeTolerance * std::max(upper.spectral_norm(), 1e-300);
  const auto& lo = lower.eigenvalues;
  const auto& up = upper.eigenvalues;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    report.worst_violation = std::max(report.worst_violation, lo[j] - up[j]);
    report.worst_violation = std::max(report.worst_violation, up[j + 1] - lo[j]);
  }
  report.pass = report.worst_violation <= report.tolerance;
  return report;
}

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumFrame> frames, bool header) {
  if (header) out << "tau,n,j,xi\n";
  for (const auto& frame : frames) {
    for (std::size_t j = 0; j < frame.eigenvalues.size(); ++j) {
      out << format_double(frame.tau) << ',' << frame.n << ',' << (j + 1) << ','
          << format_double(frame.eigenvalues[j]) << '\n';
    }
  }
}

}  // namespace cornerlab
