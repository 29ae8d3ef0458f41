#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "cornerlab/corner_spectra.hpp"

namespace cornerlab {

/// Edge scaling with large parameter M:
///   tau(s) = s M^{-1/3},  N(t) = M (1 + 2 t M^{-1/3}),
///   lambda_j = M^{1/6} (xi_j - 2 sqrt(N)).
class ScalingMap {
 public:
  explicit ScalingMap(double m);

  double m() const { return m_; }
  double tau(double s) const;
  double n_real(double t) const;
  /// Inverse of n_real.
  double t_of_n(double n) const;
  /// Inverse of tau.
  double s_of_tau(double tau) const;
  /// Spacing in t between consecutive integer N, 1 / (2 M^{2/3}).
  double t_step() const;
  double scale(double xi, double n) const;

 private:
  double m_;
};

struct ScaledPoint {
  double tau;
  double n_real;
};

ScaledPoint scaling_maps(double m, double s, double t);

/// lambda_j for every eigenvalue of the frame, descending.
std::vector<double> scale_spectrum(double m, const SpectrumFrame& frame);

/// lambda~_j: the scaled spectrum of -H, i.e. M^{1/6}(-xi_{N-j+1} - 2 sqrt(N)).
std::vector<double> scale_mirrored_spectrum(double m, const SpectrumFrame& frame);

struct ScaledLineEnsemble {
  double m = 0;
  std::size_t j_max = 0;
  std::vector<double> s_grid;       // ascending
  std::vector<double> t_grid;       // ascending, each maps to an integer N
  std::vector<std::size_t> n_grid;  // N at each t node
  // values[(is * t_grid.size() + it) * j_max + (j - 1)]
  std::vector<double> values;

  double node(std::size_t is, std::size_t it, std::size_t j) const;
};

inline constexpr std::size_t kDefaultLineCount = 10;

/// Rescales every frame of the grid. s and t nodes are derived from the
/// grid's tau and N values.
ScaledLineEnsemble build_line_ensemble(const CornerGrid& grid, double m,
                                       std::size_t j_max = kDefaultLineCount);

/// Piecewise linear in t between nodes, nearest node in s, constant outside
/// the grid rectangle.
double evaluate_line(const ScaledLineEnsemble& ensemble, std::size_t j, double s, double t);

/// CSV columns M,s,t,j,lambda; one row per node and line.
void write_ensemble_csv(std::ostream& out, const ScaledLineEnsemble& ensemble, bool header = true);

}  // namespace cornerlab
