#include "cornerlab/edge_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cornerlab/io.hpp"

namespace cornerlab {

ScalingMap::ScalingMap(double m) : m_(m) {
  if (!(m >= 8)) throw std::invalid_argument("scaling map: M must be at least 8");
}

double ScalingMap::tau(double s) const { return s * std::cbrt(1.0 / m_); }

double ScalingMap::n_real(double t) const { return m_ * (1 + 2 * t * std::cbrt(1.0 / m_)); }

double ScalingMap::t_of_n(double n) const { return (n / m_ - 1) * std::cbrt(m_) / 2; }

double ScalingMap::s_of_tau(double tau) const { return tau * std::cbrt(m_); }

double ScalingMap::t_step() const { return 1 / (2 * std::cbrt(m_ * m_)); }

double ScalingMap::scale(double xi, double n) const {
  return std::pow(m_, 1.0 / 6) * (xi - 2 * std::sqrt(n));
}

ScaledPoint scaling_maps(double m, double s, double t) {
  const ScalingMap map(m);
  return {map.tau(s), map.n_real(t)};
}

std::vector<double> scale_spectrum(double m, const SpectrumFrame& frame) {
  if (frame.n < 1 || frame.eigenvalues.size() != frame.n) {
    throw std::invalid_argument("scale_spectrum: incomplete frame");
  }
  const ScalingMap map(m);
  std::vector<double> out;
  out.reserve(frame.n);
  for (double xi : frame.eigenvalues) out.push_back(map.scale(xi, static_cast<double>(frame.n)));
  return out;
}

std::vector<double> scale_mirrored_spectrum(double m, const SpectrumFrame& frame) {
  return scale_spectrum(m, frame.mirrored());
}

double ScaledLineEnsemble::node(std::size_t is, std::size_t it, std::size_t j) const {
  return values[(is * t_grid.size() + it) * j_max + (j - 1)];
}

ScaledLineEnsemble build_line_ensemble(const CornerGrid& grid, double m, std::size_t j_max) {
  const ScalingMap map(m);
  if (grid.tau_values.empty() || grid.n_values.empty()) {
    throw std::invalid_argument("line ensemble: empty grid");
  }
  if (j_max < 1) throw std::invalid_argument("line ensemble: j_max must be positive");
  const std::size_t smallest = *std::min_element(grid.n_values.begin(), grid.n_values.end());
  if (j_max > smallest) {
    throw std::invalid_argument("line ensemble: j_max exceeds the smallest corner size");
  }
  if (!std::is_sorted(grid.tau_values.begin(), grid.tau_values.end()) ||
      std::adjacent_find(grid.n_values.begin(), grid.n_values.end(),
                         [](std::size_t a, std::size_t b) { return a >= b; }) != grid.n_values.end()) {
    throw std::invalid_argument("line ensemble: grid axes must be ascending");
  }

  ScaledLineEnsemble out;
  out.m = m;
  out.j_max = j_max;
  for (double tau : grid.tau_values) out.s_grid.push_back(map.s_of_tau(tau));
  out.n_grid = grid.n_values;
  for (std::size_t n : grid.n_values) out.t_grid.push_back(map.t_of_n(static_cast<double>(n)));
  for (std::size_t b = 1; b < out.t_grid.size(); ++b) {
    const double steps = static_cast<double>(out.n_grid[b] - out.n_grid[b - 1]);
    const double dt = out.t_grid[b] - out.t_grid[b - 1];
    if (std::abs(dt - steps * map.t_step()) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::logic_error("line ensemble: t spacing inconsistent with integer N");
    }
  }

  out.values.resize(out.s_grid.size() * out.t_grid.size() * j_max);
  for (std::size_t a = 0; a < out.s_grid.size(); ++a) {
    for (std::size_t b = 0; b < out.t_grid.size(); ++b) {
      const auto it = grid.frames.find({a, b});
      if (it == grid.frames.end()) throw std::invalid_argument("line ensemble: incomplete grid");
      const auto lambda = scale_spectrum(m, it->second);
      std::copy_n(lambda.begin(), j_max, out.values.begin() + (a * out.t_grid.size() + b) * j_max);
    }
  }
  return out;
}

double evaluate_line(const ScaledLineEnsemble& ensemble, std::size_t j, double s, double t) {
  if (j < 1 || j > ensemble.j_max) throw std::out_of_range("evaluate_line: line index out of range");
  const auto& sg = ensemble.s_grid;
  const auto& tg = ensemble.t_grid;
  if (sg.empty() || tg.empty()) throw std::invalid_argument("evaluate_line: empty ensemble");

  // Nearest s node; ties go to the lower node.
  std::size_t is = 0;
  for (std::size_t a = 1; a < sg.size(); ++a) {
    if (std::abs(sg[a] - s) < std::abs(sg[is] - s)) is = a;
  }

  if (t <= tg.front()) return ensemble.node(is, 0, j);
  if (t >= tg.back()) return ensemble.node(is, tg.size() - 1, j);
  const auto upper = static_cast<std::size_t>(std::upper_bound(tg.begin(), tg.end(), t) - tg.begin());
  const std::size_t lower = upper - 1;
  const double w = (t - tg[lower]) / (tg[upper] - tg[lower]);
  return (1 - w) * ensemble.node(is, lower, j) + w * ensemble.node(is, upper, j);
}

void write_ensemble_csv(std::ostream& out, const ScaledLineEnsemble& ensemble, bool header) {
  if (header) out << "M,s,t,j,lambda\n";
  const std::string m = format_double(ensemble.m);
  for (std::size_t a = 0; a < ensemble.s_grid.size(); ++a) {
    for (std::size_t b = 0; b < ensemble.t_grid.size(); ++b) {
      for (std::size_t j = 1; j <= ensemble.j_max; ++j) {
        out << m << ',' << format_double(ensemble.s_grid[a]) << ','
            << format_double(ensemble.t_grid[b]) << ',' << j << ','
            << format_double(ensemble.node(a, b, j)) << '\n';
      }
    }
  }
}

}  // namespace cornerlab
