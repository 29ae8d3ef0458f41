#include "cornerlab/tracy_widom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/numeric/odeint.hpp>

#include "cornerlab/io.hpp"
#include "cornerlab/parallel.hpp"

namespace cornerlab {

std::string_view to_string(TWMethod method) {
  return method == TWMethod::fredholm ? "fredholm" : "painleve";
}

std::vector<double> tw_default_grid() {
  std::vector<double> grid;
  const auto steps = static_cast<int>(std::lround((kTWGridMax - kTWGridMin) / kTWGridStep));
  for (int i = 0; i <= steps; ++i) grid.push_back(kTWGridMin + i * kTWGridStep);
  return grid;
}

double tw_cdf_fredholm(double x, std::size_t nodes) {
  if (!(x >= kTWGridMin && x <= kTWGridMax)) throw std::out_of_range("tw_cdf_fredholm: x outside [-10, 6]");
  const double times[1] = {0};
  const double cutoffs[1] = {x};
  return fredholm_determinant(discretize_kernel(times, cutoffs, nodes));
}

TWTable tw_table_fredholm(std::span<const double> grid, std::size_t nodes, unsigned threads) {
  TWTable table{2, TWMethod::fredholm, {grid.begin(), grid.end()}, std::vector<double>(grid.size())};
  parallel_for(grid.size(), threads, [&](std::size_t i) { table.f[i] = tw_cdf_fredholm(grid[i], nodes); });
  return table;
}

namespace {

using Real = long double;
// q, q', I1 = int_x^inf (t - x) q^2, I0 = int_x^inf q^2, J = int_x^inf q
using State = std::array<Real, 5>;

constexpr Real kStart = 8;

struct PainleveSystem {
  void operator()(const State& y, State& dy, Real x) const {
    dy[0] = y[1];
    dy[1] = x * y[0] + 2 * y[0] * y[0] * y[0];
    dy[2] = -y[3];
    dy[3] = -y[0] * y[0];
    dy[4] = -y[0];
  }
};

State initial_state() {
  const Real a = boost::math::airy_ai(kStart);
  const Real ap = boost::math::airy_ai_prime(kStart);
  const Real x = kStart;
  State y;
  y[0] = a;
  y[1] = ap;
  y[2] = (2 * x * x * a * a - 2 * x * ap * ap - a * ap) / 3;
  y[3] = ap * ap - x * a * a;
  auto f = [](Real t) { return boost::math::airy_ai(t); };
  y[4] = boost::math::quadrature::gauss_kronrod<Real, 61>::integrate(f, kStart, Real(40), 15, Real(1e-18));
  return y;
}

// Integrates from x = 8 down to each requested point (descending order).
std::vector<State> integrate_descending(std::span<const double> points) {
  namespace ode = boost::numeric::odeint;
  std::vector<Real> times{kStart};
  for (double p : points) times.push_back(p);
  std::vector<State> out;
  State y = initial_state();
  auto stepper = ode::make_dense_output(Real(1e-18), Real(1e-16), ode::runge_kutta_dopri5<State, Real>());
  auto observe = [&](const State& s, Real x) {
    if (x == kStart) return;
    if (!std::isfinite(static_cast<double>(s[0])) || s[0] < 0 || s[0] > 1e3) {
      throw std::runtime_error("Painleve integration left the Hastings-McLeod branch near x = " +
                               std::to_string(static_cast<double>(x)));
    }
    out.push_back(s);
  };
  ode::integrate_times(stepper, PainleveSystem{}, y, times.begin(), times.end(), Real(-1e-3), observe);
  return out;
}

// Evaluates a functional of the state at arbitrary grid points: points at
// or above the start use the Airy asymptotics.
template <class Map>
std::vector<double> painleve_values(std::span<const double> grid, Map&& map) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < kStart) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });
  std::vector<double> descending;
  for (std::size_t i : order) descending.push_back(grid[i]);
  std::vector<State> states;
  if (!descending.empty()) states = integrate_descending(descending);

  std::vector<double> out(grid.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = map(states[r]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= kStart) {
      const Real x = grid[i];
      const Real a = boost::math::airy_ai(x), ap = boost::math::airy_ai_prime(x);
      State s{a, ap, (2 * x * x * a * a - 2 * x * ap * ap - a * ap) / 3, ap * ap - x * a * a, 0};
      out[i] = map(s);
    }
  }
  return out;
}

}  // namespace

std::vector<PainleveSample> hastings_mcleod(std::span<const double> grid) {
  const auto q = painleve_values(grid, [](const State& s) { return static_cast<double>(s[0]); });
  std::vector<PainleveSample> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back({grid[i], q[i]});
  return out;
}

TWTable tw_cdf_painleve(int beta, std::span<const double> grid) {
  if (beta != 1 && beta != 2) throw std::invalid_argument("tw_cdf_painleve: beta must be 1 or 2");
  TWTable table{beta, TWMethod::painleve, {grid.begin(), grid.end()}, {}};
  table.f = painleve_values(grid, [beta](const State& s) {
    const Real f2 = std::exp(-s[2]);
    return static_cast<double>(beta == 2 ? f2 : std::sqrt(f2) * std::exp(-s[4] / 2));
  });
  return table;
}

TableCheck validate_tw_table(const TWTable& table) {
  TableCheck out;
  auto fail = [&](std::string message) {
    out.ok = false;
    out.problems.push_back(std::move(message));
  };
  if (table.x.size() != table.f.size() || table.x.empty()) {
    fail("table is empty or ragged");
    return out;
  }
  if (table.x.front() > kTWGridMin + 1e-12 || table.x.back() < kTWGridMax - 1e-12) fail("grid does not cover [-10, 6]");
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    if (!(table.f[i] >= 0 && table.f[i] <= 1)) fail("value outside [0, 1] at x = " + format_double(table.x[i]));
    if (i > 0) {
      if (table.x[i] - table.x[i - 1] > kTWGridStep + 1e-12) fail("grid step above 0.05 at x = " + format_double(table.x[i]));
      if (table.f[i] < table.f[i - 1]) fail("decrease at x = " + format_double(table.x[i]));
    }
  }
  const CdfTable cdf = table.cdf();
  if (!(cdf(kTWGridMax) > 1 - 1e-6)) fail("F(6) is not above 1 - 1e-6");
  return out;
}

double joint_gap_probability(double s1, double x1, double s2, double x2, std::size_t nodes) {
  if (!(std::abs(s1 - s2) <= 2)) throw std::invalid_argument("joint_gap_probability: |s1 - s2| must be at most 2");
  if (s1 == s2) {
    const double times[1] = {s1};
    const double cutoffs[1] = {std::min(x1, x2)};
    return fredholm_determinant(discretize_kernel(times, cutoffs, nodes));
  }
  if (std::abs(s1 - s2) < kMinTimeSeparation) {
    throw std::invalid_argument("joint_gap_probability: 0 < |s1 - s2| < 1e-3 is not resolved by the quadrature");
  }
  const double times[2] = {s1, s2};
  const double cutoffs[2] = {x1, x2};
  return fredholm_determinant(discretize_kernel(times, cutoffs, nodes));
}

void write_tw_csv(std::ostream& out, const TWTable& table) {
  out << "beta,x,F\n";
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    out << table.beta << ',' << format_double(table.x[i]) << ',' << format_double(table.f[i]) << '\n';
  }
}

TWTable read_tw_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "beta,x,F") throw std::runtime_error(path.string() + ": expected header beta,x,F");
  TWTable table;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string beta, x, f;
    if (!std::getline(row, beta, ',') || !std::getline(row, x, ',') || !std::getline(row, f)) {
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    }
    const int b = std::stoi(beta);
    if (first) table.beta = b;
    else if (b != table.beta) throw std::runtime_error(path.string() + ": mixed beta values");
    first = false;
    table.x.push_back(std::stod(x));
    table.f.push_back(std::stod(f));
  }
  return table;
}

TWTable load_reference_table(int beta) {
  const std::filesystem::path path =
      std::filesystem::path(CORNERLAB_DATA_DIR) / "tw" / ("tw" + std::to_string(beta) + ".csv");
  return read_tw_csv(path);
}

}  // namespace cornerlab
