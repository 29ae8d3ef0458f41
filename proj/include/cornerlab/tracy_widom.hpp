#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cornerlab/airy.hpp"
#include "cornerlab/statistics.hpp"

namespace cornerlab {

enum class TWMethod { fredholm, painleve };

std::string_view to_string(TWMethod method);

struct TWTable {
  int beta = 2;
  TWMethod method = TWMethod::painleve;
  std::vector<double> x;
  std::vector<double> f;

  CdfTable cdf() const { return {x, f}; }
};

inline constexpr double kTWGridMin = -10;
inline constexpr double kTWGridMax = 6;
inline constexpr double kTWGridStep = 0.05;

/// x = -10, -9.95, ..., 6.
std::vector<double> tw_default_grid();

/// F_2(x) = det(I - A) on L^2(x, inf), x in [-10, 6].
double tw_cdf_fredholm(double x, std::size_t nodes = kDefaultFredholmNodes);

TWTable tw_table_fredholm(std::span<const double> grid, std::size_t nodes = kDefaultFredholmNodes,
                          unsigned threads = 1);

/// Hastings-McLeod q'' = x q + 2 q^3, integrated from x = 8 (q = Ai) down to
/// the smallest grid point, with
///   F_2(x) = exp(-int_x^inf (t - x) q(t)^2 dt),
///   F_1(x) = F_2(x)^{1/2} exp(-1/2 int_x^inf q(t) dt).
/// Throws std::runtime_error if q leaves the Hastings-McLeod branch.
TWTable tw_cdf_painleve(int beta, std::span<const double> grid);

struct PainleveSample {
  double x;
  double q;
};

/// q(x) on the grid, for checks against the Airy asymptotics.
std::vector<PainleveSample> hastings_mcleod(std::span<const double> grid);

struct TableCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Values in [0, 1], non-decreasing, F(6) > 1 - 1e-6, grid step <= 0.05
/// over [-10, 6].
TableCheck validate_tw_table(const TWTable& table);

/// P(no Airy_2 point above x1 at time s1 and none above x2 at time s2),
/// |s1 - s2| <= 2. Equal times reduce to F_2(min(x1, x2)). Separations in
/// (0, 1e-3) are rejected: the heat-kernel part of the extended kernel then
/// has width below the node spacing.
inline constexpr double kMinTimeSeparation = 1e-3;

double joint_gap_probability(double s1, double x1, double s2, double x2,
                             std::size_t nodes = kDefaultFredholmNodes);

/// CSV with header beta,x,F.
void write_tw_csv(std::ostream& out, const TWTable& table);
TWTable read_tw_csv(const std::filesystem::path& path);

/// Shipped table data/tw/tw<beta>.csv.
TWTable load_reference_table(int beta);

}  // namespace cornerlab
