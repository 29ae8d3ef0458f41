#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cornerlab/airy.hpp"
#include "cornerlab/tracy_widom.hpp"

using namespace cornerlab;

namespace {

const TWTable& table(int beta) {
  static const TWTable t1 = tw_cdf_painleve(1, tw_default_grid());
  static const TWTable t2 = tw_cdf_painleve(2, tw_default_grid());
  return beta == 1 ? t1 : t2;
}

double mean(const TWTable& t) {
  double m = 0;
  for (std::size_t k = 1; k < t.x.size(); ++k) m += 0.5 * (t.x[k] + t.x[k - 1]) * (t.f[k] - t.f[k - 1]);
  return m;
}

}  // namespace

TEST(HastingsMcLeod, MatchesAiryOnTheRight) {
  std::vector<double> grid;
  for (double x = 4; x <= 8; x += 0.5) grid.push_back(x);
  for (const auto& p : hastings_mcleod(grid)) {
    EXPECT_LE(std::abs(p.q - airy_ai(p.x)) / airy_ai(p.x), 1e-6) << p.x;
  }
}

TEST(TracyWidom, FredholmSelfConvergence) {
  for (double x : {-6.0, -3.0, -1.0, 0.0, 2.0}) {
    EXPECT_NEAR(tw_cdf_fredholm(x, 40), tw_cdf_fredholm(x, 80), 1e-8) << x;
  }
}

TEST(TracyWidom, FredholmMatchesPainleve) {
  const auto& t = table(2);
  for (std::size_t k = 0; k < t.x.size(); k += 8) {
    if (t.x[k] < -8 || t.x[k] > 4) continue;
    EXPECT_NEAR(tw_cdf_fredholm(t.x[k]), t.f[k], 1e-6) << t.x[k];
  }
  EXPECT_GE(tw_cdf_fredholm(6), 1 - 1e-6);
  EXPECT_THROW(tw_cdf_fredholm(7), std::out_of_range);
}

TEST(TracyWidom, Beta2TableInvariants) {
  const auto check = validate_tw_table(table(2));
  EXPECT_TRUE(check.ok) << (check.problems.empty() ? "" : check.problems.front());
}

TEST(TracyWidom, Beta1TableIsMonotoneButItsTailExceedsTheRule) {
  const auto& t = table(1);
  for (std::size_t k = 1; k < t.f.size(); ++k) EXPECT_GE(t.f[k], t.f[k - 1]);
  EXPECT_GE(t.f.front(), 0);
  EXPECT_LE(t.f.back(), 1);
  // 1 - F1(6) is about 2e-6, above the 1e-6 tail rule.
  EXPECT_NEAR(1 - t.f.back(), 1.94e-6, 0.1e-6);
  EXPECT_FALSE(validate_tw_table(t).ok);
}

TEST(TracyWidom, KnownMeans) {
  EXPECT_NEAR(mean(table(2)), -1.771087, 2e-3);
  EXPECT_NEAR(mean(table(1)), -1.206546, 2e-3);
}

TEST(TracyWidom, CsvRoundTrip) {
  std::ostringstream out;
  write_tw_csv(out, table(2));
  const auto path = std::filesystem::temp_directory_path() / "cornerlab_tw_roundtrip.csv";
  std::ofstream(path) << out.str();
  const auto back = read_tw_csv(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.x.size(), table(2).x.size());
  for (std::size_t k = 0; k < back.x.size(); ++k) EXPECT_EQ(back.f[k], table(2).f[k]);
  EXPECT_EQ(out.str().substr(0, 9), "beta,x,F\n");
}

TEST(TracyWidom, ShippedTablesMatchRecomputation) {
  for (int beta : {1, 2}) {
    const auto shipped = load_reference_table(beta);
    ASSERT_EQ(shipped.x.size(), table(beta).x.size());
    for (std::size_t k = 0; k < shipped.x.size(); ++k) EXPECT_NEAR(shipped.f[k], table(beta).f[k], 1e-12);
  }
}

TEST(JointGap, EqualTimeReduction) {
  EXPECT_NEAR(joint_gap_probability(0.4, 0, 0.4, 0), tw_cdf_fredholm(0), 1e-6);
  EXPECT_NEAR(joint_gap_probability(0.4, -1, 0.4, 1), tw_cdf_fredholm(-1), 1e-6);
}

TEST(JointGap, VacuousSecondConstraint) {
  EXPECT_NEAR(joint_gap_probability(0, -1, 0.5, 6), tw_cdf_fredholm(-1), 1e-4);
}

TEST(JointGap, FrechetBoundsAndSymmetry) {
  for (double ds : {0.1, 0.5, 1.5}) {
    for (double x1 : {-2.0, 0.0}) {
      for (double x2 : {-1.5, 1.0}) {
        const double f1 = tw_cdf_fredholm(x1), f2 = tw_cdf_fredholm(x2);
        const double p = joint_gap_probability(0, x1, ds, x2);
        EXPECT_GE(p, std::max(0.0, f1 + f2 - 1) - 1e-9);
        EXPECT_LE(p, std::min(f1, f2) + 1e-9);
        EXPECT_NEAR(p, joint_gap_probability(ds, x2, 0, x1), 1e-10);
      }
    }
  }
}

TEST(JointGap, RejectsUnresolvedSeparation) {
  EXPECT_THROW(joint_gap_probability(0, 0, 1e-6, 0), std::invalid_argument);
  EXPECT_THROW(joint_gap_probability(0, 0, 3, 0), std::invalid_argument);
}
