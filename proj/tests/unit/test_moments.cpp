#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cornerlab/moments.hpp"
#include "cornerlab/path_oracle.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

namespace {

MomentSpec plain(std::vector<int> m, std::vector<std::size_t> n, std::vector<double> taus = {}) {
  MomentSpec s;
  s.exponents = std::move(m);
  s.sizes = std::move(n);
  s.taus = taus.empty() ? std::vector<double>(s.exponents.size(), 0.0) : std::move(taus);
  return s;
}

EntryProcessSpec entries(EntryKind kind, int beta) { return EntryProcessSpec::make(kind, symmetry_from_beta(beta)); }

}  // namespace

TEST(MomentSpec, Validation) {
  EXPECT_NO_THROW(plain({2}, {4}).validate());
  EXPECT_THROW(plain({}, {}).validate(), std::invalid_argument);
  auto bad = plain({2, 2}, {4});
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  auto modified = plain({2}, {2});
  modified.kind = MomentKind::modified;
  EXPECT_THROW(modified.validate(), std::invalid_argument);
  EXPECT_EQ(moment_spec_from_json(to_json(plain({3, 1}, {4, 3}, {0.1, -0.2}))).exponents, (std::vector<int>{3, 1}));
}

TEST(MonteCarlo, GoeSecondMoment) {
  const auto r = mc_mixed_moments(plain({2}, {4}), entries(EntryKind::gaussian_ou, 1), 20000, 1);
  EXPECT_NEAR(r.estimate, 1.25, 3 * r.stderr_);
}

TEST(MonteCarlo, UnimodularSecondMoment) {
  const auto r = mc_mixed_moments(plain({2}, {4}), entries(EntryKind::resampled_unimodular, 1), 2000, 2);
  EXPECT_NEAR(r.estimate, 0.75, 1e-12);  // tr H^2 = N(N-1) exactly
}

TEST(MonteCarlo, OddMomentsVanish) {
  for (auto kind : {EntryKind::gaussian_ou, EntryKind::resampled_unimodular}) {
    const auto r = mc_mixed_moments(plain({3}, {5}), entries(kind, 2), 5000, 3);
    EXPECT_NEAR(r.estimate, 0, 3 * r.stderr_);
  }
}

TEST(MonteCarlo, IndependentOfThreads) {
  const auto spec = plain({2, 2}, {4, 4}, {0.0, 0.3});
  const auto e = entries(EntryKind::resampled_gaussian, 2);
  EXPECT_EQ(moment_samples(spec, e, 300, 9, 1), moment_samples(spec, e, 300, 9, 4));
}

TEST(MonteCarlo, MatchesOracleAtSmallSizes) {
  const auto e = entries(EntryKind::resampled_unimodular, 1);
  for (int m : {2, 4, 6}) {
    const auto spec = plain({m}, {4});
    const auto r = mc_mixed_moments(spec, e, 4000, 5);
    EXPECT_NEAR(r.estimate, exact_mixed_moment(spec, e), 3 * r.stderr_ + 1e-12) << "m " << m;
  }
}

TEST(MonteCarlo, OddModifiedParityIsZero) {
  auto spec = plain({3}, {4});
  spec.kind = MomentKind::modified;
  const auto samples = moment_samples(spec, entries(EntryKind::resampled_unimodular, 1), 200, 6);
  double sum = 0;
  for (double v : samples) sum += v;
  EXPECT_NEAR(exact_mixed_moment(plain({3}, {4}), entries(EntryKind::resampled_unimodular, 1)), 0, 0);
  EXPECT_NEAR(exact_modified_moment(spec, entries(EntryKind::resampled_unimodular, 1)), 0, 0);
  EXPECT_TRUE(std::isfinite(sum));
}

TEST(Laplace, Examples) {
  const double inf = std::numeric_limits<double>::infinity();
  const double one[] = {0, -inf, -inf};
  EXPECT_DOUBLE_EQ(laplace_sum(one, 1, true).value, 1);
  const double two[] = {0, -std::log(2.0)};
  const auto r = laplace_sum(two, 1, true);
  EXPECT_DOUBLE_EQ(r.value, 1.5);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(laplace_sum(two, 1, false).converged);
  EXPECT_THROW(laplace_sum(two, 0, true), std::invalid_argument);
  EXPECT_NEAR(laplace_sum(two, 0.5, true).value, 1 + std::sqrt(0.5), 1e-15);
}

TEST(Laplace, TailGuardStopsEarly) {
  const double lambda[] = {0, -100, -200};
  const auto r = laplace_sum(lambda, 1, false);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.terms_used, 1u);
}

TEST(Laplace, DecreasesInAlphaForNegativeLines) {
  StreamEngine rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> lambda(8);
    double level = 0;
    for (auto& l : lambda) {
      level -= 0.05 + rng.uniform_open();
      l = level;
    }
    double previous = laplace_sum(lambda, 1, true).value;
    for (double alpha = 1.5; alpha <= 6; alpha += 0.5) {
      const double v = laplace_sum(lambda, alpha, true).value;
      EXPECT_LT(v, previous);
      previous = v;
    }
  }
}

TEST(Laplace, MirrorParity) {
  SpectrumFrame f;
  f.n = 4;
  f.eigenvalues = {4, 1, -1, -4};
  const auto base = laplace_statistic(f, 16, 1);
  const auto even = laplace_statistic(f, 16, 1, 0);
  const auto odd = laplace_statistic(f, 16, 1, 1);
  EXPECT_NEAR(even.value - base.value, base.value - odd.value, 1e-12);
  EXPECT_NEAR(even.value, 2 * base.value, 1e-12);  // symmetric spectrum
}

TEST(Classify, Examples) {
  const double n = 100, m = 100;
  EXPECT_EQ(edge_bulk_classify(2 * std::sqrt(n), n, m), EdgeRegion::right_edge);
  EXPECT_EQ(edge_bulk_classify(-2 * std::sqrt(n), n, m), EdgeRegion::left_edge);
  EXPECT_EQ(edge_bulk_classify(0, n, m), EdgeRegion::bulk);
  EXPECT_EQ(edge_bulk_classify(0, 8, 8), EdgeRegion::bulk);
  EXPECT_EQ(edge_bulk_classify(3 * std::sqrt(n), n, m), EdgeRegion::tail);
  EXPECT_EQ(to_string(EdgeRegion::right_edge), "right-edge");
}
