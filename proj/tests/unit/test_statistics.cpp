#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cornerlab/io.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/statistics.hpp"
#include "cornerlab/tracy_widom.hpp"

using namespace cornerlab;

TEST(Summary, MeanVarianceStderr) {
  const double x[] = {1, 2, 3, 4};
  const auto s = summarize(x);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3);
  EXPECT_DOUBLE_EQ(s.stderr_, std::sqrt(5.0 / 3 / 4));
  EXPECT_THROW(summarize(std::span<const double>{}), std::invalid_argument);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000);
}

TEST(Pearson, IdenticalInputsGiveOne) {
  const double x[] = {0.3, -1.2, 2.2, 0.0, 5.1};
  EXPECT_EQ(pearson(x, x), 1.0);
  const double y[] = {-0.3, 1.2, -2.2, 0.0, -5.1};
  EXPECT_NEAR(pearson(x, y), -1.0, 1e-15);
  const double c[] = {1, 1, 1, 1, 1};
  EXPECT_THROW(pearson(x, c), std::invalid_argument);
}

TEST(Ks, InverseCdfDrawsFromTable) {
  const auto t = load_reference_table(2).cdf();
  StreamEngine rng(2026);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = t.quantile(t.f.front() + (t.f.back() - t.f.front()) * rng.uniform_open());
  EXPECT_LE(ks_distance(draws, t), 0.01);
}

TEST(Ks, ConstantSamples) {
  const CdfTable t{{-1, 1}, {0, 1}};
  const std::vector<double> c(200, 0.2);
  const double f = t(0.2);
  EXPECT_NEAR(ks_distance(c, t), std::max(f, 1 - f), 1e-15);
}

TEST(Ks, Errors) {
  const CdfTable t{{-1, 1}, {0, 1}};
  EXPECT_THROW(ks_distance(std::span<const double>{}, t), std::invalid_argument);
  EXPECT_THROW(ks_distance(std::vector<double>(50, 0.0), t), std::invalid_argument);
  EXPECT_THROW(ks_distance(std::vector<double>(200, 3.0), t), std::out_of_range);
}

TEST(Ks, TwoSample) {
  const double a[] = {1, 2, 3, 4};
  const double b[] = {1, 2, 3, 4};
  const double c[] = {5, 6, 7, 8};
  EXPECT_EQ(ks_two_sample(a, b), 0);
  EXPECT_EQ(ks_two_sample(a, c), 1);
}

TEST(LinearFit, ExactLine) {
  const double x[] = {0, 1, 2, 3};
  const double y[] = {1, 3, 5, 7};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0, 1e-12);
}

TEST(Io, FormatAndHash) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_NE(fnv1a_hex("a"), fnv1a_hex("b"));
}
