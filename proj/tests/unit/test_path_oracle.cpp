#include <gtest/gtest.h>

#include <cmath>

#include "cornerlab/path_oracle.hpp"
#include "cornerlab/paths.hpp"

using namespace cornerlab;

namespace {

MomentSpec spec(MomentKind kind, std::vector<int> m, std::vector<std::size_t> n, std::vector<double> taus = {}) {
  MomentSpec s;
  s.kind = kind;
  s.exponents = std::move(m);
  s.sizes = std::move(n);
  s.taus = taus.empty() ? std::vector<double>(s.exponents.size(), 0.0) : std::move(taus);
  return s;
}

EntryProcessSpec entries(EntryKind kind, int beta) { return EntryProcessSpec::make(kind, symmetry_from_beta(beta)); }

PathTuple tuple(std::vector<Path> paths, std::size_t bound) {
  PathTuple t;
  t.bounds.assign(paths.size(), bound);
  t.paths = std::move(paths);
  return t;
}

}  // namespace

TEST(Paths, ClosedPathCounts) {
  EXPECT_EQ(closed_paths(2, 2).size(), 4u);
  EXPECT_EQ(closed_paths(3, 1).size(), 3u);
  EXPECT_EQ(closed_paths(2, 3).size(), 8u);
  for (const auto& p : closed_paths(3, 3)) EXPECT_EQ(p.front(), p.back());
  EXPECT_THROW(closed_paths(100, 5), std::length_error);
}

TEST(Paths, NonBacktrackingCounts) {
  EXPECT_EQ(nb_loopless_paths(3, 3).size(), 6u);
  EXPECT_EQ(nb_loopless_paths(3, 2).size(), 0u);
  EXPECT_EQ(nb_loopless_paths(4, 3).size(), 24u);
  for (const auto& p : nb_loopless_paths(4, 5)) EXPECT_TRUE(is_nb_loopless(p));
}

TEST(Paths, ConventionsDifferAtClosure) {
  // u_4 = u_1: allowed by the sequence reading, rejected by the cyclic one.
  const Path p{1, 2, 3, 4, 2, 1};
  EXPECT_TRUE(is_nb_loopless(p));
  EXPECT_FALSE(is_nb_loopless(p, BacktrackConvention::cyclic));
  const Path back{1, 2, 1, 3, 1};
  EXPECT_FALSE(is_nb_loopless(back));
  const Path loop{1, 1, 2, 3, 1};
  EXPECT_FALSE(is_nb_loopless(loop));
  EXPECT_GT(nb_loopless_paths(4, 5).size(), nb_loopless_paths(4, 5, BacktrackConvention::cyclic).size());
}

TEST(Evenness, Examples) {
  EXPECT_TRUE(is_even_tuple(tuple({{1, 2, 1}}, 3)));
  EXPECT_FALSE(is_even_tuple(tuple({{1, 2, 3, 1}}, 3)));
  EXPECT_TRUE(is_even_tuple(tuple({{1, 2, 1}, {1, 2, 1}}, 3)));
  const auto mult = edge_multiplicity(tuple({{1, 2, 3, 1}}, 3));
  EXPECT_EQ(mult.unordered.at({1, 2}), 1u);
  EXPECT_EQ(mult.oriented.at({3, 1}), 1u);
}

TEST(Evenness, TupleValidation) {
  EXPECT_THROW(tuple({{1, 2}}, 3).validate(), std::invalid_argument);
  EXPECT_THROW(tuple({{1, 4, 1}}, 3).validate(), std::invalid_argument);
}

TEST(Oracle, PlainExamples) {
  const auto uni = entries(EntryKind::resampled_unimodular, 1);
  EXPECT_NEAR(exact_mixed_moment(spec(MomentKind::plain, {2}, {3}), uni), 0.5, 1e-14);
  EXPECT_NEAR(exact_mixed_moment(spec(MomentKind::plain, {2}, {4}), entries(EntryKind::gaussian_ou, 1)), 1.25, 1e-14);
  for (int m : {1, 3, 5}) {
    EXPECT_EQ(exact_mixed_moment(spec(MomentKind::plain, {m}, {3}), entries(EntryKind::gaussian_ou, 2)), 0);
  }
}

TEST(Oracle, ModifiedExamples) {
  const auto uni = entries(EntryKind::resampled_unimodular, 1);
  EXPECT_EQ(exact_modified_moment(spec(MomentKind::modified, {3}, {3}), uni), 0);
  EXPECT_EQ(exact_modified_moment(spec(MomentKind::modified, {2}, {3}), uni), 0);
  // Every directed triangle on three vertices uses each edge once, so all
  // 36 pairs are even. Real signs square to 1; for beta = 2 only the pairs
  // running in opposite directions survive.
  EXPECT_NEAR(exact_modified_moment(spec(MomentKind::modified, {3, 3}, {3, 3}), uni), 36, 1e-12);
  EXPECT_NEAR(exact_modified_moment(spec(MomentKind::modified, {3, 3}, {3, 3}),
                                    entries(EntryKind::resampled_unimodular, 2)),
              18, 1e-12);
  EXPECT_THROW(exact_modified_moment(spec(MomentKind::modified, {3}, {3}), entries(EntryKind::gaussian_ou, 1)),
               OracleOutOfScope);
}

TEST(Oracle, RawAgreesWithClasses) {
  OracleOptions raw;
  raw.method = OracleMethod::raw;
  for (auto kind : {EntryKind::gaussian_ou, EntryKind::resampled_gaussian, EntryKind::resampled_unimodular}) {
    for (int beta : {1, 2}) {
      const auto e = entries(kind, beta);
      const auto a = spec(MomentKind::plain, {2, 2}, {3, 3}, {0.0, 0.4});
      EXPECT_NEAR(exact_mixed_moment(a, e, raw), exact_mixed_moment(a, e), 1e-12);
      const auto b = spec(MomentKind::plain, {4}, {3});
      EXPECT_NEAR(exact_mixed_moment(b, e, raw), exact_mixed_moment(b, e), 1e-12);
    }
  }
}

TEST(Oracle, SkippingOddTuplesChangesNothing) {
  OracleOptions skip;
  skip.skip_odd_tuples = true;
  const auto e = entries(EntryKind::resampled_unimodular, 2);
  for (const auto& s : {spec(MomentKind::plain, {4}, {4}), spec(MomentKind::plain, {3, 3}, {3, 3}, {0.0, 0.2})}) {
    EXPECT_NEAR(exact_mixed_moment(s, e, skip), exact_mixed_moment(s, e), 1e-12);
  }
}

TEST(Oracle, TwoTimeSecondMoment) {
  const auto e = entries(EntryKind::resampled_unimodular, 1);
  const double dt = 0.3;
  const auto s = spec(MomentKind::plain, {1, 1}, {3, 3}, {0.0, dt});
  EXPECT_EQ(exact_mixed_moment(s, e), 0);  // zero diagonal
  const auto g = entries(EntryKind::gaussian_ou, 1);
  // tr H = sum of diagonals, variance 2 each, correlation e^{-dt}.
  EXPECT_NEAR(exact_mixed_moment(s, g), 3 * 2 * std::exp(-dt) / (4 * 3), 1e-12);
}

TEST(Oracle, JsonResult) {
  const auto s = spec(MomentKind::plain, {2}, {3});
  const auto j = oracle_result_json(s, entries(EntryKind::resampled_unimodular, 1), 0.5);
  EXPECT_EQ(j.at("exact").get<double>(), 0.5);
}
