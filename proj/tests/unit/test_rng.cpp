#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "cornerlab/parallel.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

TEST(Rng, StreamIsPureFunctionOfKey) {
  StreamEngine a(derive_key(7, {1, 2, 3}));
  StreamEngine b(derive_key(7, {1, 2, 3}));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, LabelsSeparateStreams) {
  EXPECT_NE(derive_key(7, {1, 2}), derive_key(7, {2, 1}));
  EXPECT_NE(derive_key(7, {1}), derive_key(8, {1}));
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
}

TEST(Rng, UniformOpenStaysInside) {
  StreamEngine e(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = e.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  auto run = [](unsigned threads) {
    std::vector<std::uint64_t> out(257);
    parallel_for(out.size(), threads, [&](std::size_t i) {
      StreamEngine e(trial_seed(99, i));
      out[i] = e();
    });
    return out;
  };
  const auto one = run(1);
  EXPECT_EQ(one, run(3));
  EXPECT_EQ(one, run(8));
}

TEST(Parallel, RethrowsFirstFailure) {
  EXPECT_THROW(parallel_for(50, 4,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}
