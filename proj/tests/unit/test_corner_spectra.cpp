#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "cornerlab/corner_spectra.hpp"
#include "cornerlab/entry_process.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

namespace {

HermitianMatrix ones_minus_identity(Eigen::Index n) {
  HermitianMatrix h = HermitianMatrix::Ones(n, n);
  h.diagonal().setZero();
  return h;
}

SpectrumFrame frame(std::size_t n, std::vector<double> values) {
  SpectrumFrame f;
  f.n = n;
  f.eigenvalues = std::move(values);
  return f;
}

void expect_values(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
}

}  // namespace

TEST(Eigenvalues, PermutationMatrix) {
  HermitianMatrix h(2, 2);
  h << 0, 1, 1, 0;
  expect_values(eigenvalues(h), {1, -1});
}

TEST(Eigenvalues, OnesMinusIdentity) { expect_values(eigenvalues(ones_minus_identity(3)), {2, -1, -1}); }

TEST(Eigenvalues, ComplexHermitian) {
  HermitianMatrix h(2, 2);
  h << 0, Complex(0, 1), Complex(0, -1), 0;
  expect_values(eigenvalues(h), {1, -1});
}

TEST(Eigenvalues, TracesOfRandomMatrices) {
  for (int beta : {1, 2}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto h = hermitian_snapshot(
          MatrixPath(EntryProcessSpec::make(EntryKind::gaussian_ou, symmetry_from_beta(beta)), seed), 0, 6);
      const auto ev = eigenvalues(h);
      EXPECT_TRUE(std::is_sorted(ev.rbegin(), ev.rend()));
      double s1 = 0, s2 = 0;
      for (double x : ev) {
        s1 += x;
        s2 += x * x;
      }
      const double t1 = h.trace().real(), t2 = (h * h).trace().real();
      EXPECT_NEAR(s1, t1, 1e-9 * std::max(1.0, std::abs(t1)));
      EXPECT_NEAR(s2, t2, 1e-9 * t2);
    }
  }
}

TEST(Eigenvalues, RejectsNonHermitian) {
  HermitianMatrix h(2, 2);
  h << 0, 1, 2, 0;
  EXPECT_THROW(eigenvalues(h), NonHermitianError);
}

TEST(Eigenvalues, PairsHaveSmallResiduals) {
  const auto h = hermitian_snapshot(
      MatrixPath(EntryProcessSpec::make(EntryKind::gaussian_ou, SymmetryClass::unitary), 8), 0, 10);
  const auto pairs = eigen_pairs(h);
  expect_values(pairs.values, eigenvalues(h));
  for (Eigen::Index k = 0; k < 10; ++k) {
    const Eigen::VectorXcd v = pairs.vectors.col(k);
    EXPECT_LT((h * v - pairs.values[k] * v).norm(), 1e-10);
  }
}

TEST(CornerSpectra, SingleCornerEqualsSnapshotSpectrum) {
  const MatrixPath path(EntryProcessSpec::make(EntryKind::resampled_gaussian, SymmetryClass::orthogonal), 4);
  const std::size_t sizes[] = {7};
  const auto frames = corner_spectra(path, 0.3, sizes);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].eigenvalues, eigenvalues(hermitian_snapshot(path, 0.3, 7)));
}

TEST(CornerSpectra, ExplicitMatrixCorner) {
  const std::size_t sizes[] = {2, 3};
  const auto frames = corner_spectra(ones_minus_identity(3), 0, sizes);
  expect_values(frames[0].eigenvalues, {1, -1});
  expect_values(frames[1].eigenvalues, {2, -1, -1});
}

TEST(CornerSpectra, MirrorNegatesAndReverses) {
  const auto f = frame(3, {2, 0.5, -1});
  const auto m = f.mirrored();
  EXPECT_EQ(m.eigenvalues, (std::vector<double>{1, -0.5, -2}));
  EXPECT_DOUBLE_EQ(f.spectral_norm(), 2);
  const HermitianMatrix h = hermitian_snapshot(
      MatrixPath(EntryProcessSpec::make(EntryKind::gaussian_ou, SymmetryClass::orthogonal), 1), 0, 8);
  const std::size_t sizes[] = {8};
  const auto direct = corner_spectra(HermitianMatrix(-h), 0, sizes)[0].eigenvalues;
  const auto mirrored = corner_spectra(h, 0, sizes)[0].mirrored().eigenvalues;
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(direct[k], mirrored[k], 1e-12);
}

TEST(Interlacing, HandExample) {
  const auto r = check_interlacing(frame(2, {1, -1}), frame(3, {2, -1, -1}));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.worst_violation, 0);
}

TEST(Interlacing, DetectsViolation) {
  const auto r = check_interlacing(frame(2, {3, -1}), frame(3, {2, -1, -1}));
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.worst_violation, 1, 1e-12);
}

TEST(Interlacing, SizeMismatch) {
  EXPECT_THROW(check_interlacing(frame(2, {1, 0}), frame(2, {2, 1.5})), std::invalid_argument);
}

TEST(Interlacing, RandomNestedCorners) {
  std::vector<std::size_t> sizes(50);
  for (std::size_t k = 0; k < 50; ++k) sizes[k] = k + 1;
  for (auto kind : {EntryKind::gaussian_ou, EntryKind::resampled_unimodular}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const MatrixPath path(EntryProcessSpec::make(kind, symmetry_from_beta(1 + seed % 2)), seed);
      const auto frames = corner_spectra(path, 0.1, sizes);
      for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
        ASSERT_TRUE(check_interlacing(frames[k], frames[k + 1]).pass) << "seed " << seed << " n " << k + 1;
      }
    }
  }
}

TEST(CornerGrid, FramesShareSnapshotAndIgnoreThreads) {
  const MatrixPath path(EntryProcessSpec::make(EntryKind::resampled_unimodular, SymmetryClass::unitary), 9);
  const double taus[] = {-0.1, 0.0, 0.2};
  const std::size_t sizes[] = {10, 11, 12};
  const auto a = build_corner_grid(path, taus, sizes, 1);
  const auto b = build_corner_grid(path, taus, sizes, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(a.frame(i, j).eigenvalues, b.frame(i, j).eigenvalues);
      EXPECT_EQ(a.frame(i, j).n, sizes[j]);
    }
    EXPECT_TRUE(check_interlacing(a.frame(i, 0), a.frame(i, 1)).pass);
  }
  EXPECT_THROW(a.frame(3, 0), std::out_of_range);
}

TEST(CornerSpectra, CsvRows) {
  const SpectrumFrame frames[] = {frame(2, {1, -1})};
  std::ostringstream out;
  write_spectrum_csv(out, frames);
  EXPECT_EQ(out.str(), "tau,n,j,xi\n0,2,1,1\n0,2,2,-1\n");
}
