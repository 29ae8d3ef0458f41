#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cornerlab/diagram.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

namespace {

std::filesystem::path diagram_dir() { return std::filesystem::path(CORNERLAB_DATA_DIR) / "diagrams"; }

DiagramSpec load(const std::string& name) { return load_diagram(diagram_dir() / (name + ".json")); }

IntegrationBudget budget(std::size_t samples = 200000) {
  IntegrationBudget b;
  b.samples = samples;
  b.seed = 5;
  return b;
}

}  // namespace

TEST(Diagram, ShippedDiagramsValidate) {
  const auto all = load_diagram_directory(diagram_dir());
  ASSERT_EQ(all.size(), 6u);
  for (const auto& d : all) {
    const auto check = validate_diagram(d);
    EXPECT_TRUE(check.ok) << d.name << ": " << (check.problems.empty() ? "" : check.problems.front());
    EXPECT_EQ(static_cast<int>(d.edges.size()), 3 * d.s - d.k);
  }
}

TEST(Diagram, WorkedExamplePathLengths) {
  const auto d = load("fig2_right");
  const auto lengths = d.path_lengths();
  ASSERT_TRUE(lengths.has_value());
  EXPECT_EQ(*lengths, (std::vector<int>{17, 7}));
}

TEST(Diagram, RejectsTripleTraversal) {
  auto d = load("fig1_left");
  d.edges[0].cp = {3};
  EXPECT_FALSE(validate_diagram(d).ok);
}

TEST(Diagram, JsonRoundTrip) {
  const auto d = load("fig2_left");
  const auto again = diagram_from_json(to_json(d));
  EXPECT_EQ(again.name, d.name);
  EXPECT_EQ(again.edges.size(), d.edges.size());
  EXPECT_EQ(again.edges[2].p_plus, d.edges[2].p_plus);
}

TEST(Integral, SegmentLength) {
  const auto d = load("fig1_left");
  const double alpha[] = {2};
  const double zero[] = {0};
  const double exact = alpha[0] / std::sqrt(2.0);
  const auto mc = integral_I(d, alpha, zero, zero, IntegrationMethod::monte_carlo, budget());
  EXPECT_NEAR(mc.value, exact, 0.01 * exact);
  const auto quad = integral_I(d, alpha, zero, zero, IntegrationMethod::simplex_quadrature);
  EXPECT_NEAR(quad.value, exact, 1e-12);
}

TEST(Integral, K1IgnoresTimes) {
  const auto d = load("fig1_centre");
  const double alpha[] = {1.5};
  const double zero[] = {0}, other[] = {0.7};
  const auto a = integral_I(d, alpha, zero, zero, IntegrationMethod::simplex_quadrature);
  const auto b = integral_I(d, alpha, other, other, IntegrationMethod::simplex_quadrature);
  EXPECT_DOUBLE_EQ(a.value, b.value);
}

TEST(Integral, TranslationInvariance) {
  for (const char* name : {"fig2_left", "fig2_centre", "fig2_right"}) {
    const auto d = load(name);
    const double alpha[] = {1.0, 1.4};
    const double s[] = {0.1, 0.5}, t[] = {-0.3, 0.2};
    const double s2[] = {1.1, 1.5}, t2[] = {-2.3, -1.8};
    const double s3[] = {0.5, 0.1}, t3[] = {0.2, -0.3};
    const auto a = integral_I(d, alpha, s, t, IntegrationMethod::simplex_quadrature);
    const auto b = integral_I(d, alpha, s2, t2, IntegrationMethod::simplex_quadrature);
    const auto c = integral_I(d, alpha, s3, t3, IntegrationMethod::simplex_quadrature);
    EXPECT_NEAR(a.value, b.value, 1e-12 * a.value) << name;
    EXPECT_NEAR(a.value, c.value, 1e-12 * a.value) << name;
  }
}

TEST(Integral, DecreasesWithDistance) {
  const auto d = load("fig2_left");
  const double alpha[] = {1.0, 1.0};
  double previous = INFINITY;
  for (double gap : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double s[] = {0, gap}, t[] = {0, 0};
    const double v = integral_I(d, alpha, s, t, IntegrationMethod::simplex_quadrature).value;
    EXPECT_LE(v, previous);
    previous = v;
  }
}

TEST(Integral, MonteCarloAgreesWithQuadrature) {
  for (const char* name : {"fig1_centre", "fig2_left", "fig2_right"}) {
    const auto d = load(name);
    std::vector<double> alpha(static_cast<std::size_t>(d.k), 1.2), s(alpha.size(), 0), t(alpha.size(), 0);
    if (d.k == 2) t[1] = 0.4;
    const auto mc = integral_I(d, alpha, s, t, IntegrationMethod::monte_carlo, budget());
    const auto quad = integral_I(d, alpha, s, t, IntegrationMethod::simplex_quadrature);
    EXPECT_NEAR(mc.value, quad.value, 4 * mc.error + 1e-9) << name;
  }
}

TEST(PsiSharp, EmptyAndSingle) {
  const double alpha[] = {2}, zero[] = {0};
  EXPECT_EQ(psi_sharp({}, 1, alpha, zero, zero, IntegrationMethod::simplex_quadrature).value, 0);
  const DiagramSpec one[] = {load("fig1_centre")};
  EXPECT_DOUBLE_EQ(psi_sharp(one, 1, alpha, zero, zero, IntegrationMethod::simplex_quadrature).value,
                   integral_I(one[0], alpha, zero, zero, IntegrationMethod::simplex_quadrature).value);
}

TEST(PsiSharp, Beta2RejectsNonOrientable) {
  const double alpha[] = {2}, zero[] = {0};
  const DiagramSpec bad[] = {load("fig1_left")};
  EXPECT_THROW(psi_sharp(bad, 2, alpha, zero, zero, IntegrationMethod::simplex_quadrature), std::invalid_argument);
  const DiagramSpec good[] = {load("fig1_centre")};
  EXPECT_NO_THROW(psi_sharp(good, 2, alpha, zero, zero, IntegrationMethod::simplex_quadrature));
}

TEST(PhiSharp, ConstantAndZero) {
  for (double a : {0.5, 1.0, 3.0}) {
    const double alpha[] = {a};
    EXPECT_NEAR(phi_sharp([](std::span<const double>) { return 1.0; }, alpha), 1 / std::sqrt(std::numbers::pi * a),
                1e-8);
    EXPECT_EQ(phi_sharp([](std::span<const double>) { return 0.0; }, alpha), 0);
  }
}

TEST(PhiSharp, Factorizes) {
  auto f = [](double x) { return std::exp(-x) + x * x; };
  const double a1[] = {0.8}, a2[] = {1.7}, both[] = {0.8, 1.7};
  const double one = phi_sharp([&](std::span<const double> x) { return f(x[0]); }, a1);
  const double two = phi_sharp([&](std::span<const double> x) { return f(x[0]); }, a2);
  const double joint = phi_sharp([&](std::span<const double> x) { return f(x[0]) * f(x[1]); }, both);
  EXPECT_NEAR(joint, one * two, 1e-10 * std::abs(joint));
}

TEST(SubsetTransform, K1Halves) {
  const SubsetTable sharp{{0, 1.0}, {1, 0.8}};
  EXPECT_NEAR(psi_from_sharp(sharp, 1).at(1), 0.4, 1e-15);
}

TEST(SubsetTransform, RejectsZeroTable) {
  const SubsetTable zero{{0, 0.0}, {1, 0.0}, {2, 0.0}, {3, 0.0}};
  EXPECT_THROW(psi_from_sharp(zero, 2), std::invalid_argument);
  const SubsetTable missing{{0, 1.0}, {1, 0.2}};
  EXPECT_THROW(psi_from_sharp(missing, 2), std::invalid_argument);
}

TEST(SubsetTransform, RoundTrip) {
  StreamEngine rng(3);
  for (int k = 1; k <= 6; ++k) {
    SubsetTable psi{{0, 1.0}};
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) psi[mask] = 2 * rng.uniform_open() - 1;
    const auto back = psi_from_sharp(sharp_from_psi(psi, k), k);
    for (const auto& [mask, v] : psi) EXPECT_NEAR(back.at(mask), v, 1e-12) << "k " << k;
  }
}
