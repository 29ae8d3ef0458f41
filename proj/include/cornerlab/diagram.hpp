#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornerlab/polytope.hpp"

namespace cornerlab {

struct DiagramEdge {
  std::vector<int> cp;  // c_p(e) for p = 1..k
  int p_minus = 1;      // 1-based
  int p_plus = 1;
  std::optional<int> length;  // l(e) of a concrete tuple, if recorded
};

/// A k-diagram: 2s vertices, 3s - k edges, each edge traversed twice in
/// total by the paths p_-(e) <= p_+(e).
struct DiagramSpec {
  std::string name;
  int k = 1;
  int s = 1;
  std::optional<int> vertices;  // 2s when given
  bool orientable = false;
  std::vector<DiagramEdge> edges;

  /// sum_e c_p(e) l(e) for every p, when every edge carries a length.
  std::optional<std::vector<int>> path_lengths() const;
};

struct DiagramValidation {
  bool ok = true;
  std::vector<std::string> problems;
};

DiagramValidation validate_diagram(const DiagramSpec& d);

nlohmann::json to_json(const DiagramSpec& d);
/// Parses p_minus / p_plus as 1-based path indices.
DiagramSpec diagram_from_json(const nlohmann::json& j);
DiagramSpec load_diagram(const std::filesystem::path& path);

/// Every *.json diagram in a directory, sorted by file name.
std::vector<DiagramSpec> load_diagram_directory(const std::filesystem::path& dir);

/// The constraint system sum_e c_p(e) w(e) = alpha_p.
PolytopeSlice diagram_polytope(const DiagramSpec& d, std::span<const double> alpha);

enum class IntegrationMethod { monte_carlo, simplex_quadrature };

struct IntegrationBudget {
  std::size_t samples = 200000;  // Monte Carlo
  std::size_t order = 10;        // Gauss-Legendre points per simplex axis
  std::uint64_t seed = 0;
};

/// I^D(alpha, s, t) = integral over the slice of
///   exp(-sum_e [|t_{p+} - t_{p-}| + |s_{p+} - s_{p-}|] w(e)).
IntegralEstimate integral_I(const DiagramSpec& d, std::span<const double> alpha,
                            std::span<const double> s, std::span<const double> t,
                            IntegrationMethod method, const IntegrationBudget& budget = {});

/// Sum of integral_I over a diagram family. For beta = 2 every diagram must
/// be orientable.
IntegralEstimate psi_sharp(std::span<const DiagramSpec> diagrams, int beta,
                           std::span<const double> alpha, std::span<const double> s,
                           std::span<const double> t, IntegrationMethod method,
                           const IntegrationBudget& budget = {});

using PsiSharpFunction = std::function<double(std::span<const double> alpha)>;

/// phi^#(alpha) = prod_p (pi alpha_p)^{-1/2} int_0^inf e^{-u_p} du_p
///                psi^#(2 sqrt(alpha_p u_p)),
/// the substitution u = xi^2 of the defining integral, by tensor
/// Gauss-Laguerre quadrature. k <= 3.
double phi_sharp(const PsiSharpFunction& psi, std::span<const double> alpha, std::size_t nodes = 40);

/// Table over subsets of {1..k}, keyed by bitmask (bit p-1 for index p).
using SubsetTable = std::map<std::uint32_t, double>;

/// Solves sum_{I subset S} psi(I) psi(S \ I) = psi#(S) for psi with
/// psi(empty) = 1. Needs psi#(empty) = 1 and every subset present.
SubsetTable psi_from_sharp(const SubsetTable& sharp, int k);

/// The forward relation, psi -> psi#.
SubsetTable sharp_from_psi(const SubsetTable& psi, int k);

}  // namespace cornerlab
