#include "cornerlab/diagram.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cornerlab/io.hpp"
#include "cornerlab/quadrature.hpp"
#include "cornerlab/statistics.hpp"

namespace cornerlab {

std::optional<std::vector<int>> DiagramSpec::path_lengths() const {
  std::vector<int> n(static_cast<std::size_t>(k), 0);
  for (const auto& e : edges) {
    if (!e.length) return std::nullopt;
    for (int p = 0; p < k && p < static_cast<int>(e.cp.size()); ++p) n[p] += e.cp[p] * *e.length;
  }
  return n;
}

DiagramValidation validate_diagram(const DiagramSpec& d) {
  DiagramValidation out;
  auto fail = [&](std::string message) {
    out.ok = false;
    out.problems.push_back(std::move(message));
  };
  if (d.k < 1) fail("k must be at least 1");
  if (d.s < d.k) fail("s must be at least k");
  if (d.vertices && *d.vertices != 2 * d.s) {
    fail("vertex count " + std::to_string(*d.vertices) + " differs from 2s = " + std::to_string(2 * d.s));
  }
  const int expected_edges = 3 * d.s - d.k;
  if (static_cast<int>(d.edges.size()) != expected_edges) {
    fail("edge count " + std::to_string(d.edges.size()) + " differs from 3s - k = " +
         std::to_string(expected_edges));
  }
  std::vector<bool> used(static_cast<std::size_t>(std::max(d.k, 0)), false);
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    const auto& e = d.edges[i];
    const std::string tag = "edge " + std::to_string(i + 1) + ": ";
    if (static_cast<int>(e.cp.size()) != d.k) {
      fail(tag + "expected " + std::to_string(d.k) + " traversal counts");
      continue;
    }
    int total = 0;
    for (int p = 1; p <= d.k; ++p) {
      const int c = e.cp[p - 1];
      if (c < 0 || c > 2) fail(tag + "c_" + std::to_string(p) + " outside {0, 1, 2}");
      if (c != 0 && p != e.p_minus && p != e.p_plus) {
        fail(tag + "c_" + std::to_string(p) + " is non-zero but p is neither p_- nor p_+");
      }
      if (c > 0) used[p - 1] = true;
      total += c;
    }
    if (total != 2) fail(tag + "traversal counts sum to " + std::to_string(total) + ", not 2");
    if (e.p_minus < 1 || e.p_plus > d.k || e.p_minus > e.p_plus) {
      fail(tag + "need 1 <= p_- <= p_+ <= k");
    } else if (total == 2) {
      const bool same = e.p_minus == e.p_plus;
      if (same && e.cp[e.p_minus - 1] != 2) fail(tag + "p_- = p_+ but that path does not traverse it twice");
      if (!same && (e.cp[e.p_minus - 1] != 1 || e.cp[e.p_plus - 1] != 1)) {
        fail(tag + "p_- != p_+ but the two paths do not traverse it once each");
      }
    }
    if (e.length && *e.length < 1) fail(tag + "length must be positive");
  }
  for (int p = 0; p < d.k; ++p) {
    if (!used[p]) fail("path " + std::to_string(p + 1) + " traverses no edge");
  }
  return out;
}

nlohmann::json to_json(const DiagramSpec& d) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : d.edges) {
    nlohmann::json je{{"cp", e.cp}, {"p_minus", e.p_minus}, {"p_plus", e.p_plus}};
    if (e.length) je["length"] = *e.length;
    edges.push_back(je);
  }
  nlohmann::json j{{"k", d.k}, {"s", d.s}, {"orientable", d.orientable}, {"edges", edges}};
  if (!d.name.empty()) j["name"] = d.name;
  if (d.vertices) j["vertices"] = *d.vertices;
  return j;
}

DiagramSpec diagram_from_json(const nlohmann::json& j) {
  DiagramSpec d;
  d.name = j.value("name", "");
  d.k = j.at("k").get<int>();
  d.s = j.at("s").get<int>();
  d.orientable = j.at("orientable").get<bool>();
  if (j.contains("vertices")) d.vertices = j.at("vertices").get<int>();
  for (const auto& je : j.at("edges")) {
    DiagramEdge e;
    e.cp = je.at("cp").get<std::vector<int>>();
    e.p_minus = je.at("p_minus").get<int>();
    e.p_plus = je.at("p_plus").get<int>();
    if (je.contains("length")) e.length = je.at("length").get<int>();
    d.edges.push_back(std::move(e));
  }
  return d;
}

DiagramSpec load_diagram(const std::filesystem::path& path) {
  auto d = diagram_from_json(read_json_file(path));
  if (d.name.empty()) d.name = path.stem().string();
  return d;
}

std::vector<DiagramSpec> load_diagram_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DiagramSpec> out;
  for (const auto& f : files) out.push_back(load_diagram(f));
  return out;
}

PolytopeSlice diagram_polytope(const DiagramSpec& d, std::span<const double> alpha) {
  const auto check = validate_diagram(d);
  if (!check.ok) throw std::invalid_argument("diagram: " + check.problems.front());
  if (static_cast<int>(alpha.size()) != d.k) throw std::invalid_argument("diagram: one alpha per path");
  Eigen::MatrixXd a(d.k, static_cast<Eigen::Index>(d.edges.size()));
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    for (int p = 0; p < d.k; ++p) a(p, static_cast<Eigen::Index>(e)) = d.edges[e].cp[p];
  }
  Eigen::VectorXd b(d.k);
  for (int p = 0; p < d.k; ++p) {
    if (!(alpha[p] > 0)) throw std::invalid_argument("diagram: alpha must be positive");
    b(p) = alpha[p];
  }
  return PolytopeSlice(a, b);
}

IntegralEstimate integral_I(const DiagramSpec& d, std::span<const double> alpha,
                            std::span<const double> s, std::span<const double> t,
                            IntegrationMethod method, const IntegrationBudget& budget) {
  if (static_cast<int>(s.size()) != d.k || static_cast<int>(t.size()) != d.k) {
    throw std::invalid_argument("integral_I: one (s, t) per path");
  }
  const auto slice = diagram_polytope(d, alpha);
  Eigen::VectorXd decay(static_cast<Eigen::Index>(d.edges.size()));
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const int lo = d.edges[e].p_minus - 1, hi = d.edges[e].p_plus - 1;
    decay(static_cast<Eigen::Index>(e)) = std::abs(t[hi] - t[lo]) + std::abs(s[hi] - s[lo]);
  }
  if (method == IntegrationMethod::monte_carlo) {
    if (slice.dimension() > 12) throw std::invalid_argument("integral_I: Monte Carlo limited to dimension 12");
    return integrate_exponential_mc(slice, decay, budget.samples, budget.seed);
  }
  return integrate_exponential_simplex(slice, decay, budget.order);
}

IntegralEstimate psi_sharp(std::span<const DiagramSpec> diagrams, int beta,
                           std::span<const double> alpha, std::span<const double> s,
                           std::span<const double> t, IntegrationMethod method,
                           const IntegrationBudget& budget) {
  if (beta != 1 && beta != 2) throw std::invalid_argument("psi_sharp: beta must be 1 or 2");
  if (beta == 2) {
    for (const auto& d : diagrams) {
      if (!d.orientable) {
        throw std::invalid_argument("psi_sharp: beta = 2 admits only orientable diagrams; '" + d.name +
                                    "' is not orientable");
      }
    }
  }
  IntegralEstimate total;
  double variance = 0;
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    auto local = budget;
    local.seed = budget.seed + i;
    const auto r = integral_I(diagrams[i], alpha, s, t, method, local);
    total.dimension = std::max(total.dimension, r.dimension);
    if (!r.feasible) continue;
    total.value += r.value;
    variance += r.error * r.error;
  }
  total.error = std::sqrt(variance);
  return total;
}

double phi_sharp(const PsiSharpFunction& psi, std::span<const double> alpha, std::size_t nodes) {
  const std::size_t k = alpha.size();
  if (k < 1 || k > 3) throw std::invalid_argument("phi_sharp: k must lie in [1, 3]");
  for (double a : alpha) {
    if (!(a > 0)) throw std::invalid_argument("phi_sharp: alpha must be positive");
  }
  const auto rule = gauss_laguerre(nodes);
  double prefactor = 1;
  for (double a : alpha) prefactor /= std::sqrt(std::numbers::pi * a);

  std::vector<std::size_t> digit(k, 0);
  std::vector<double> argument(k);
  CompensatedSum sum;
  while (true) {
    double weight = 1;
    for (std::size_t p = 0; p < k; ++p) {
      weight *= rule.weights[digit[p]];
      argument[p] = 2 * std::sqrt(alpha[p] * rule.nodes[digit[p]]);
    }
    sum.add(weight * psi(argument));
    std::size_t pos = 0;
    while (pos < k && ++digit[pos] == nodes) digit[pos++] = 0;
    if (pos == k) break;
  }
  return prefactor * sum.value();
}

namespace {

void check_table(const SubsetTable& table, int k, const char* what) {
  if (k < 1 || k > 20) throw std::invalid_argument(std::string(what) + ": k must lie in [1, 20]");
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (!table.contains(mask)) {
      throw std::invalid_argument(std::string(what) + ": missing entry for subset " + std::to_string(mask));
    }
  }
}

std::vector<std::uint32_t> by_size(int k) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  return masks;
}

// sum over proper non-empty I of f(I) f(S \ I).
double cross_terms(const SubsetTable& f, std::uint32_t set) {
  CompensatedSum sum;
  for (std::uint32_t sub = (set - 1) & set; sub != 0; sub = (sub - 1) & set) {
    sum.add(f.at(sub) * f.at(set & ~sub));
  }
  return sum.value();
}

}  // namespace

SubsetTable psi_from_sharp(const SubsetTable& sharp, int k) {
  check_table(sharp, k, "psi_from_sharp");
  if (sharp.at(0) != 1.0) {
    throw std::invalid_argument("psi_from_sharp: psi#(empty) must equal 1 under psi(empty) = 1");
  }
  SubsetTable psi{{0u, 1.0}};
  for (std::uint32_t set : by_size(k)) psi[set] = (sharp.at(set) - cross_terms(psi, set)) / 2;
  return psi;
}

SubsetTable sharp_from_psi(const SubsetTable& psi, int k) {
  check_table(psi, k, "sharp_from_psi");
  SubsetTable sharp{{0u, psi.at(0) * psi.at(0)}};
  for (std::uint32_t set : by_size(k)) {
    sharp[set] = 2 * psi.at(0) * psi.at(set) + cross_terms(psi, set);
  }
  return sharp;
}

}  // namespace cornerlab
