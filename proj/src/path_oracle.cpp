#include "cornerlab/path_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cornerlab/statistics.hpp"

namespace cornerlab {

// ---------------------------------------------------------------- paths

namespace {

void check_guard(double count, const char* what) {
  if (count > kEnumerationGuard) {
    throw std::length_error(std::string(what) + ": enumeration guard exceeded");
  }
}

}  // namespace

void enumerate_closed_paths(std::size_t n_vertices, std::size_t length, const PathVisitor& visit) {
  if (n_vertices < 1 || length < 1) throw std::invalid_argument("closed paths: N and m must be positive");
  check_guard(std::pow(static_cast<double>(n_vertices), static_cast<double>(length)), "closed paths");
  Path u(length + 1, 1);
  while (true) {
    u[length] = u[0];
    visit(u);
    std::size_t pos = 0;
    while (pos < length && u[pos] == n_vertices) u[pos++] = 1;
    if (pos == length) return;
    ++u[pos];
  }
}

std::vector<Path> closed_paths(std::size_t n_vertices, std::size_t length) {
  std::vector<Path> out;
  enumerate_closed_paths(n_vertices, length, [&](std::span<const std::size_t> u) {
    out.emplace_back(u.begin(), u.end());
  });
  return out;
}

bool is_nb_loopless(std::span<const std::size_t> path, BacktrackConvention convention) {
  if (path.size() < 2 || path.front() != path.back()) return false;
  const std::size_t n = path.size() - 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (path[j] == path[j + 1]) return false;
  }
  for (std::size_t j = 0; j + 2 <= n; ++j) {
    if (path[j] == path[j + 2]) return false;
  }
  if (convention == BacktrackConvention::cyclic && n >= 2 && path[n - 1] == path[1]) return false;
  return true;
}

void enumerate_nb_loopless(std::size_t n_vertices, std::size_t length, const PathVisitor& visit,
                           BacktrackConvention convention) {
  if (n_vertices < 1 || length < 1) throw std::invalid_argument("nb paths: N and n must be positive");
  check_guard(std::pow(static_cast<double>(n_vertices) - 1, static_cast<double>(length)), "nb paths");
  Path u(length + 1, 0);
  auto extend = [&](auto&& self, std::size_t pos) -> void {
    if (pos == length) {
      u[length] = u[0];
      if (is_nb_loopless(u, convention)) visit(u);
      return;
    }
    for (std::size_t v = 1; v <= n_vertices; ++v) {
      if (pos >= 1 && v == u[pos - 1]) continue;
      if (pos >= 2 && v == u[pos - 2]) continue;
      u[pos] = v;
      self(self, pos + 1);
    }
  };
  extend(extend, 0);
}

std::vector<Path> nb_loopless_paths(std::size_t n_vertices, std::size_t length,
                                    BacktrackConvention convention) {
  std::vector<Path> out;
  enumerate_nb_loopless(
      n_vertices, length,
      [&](std::span<const std::size_t> u) { out.emplace_back(u.begin(), u.end()); }, convention);
  return out;
}

// ---------------------------------------------------------------- tuples

void PathTuple::validate() const {
  if (paths.size() != bounds.size()) throw std::invalid_argument("path tuple: one bound per path");
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    if (path.size() < 2 || path.front() != path.back()) {
      throw std::invalid_argument("path tuple: paths must be closed");
    }
    for (std::size_t v : path) {
      if (v < 1 || v > bounds[p]) throw std::invalid_argument("path tuple: vertex out of range");
    }
  }
}

EdgeMultiplicity edge_multiplicity(const PathTuple& tuple) {
  EdgeMultiplicity out;
  for (const auto& path : tuple.paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const std::size_t a = path[i], b = path[i + 1];
      ++out.oriented[{a, b}];
      ++out.unordered[{std::min(a, b), std::max(a, b)}];
    }
  }
  return out;
}

bool is_even_tuple(const PathTuple& tuple) {
  const auto m = edge_multiplicity(tuple);
  return std::all_of(m.unordered.begin(), m.unordered.end(),
                     [](const auto& kv) { return kv.second % 2 == 0; });
}

// ---------------------------------------------------------------- expectations

namespace {

struct Factor {
  double time;
  bool conjugated;
};

double double_factorial(std::size_t n) {
  double out = 1;
  for (std::size_t k = n; k > 1; k -= 2) out *= static_cast<double>(k);
  return out;
}

double factorial(std::size_t n) {
  double out = 1;
  for (std::size_t k = 2; k <= n; ++k) out *= static_cast<double>(k);
  return out;
}

// Sum over perfect matchings of prod cov(t_a, t_b) with cov = s2 exp(-|dt|).
double wick_real(const std::vector<double>& t, double s2) {
  const std::size_t c = t.size();
  if (c % 2 == 1) return 0;
  const std::size_t full = (std::size_t{1} << c) - 1;
  std::vector<double> memo(full + 1, -1.0);
  memo[0] = 1;
  auto solve = [&](auto&& self, std::size_t mask) -> double {
    if (memo[mask] >= 0) return memo[mask];
    const int first = std::countr_zero(mask);
    const std::size_t rest = mask & ~(std::size_t{1} << first);
    double total = 0;
    for (std::size_t r = rest; r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      total += s2 * std::exp(-std::abs(t[first] - t[j])) * self(self, rest & ~(std::size_t{1} << j));
    }
    return memo[mask] = total;
  };
  return solve(solve, full);
}

// Permanent of exp(-|a_i - b_j|).
double wick_complex(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t f = a.size();
  std::vector<double> dp(std::size_t{1} << f, 0.0);
  dp[0] = 1;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == 0) continue;
    const auto row = static_cast<std::size_t>(std::popcount(mask));
    if (row == f) continue;
    for (std::size_t j = 0; j < f; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      dp[mask | (std::size_t{1} << j)] += dp[mask] * std::exp(-std::abs(a[row] - b[j]));
    }
  }
  return dp.back();
}

// Moment of one static value carrying `forward` plain and `backward`
// conjugated factors.
double static_moment(const EntryProcessSpec& entries, bool real, double s2, std::size_t forward,
                     std::size_t backward) {
  const std::size_t c = forward + backward;
  if (entries.kind == EntryKind::resampled_unimodular) {
    return real ? (c % 2 == 0 ? 1.0 : 0.0) : (forward == backward ? 1.0 : 0.0);
  }
  if (real) return c % 2 == 0 ? std::pow(s2, static_cast<double>(c / 2)) * double_factorial(c - 1) : 0.0;
  return forward == backward ? factorial(forward) : 0.0;
}

double edge_expectation(std::vector<Factor>& factors, bool diagonal, const EntryProcessSpec& entries) {
  if (factors.empty()) return 1;
  if (diagonal && entries.zero_diagonal) return 0;
  if (factors.size() > kMaxEdgeMultiplicity) {
    throw OracleOutOfScope("oracle: an entry appears more than 16 times in one tuple");
  }
  const bool real = entries.beta == SymmetryClass::orthogonal || diagonal;
  const double s2 = diagonal && entries.beta == SymmetryClass::orthogonal ? 2.0 : 1.0;
  std::sort(factors.begin(), factors.end(),
            [](const Factor& x, const Factor& y) { return x.time < y.time; });
  std::size_t forward = 0;
  for (const auto& f : factors) forward += f.conjugated ? 0 : 1;
  const std::size_t backward = factors.size() - forward;
  if (real ? factors.size() % 2 == 1 : forward != backward) return 0;

  const bool single_time = factors.front().time == factors.back().time;
  if (single_time) return static_moment(entries, real, s2, forward, backward);

  if (entries.kind == EntryKind::gaussian_ou) {
    if (real) {
      std::vector<double> t;
      for (const auto& f : factors) t.push_back(f.time);
      return wick_real(t, s2);
    }
    std::vector<double> a, b;
    for (const auto& f : factors) (f.conjugated ? b : a).push_back(f.time);
    return wick_complex(a, b);
  }

  // Resampled: sum over which gaps between distinct times contain a clock
  // event; the value is static on each run of times without an event.
  struct Group {
    double time;
    std::size_t forward = 0, backward = 0;
  };
  std::vector<Group> groups;
  for (const auto& f : factors) {
    if (groups.empty() || groups.back().time != f.time) groups.push_back({f.time});
    (f.conjugated ? groups.back().backward : groups.back().forward) += 1;
  }
  const std::size_t gaps = groups.size() - 1;
  std::vector<double> stay(gaps);
  for (std::size_t g = 0; g < gaps; ++g) stay[g] = std::exp(-(groups[g + 1].time - groups[g].time));

  CompensatedSum total;
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << gaps); ++pattern) {
    double weight = 1;
    for (std::size_t g = 0; g < gaps; ++g) {
      weight *= (pattern >> g & 1) ? 1 - stay[g] : stay[g];
    }
    std::size_t fw = groups[0].forward, bw = groups[0].backward;
    for (std::size_t g = 0; g < gaps && weight != 0; ++g) {
      if (pattern >> g & 1) {
        weight *= static_moment(entries, real, s2, fw, bw);
        fw = bw = 0;
      }
      fw += groups[g + 1].forward;
      bw += groups[g + 1].backward;
    }
    if (weight != 0) weight *= static_moment(entries, real, s2, fw, bw);
    total.add(weight);
  }
  return total.value();
}

}  // namespace

double tuple_expectation(const PathTuple& tuple, std::span<const double> taus,
                         const EntryProcessSpec& entries) {
  if (taus.size() != tuple.paths.size()) throw std::invalid_argument("tuple_expectation: one time per path");
  std::map<Edge, std::vector<Factor>> groups;
  for (std::size_t p = 0; p < tuple.paths.size(); ++p) {
    const auto& path = tuple.paths[p];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const std::size_t a = path[i], b = path[i + 1];
      groups[{std::min(a, b), std::max(a, b)}].push_back({taus[p], a > b});
    }
  }
  double product = 1;
  for (auto& [edge, factors] : groups) {
    product *= edge_expectation(factors, edge.first == edge.second, entries);
    if (product == 0) return 0;
  }
  return product;
}

// ---------------------------------------------------------------- oracle

namespace {

constexpr double kRawTupleGuard = 1e8;
constexpr std::size_t kClassLengthGuard = 18;

class TupleSum {
 public:
  TupleSum(const MomentSpec& spec, const EntryProcessSpec& entries, const OracleOptions& options,
           bool modified)
      : spec_(spec), entries_(entries), options_(options), modified_(modified) {
    tuple_.bounds = spec.sizes;
    for (std::size_t p = 0; p < spec.k(); ++p) {
      tuple_.paths.emplace_back(static_cast<std::size_t>(spec.exponents[p]) + 1, 0);
    }
    max_bound_ = *std::max_element(spec.sizes.begin(), spec.sizes.end());
    // Loops contribute nothing when the diagonal vanishes, and are excluded
    // outright from the non-backtracking paths.
    no_loops_ = modified || entries.zero_diagonal;
  }

  double run() {
    extend(0, 0, 0);
    return sum_.value();
  }

 private:
  void extend(std::size_t p, std::size_t i, std::size_t labels) {
    if (p == spec_.k()) {
      finish(labels);
      return;
    }
    auto& path = tuple_.paths[p];
    const std::size_t length = path.size() - 1;
    if (i == length) {
      path[length] = path[0];
      if (modified_ ? is_nb_loopless(path, options_.convention)
                    : !(no_loops_ && path[length - 1] == path[0])) {
        extend(p + 1, 0, labels);
      }
      return;
    }
    const bool classes = options_.method == OracleMethod::classes;
    const std::size_t top = classes ? std::min(labels + 1, max_bound_) : spec_.sizes[p];
    for (std::size_t v = 1; v <= top; ++v) {
      if (no_loops_ && i >= 1 && v == path[i - 1]) continue;
      if (modified_ && i >= 2 && v == path[i - 2]) continue;
      path[i] = v;
      extend(p, i + 1, classes ? std::max(labels, v) : labels);
    }
  }

  // Number of injective relabelings of 1..labels that respect every path's
  // vertex bound.
  double class_size(std::size_t labels) const {
    std::vector<std::size_t> bound(labels + 1, max_bound_);
    for (std::size_t p = 0; p < spec_.k(); ++p) {
      for (std::size_t v : tuple_.paths[p]) bound[v] = std::min(bound[v], spec_.sizes[p]);
    }
    std::sort(bound.begin() + 1, bound.end());
    double count = 1;
    for (std::size_t r = 1; r <= labels; ++r) {
      if (bound[r] < r) return 0;
      count *= static_cast<double>(bound[r] - (r - 1));
    }
    return count;
  }

  void finish(std::size_t labels) {
    double weight = 1;
    if (options_.method == OracleMethod::classes) {
      weight = class_size(labels);
      if (weight == 0) return;
    }
    if (options_.skip_odd_tuples && !is_even_tuple(tuple_)) return;
    const double e = tuple_expectation(tuple_, spec_.taus, entries_);
    if (e != 0) sum_.add(weight * e);
  }

  const MomentSpec& spec_;
  const EntryProcessSpec& entries_;
  OracleOptions options_;
  bool modified_;
  bool no_loops_;
  std::size_t max_bound_;
  PathTuple tuple_;
  CompensatedSum sum_;
};

void check_oracle_guards(const MomentSpec& spec, const OracleOptions& options) {
  if (options.method == OracleMethod::raw) {
    double count = 1;
    for (std::size_t p = 0; p < spec.k(); ++p) {
      count *= std::pow(static_cast<double>(spec.sizes[p]), spec.exponents[p]);
    }
    if (count > kRawTupleGuard) throw std::length_error("oracle: raw enumeration guard exceeded");
  } else {
    std::size_t total = 0;
    for (int m : spec.exponents) total += static_cast<std::size_t>(m);
    if (total > kClassLengthGuard) throw std::length_error("oracle: class enumeration guard exceeded");
  }
}

}  // namespace

double exact_mixed_moment(const MomentSpec& spec, const EntryProcessSpec& entries,
                          const OracleOptions& options) {
  spec.validate();
  entries.validate();
  if (spec.kind != MomentKind::plain) throw std::invalid_argument("exact_mixed_moment: plain spec expected");
  check_oracle_guards(spec, options);
  double prefactor = 1;
  for (std::size_t p = 0; p < spec.k(); ++p) {
    prefactor *= std::pow(2 * std::sqrt(static_cast<double>(spec.sizes[p])), -spec.exponents[p]);
  }
  return prefactor * TupleSum(spec, entries, options, false).run();
}

double exact_modified_moment(const MomentSpec& spec, const EntryProcessSpec& entries,
                             const OracleOptions& options) {
  spec.validate();
  entries.validate();
  if (spec.kind != MomentKind::modified) {
    throw std::invalid_argument("exact_modified_moment: modified spec expected");
  }
  if (entries.kind != EntryKind::resampled_unimodular) {
    throw OracleOutOfScope("oracle: the non-backtracking expansion needs unimodular entries");
  }
  check_oracle_guards(spec, options);
  double prefactor = 1;
  for (std::size_t p = 0; p < spec.k(); ++p) {
    prefactor *= std::pow(static_cast<double>(spec.sizes[p] - 2), -spec.exponents[p] / 2.0);
  }
  return prefactor * TupleSum(spec, entries, options, true).run();
}

double exact_moment(const MomentSpec& spec, const EntryProcessSpec& entries, const OracleOptions& options) {
  return spec.kind == MomentKind::plain ? exact_mixed_moment(spec, entries, options)
                                        : exact_modified_moment(spec, entries, options);
}

nlohmann::json oracle_result_json(const MomentSpec& spec, const EntryProcessSpec& entries, double value) {
  return {{"spec", to_json(spec)}, {"entries", to_json(entries)}, {"exact", value}};
}

}  // namespace cornerlab
