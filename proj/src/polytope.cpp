#include "cornerlab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "cornerlab/quadrature.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/statistics.hpp"

namespace cornerlab {

namespace {

constexpr double kRelativeTolerance = 1e-10;

Eigen::MatrixXd columns(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
  return out;
}

// Calls visit on every r-subset of {0, ..., n-1}.
template <class Visit>
void for_each_subset(Eigen::Index n, Eigen::Index r, Visit&& visit) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Eigen::Index i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < r; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

PolytopeSlice::PolytopeSlice(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.size() || a_.cols() == 0) throw std::invalid_argument("polytope: shape mismatch");
  if ((a_.array() < 0).any()) throw std::invalid_argument("polytope: coefficients must be non-negative");
  for (Eigen::Index e = 0; e < a_.cols(); ++e) {
    if (!(a_.col(e).array() > 0).any()) throw std::invalid_argument("polytope: unbounded coordinate");
  }
  const double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
  const double tol = kRelativeTolerance * scale;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_);
  const Eigen::Index rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index c = 0; c < a_.cols(); ++c) {
    (c < rank ? basic_ : free_).push_back(perm(c));
  }
  std::sort(basic_.begin(), basic_.end());
  std::sort(free_.begin(), free_.end());
  const Eigen::MatrixXd ab = columns(a_, basic_);
  const Eigen::MatrixXd af = columns(a_, free_);
  const auto solver = ab.colPivHouseholderQr();
  offset_ = solver.solve(b_);
  gain_ = solver.solve(af);
  if ((ab * offset_ - b_).norm() > tol) return;  // inconsistent system: empty

  const auto d = static_cast<Eigen::Index>(free_.size());
  jacobian_ = std::sqrt((Eigen::MatrixXd::Identity(d, d) + gain_.transpose() * gain_).determinant());

  Eigen::VectorXd upper(a_.cols());
  for (Eigen::Index e = 0; e < a_.cols(); ++e) {
    upper(e) = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < a_.rows(); ++p) {
      if (a_(p, e) > 0) upper(e) = std::min(upper(e), b_(p) / a_(p, e));
    }
  }
  upper_.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) upper_(i) = upper(free_[static_cast<std::size_t>(i)]);

  // Basic feasible solutions.
  for_each_subset(a_.cols(), rank, [&](const std::vector<Eigen::Index>& support) {
    const Eigen::MatrixXd as = columns(a_, support);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> local(as);
    if (local.rank() < rank) return;
    const Eigen::VectorXd ws = local.solve(b_);
    if ((as * ws - b_).norm() > tol || (ws.array() < -tol).any()) return;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(a_.cols());
    for (std::size_t c = 0; c < support.size(); ++c) w(support[c]) = std::max(0.0, ws(static_cast<Eigen::Index>(c)));
    for (const auto& v : vertices_) {
      if ((v - w).cwiseAbs().maxCoeff() <= tol) return;
    }
    vertices_.push_back(w);
  });

  feasible_ = !vertices_.empty();
  for (Eigen::Index e = 0; e < a_.cols() && feasible_; ++e) {
    feasible_ = std::any_of(vertices_.begin(), vertices_.end(),
                            [&](const Eigen::VectorXd& v) { return v(e) > tol; });
  }
}

Eigen::VectorXd PolytopeSlice::lift(const Eigen::VectorXd& free) const {
  Eigen::VectorXd w(a_.cols());
  const Eigen::VectorXd basic = offset_ - gain_ * free;
  for (std::size_t i = 0; i < free_.size(); ++i) w(free_[i]) = free(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < basic_.size(); ++i) w(basic_[i]) = basic(static_cast<Eigen::Index>(i));
  return w;
}

Eigen::VectorXd PolytopeSlice::project(const Eigen::VectorXd& ambient) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t i = 0; i < free_.size(); ++i) x(static_cast<Eigen::Index>(i)) = ambient(free_[i]);
  return x;
}

std::vector<std::vector<std::size_t>> PolytopeSlice::triangulate() const {
  if (!feasible_) return {};
  const double tol = kRelativeTolerance * std::max(1.0, b_.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> points;
  for (const auto& v : vertices_) points.push_back(project(v));

  auto affine_dimension = [&](const std::vector<std::size_t>& set) -> Eigen::Index {
    if (set.size() <= 1) return 0;
    Eigen::MatrixXd diff(dimension(), static_cast<Eigen::Index>(set.size() - 1));
    for (std::size_t i = 1; i < set.size(); ++i) {
      diff.col(static_cast<Eigen::Index>(i - 1)) = points[set[i]] - points[set[0]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(diff);
    lu.setThreshold(1e-9);
    return lu.rank();
  };

  // Pulling triangulation: cone from the first vertex over every facet that
  // avoids it.
  auto pull = [&](auto&& self, const std::vector<std::size_t>& face,
                  Eigen::Index dim) -> std::vector<std::vector<std::size_t>> {
    if (dim == 0) return {{face.front()}};
    const std::size_t apex = face.front();
    std::set<std::vector<std::size_t>> facets;
    for (Eigen::Index e = 0; e < a_.cols(); ++e) {
      std::vector<std::size_t> tight;
      for (std::size_t v : face) {
        if (std::abs(vertices_[v](e)) <= tol) tight.push_back(v);
      }
      if (tight.empty() || tight.front() == apex) continue;
      if (static_cast<Eigen::Index>(tight.size()) < dim) continue;
      if (affine_dimension(tight) != dim - 1) continue;
      facets.insert(tight);
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& facet : facets) {
      for (auto simplex : self(self, facet, dim - 1)) {
        simplex.push_back(apex);
        out.push_back(std::move(simplex));
      }
    }
    return out;
  };

  std::vector<std::size_t> all(vertices_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (affine_dimension(all) != dimension()) return {};
  return pull(pull, all, dimension());
}

IntegralEstimate integrate_exponential_mc(const PolytopeSlice& slice, const Eigen::VectorXd& decay,
                                          std::size_t samples, std::uint64_t seed) {
  IntegralEstimate out;
  out.dimension = static_cast<int>(slice.dimension());
  out.feasible = slice.feasible();
  if (!out.feasible) return out;
  if (samples < 2) throw std::invalid_argument("polytope MC: need at least two samples");
  if (slice.dimension() == 0) {
    out.value = std::exp(-decay.dot(slice.lift(Eigen::VectorXd())));
    return out;
  }
  const auto& upper = slice.free_upper();
  const double box = upper.prod() * slice.jacobian();
  StreamEngine engine(derive_key(seed, {0x504f4c59ULL}));
  CompensatedSum sum, squares;
  Eigen::VectorXd x(slice.dimension());
  for (std::size_t n = 0; n < samples; ++n) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = upper(i) * engine.uniform_open();
    const Eigen::VectorXd w = slice.lift(x);
    const double f = (w.array() > 0).all() ? std::exp(-decay.dot(w)) : 0.0;
    sum.add(f);
    squares.add(f * f);
  }
  const double count = static_cast<double>(samples);
  const double mean = sum.value() / count;
  const double variance = std::max(0.0, squares.value() / count - mean * mean) * count / (count - 1);
  out.value = box * mean;
  out.error = box * std::sqrt(variance / count);
  return out;
}

namespace {

double simplex_rule(const PolytopeSlice& slice, const std::vector<std::vector<std::size_t>>& simplices,
                    double c0, const Eigen::VectorXd& c, std::size_t order) {
  const Eigen::Index d = slice.dimension();
  const auto rule = gauss_legendre(order, 0.0, 1.0);
  std::vector<Eigen::VectorXd> points;
  for (const auto& v : slice.vertices()) points.push_back(slice.project(v));

  CompensatedSum total;
  std::vector<std::size_t> digit(static_cast<std::size_t>(d));
  for (const auto& simplex : simplices) {
    const Eigen::VectorXd& x0 = points[simplex[0]];
    Eigen::MatrixXd edges(d, d);
    for (Eigen::Index i = 0; i < d; ++i) edges.col(i) = points[simplex[static_cast<std::size_t>(i + 1)]] - x0;
    const double volume_factor = std::abs(edges.determinant());
    const double base = c0 + c.dot(x0);
    const Eigen::RowVectorXd slope = c.transpose() * edges;

    std::fill(digit.begin(), digit.end(), 0);
    CompensatedSum local;
    while (true) {
      double remaining = 1, jac = 1, weight = 1, exponent = base;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double u = rule.nodes[digit[static_cast<std::size_t>(i)]];
        weight *= rule.weights[digit[static_cast<std::size_t>(i)]];
        exponent += slope(i) * remaining * u;
        if (i + 1 < d) jac *= std::pow(1 - u, static_cast<double>(d - 1 - i));
        remaining *= 1 - u;
      }
      local.add(weight * jac * std::exp(-exponent));
      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == order) digit[pos++] = 0;
      if (pos == digit.size()) break;
    }
    total.add(volume_factor * local.value());
  }
  return total.value() * slice.jacobian();
}

}  // namespace

IntegralEstimate integrate_exponential_simplex(const PolytopeSlice& slice,
                                               const Eigen::VectorXd& decay, std::size_t order) {
  IntegralEstimate out;
  out.dimension = static_cast<int>(slice.dimension());
  out.feasible = slice.feasible();
  if (!out.feasible) return out;
  if (slice.dimension() > 6) throw std::invalid_argument("polytope quadrature: dimension above 6");
  if (order < 3) throw std::invalid_argument("polytope quadrature: order must be at least 3");
  if (slice.dimension() == 0) {
    out.value = std::exp(-decay.dot(slice.lift(Eigen::VectorXd())));
    return out;
  }
  // decay . lift(x) = c0 + c . x
  const Eigen::Index d = slice.dimension();
  const double c0 = decay.dot(slice.lift(Eigen::VectorXd::Zero(d)));
  Eigen::VectorXd c(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    c(i) = decay.dot(slice.lift(Eigen::VectorXd::Unit(d, i))) - c0;
  }
  const auto simplices = slice.triangulate();
  if (simplices.empty()) throw std::runtime_error("polytope quadrature: triangulation failed");
  out.value = simplex_rule(slice, simplices, c0, c, order);
  out.error = std::abs(out.value - simplex_rule(slice, simplices, c0, c, order - 2));
  return out;
}

}  // namespace cornerlab
