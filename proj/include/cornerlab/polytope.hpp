#pragma once

// Integration of exp(-d . w) over the slice { w > 0 : A w = b } with respect
// to its Hausdorff (Euclidean surface) measure.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cornerlab {

class PolytopeSlice {
 public:
  PolytopeSlice(Eigen::MatrixXd a, Eigen::VectorXd b);

  Eigen::Index ambient_dimension() const { return a_.cols(); }
  /// Dimension of the affine solution set of A w = b.
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(free_.size()); }

  /// Whether the set of strictly positive solutions is non-empty.
  bool feasible() const { return feasible_; }

  /// Vertices of the closed slice, in ambient coordinates.
  const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }

  /// Ambient point from free coordinates.
  Eigen::VectorXd lift(const Eigen::VectorXd& free) const;
  Eigen::VectorXd project(const Eigen::VectorXd& ambient) const;

  /// Hausdorff measure per unit Lebesgue measure of the free coordinates.
  double jacobian() const { return jacobian_; }

  /// Upper bounds of the free coordinates over the slice.
  const Eigen::VectorXd& free_upper() const { return upper_; }

  /// Simplices (each a list of vertex indices) triangulating the slice.
  std::vector<std::vector<std::size_t>> triangulate() const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::vector<Eigen::Index> free_, basic_;
  Eigen::VectorXd offset_;  // basic coordinates at free = 0
  Eigen::MatrixXd gain_;    // basic = offset_ - gain_ * free
  Eigen::VectorXd upper_;
  double jacobian_ = 1;
  bool feasible_ = false;
  std::vector<Eigen::VectorXd> vertices_;
};

struct IntegralEstimate {
  bool feasible = true;
  double value = 0;
  double error = 0;
  int dimension = 0;
};

/// Monte Carlo: uniform samples of the free coordinates in their bounding
/// box; points with a non-positive coordinate are rejected.
IntegralEstimate integrate_exponential_mc(const PolytopeSlice& slice, const Eigen::VectorXd& decay,
                                          std::size_t samples, std::uint64_t seed);

/// Tensor Gauss-Legendre on every simplex of a pulling triangulation, mapped
/// by collapsed coordinates. The error is the change from order - 2.
IntegralEstimate integrate_exponential_simplex(const PolytopeSlice& slice,
                                               const Eigen::VectorXd& decay, std::size_t order);

}  // namespace cornerlab
