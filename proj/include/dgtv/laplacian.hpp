#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dgtv/graph.hpp"

namespace dgtv {

/// Symmetric sparse Laplacian in CSR form. Both triangles and the diagonal
/// are stored so that a product is a single row sweep.
class SparseLaplacian {
 public:
  SparseLaplacian() = default;

  /// diag(W 1) - W for the (nonnegative) weights of `graph`.
  static SparseLaplacian from_graph(const PatchGraph& graph);

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  /// out = L x. `out` must not alias `x`.
  void multiply(std::span<const double> x, std::span<double> out) const;
  Signal multiply(std::span<const double> x) const;

  double diagonal(std::size_t row) const { return diag_[row]; }

  /// 2 * max_i L_ii, an upper bound on the largest eigenvalue.
  double gershgorin_bound() const;

  /// x^T L x.
  double quadratic_form(std::span<const double> x) const;

  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
  std::vector<double> diag_;
};

/// L_Gamma = diag(Gamma 1) - Gamma. Rejects negative weights.
SparseLaplacian l1_laplacian(const PatchGraph& gamma_graph);

/// x^T L x through the matrix.
double glr_value(const SparseLaplacian& laplacian, std::span<const double> x);

}  // namespace dgtv
