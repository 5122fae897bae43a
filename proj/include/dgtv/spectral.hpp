#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dgtv/graph.hpp"
#include "dgtv/laplacian.hpp"

namespace dgtv {

enum class FilterMethod { exact_eig, linear_solve, lanczos, chebyshev };

FilterMethod parse_filter_method(std::string_view name);
std::string_view to_string(FilterMethod method);

/// How to apply x* = (I + mu L)^{-1} y.
struct FilterSpec {
  double mu = 0.5;
  FilterMethod method = FilterMethod::lanczos;
  std::size_t order = 20;
  double solve_tolerance = 1e-10;

  void validate() const;
};

inline constexpr std::size_t kDenseEigenCap = 1296;

/// f(lambda) = 1 / (1 + mu lambda).
double frequency_response(double mu, double lambda);

/// U f(Lambda) U^T y from a full dense eigendecomposition.
Signal filter_exact_eig(const SparseLaplacian& laplacian, std::span<const double> y,
                        double mu, std::size_t dense_cap = kDenseEigenCap);

/// Conjugate gradients on (I + mu L) x = y until
/// ||(I + mu L) x - y|| <= tol ||y||. Throws if n iterations do not suffice.
Signal filter_linear_solve(const SparseLaplacian& laplacian, std::span<const double> y,
                           double mu, double tol = 1e-10);

/// Dense Cholesky solve of (I + mu L) x = y. Used as the exact reference
/// where a full eigendecomposition is too slow.
Signal filter_direct_solve(const SparseLaplacian& laplacian, std::span<const double> y,
                           double mu, std::size_t dense_cap = kDenseEigenCap);

/// Output of the Lanczos process: H_M = V_M^T L V_M is tridiagonal with
/// `alphas` on the diagonal and `betas` beside it.
struct TridiagonalFactor {
  std::vector<double> alphas;
  std::vector<double> betas;  // alphas.size() - 1 entries
  std::vector<Signal> basis;
  double input_norm = 0.0;

  std::size_t order() const { return alphas.size(); }
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd eigenvalues() const;
};

/// Builds an orthonormal basis of K_M(L, y) with full reorthogonalization.
/// Stops early when the Krylov space is exhausted. `order` is clamped to n.
TridiagonalFactor lanczos_factorize(const SparseLaplacian& laplacian,
                                    std::span<const double> y, std::size_t order);

/// ||y|| V_M f(H_M) e_1.
Signal filter_lanczos(const SparseLaplacian& laplacian, std::span<const double> y,
                      double mu, std::size_t order);

/// Coefficients c_0..c_order of the Chebyshev series of 1 / (1 + mu lambda)
/// on [0, lambda_max], in the convention p(t) = c_0 + sum_k c_k T_k(t).
std::vector<double> chebyshev_coefficients(double mu, double lambda_max,
                                           std::size_t order);

/// Degree-`order` truncated Chebyshev expansion applied by recurrence.
Signal filter_chebyshev(const SparseLaplacian& laplacian, std::span<const double> y,
                        double mu, std::size_t order, double lambda_max);

/// Dispatches on spec.method. Chebyshev uses the Gershgorin bound.
Signal apply_filter(const SparseLaplacian& laplacian, std::span<const double> y,
                    const FilterSpec& spec);

}  // namespace dgtv
