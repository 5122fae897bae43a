#include "dgtv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dgtv {

namespace {

using Eigen::Index;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
}

void check_input(const SparseLaplacian& L, std::span<const double> y) {
  if (y.size() != L.size())
    throw std::invalid_argument("signal length " + std::to_string(y.size()) +
                                " does not match Laplacian size " + std::to_string(L.size()));
}

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Index>(v.size())};
}

Signal to_signal(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

FilterMethod parse_filter_method(std::string_view name) {
  if (name == "exact" || name == "exact_eig") return FilterMethod::exact_eig;
  if (name == "cg" || name == "linear_solve") return FilterMethod::linear_solve;
  if (name == "lanczos") return FilterMethod::lanczos;
  if (name == "chebyshev") return FilterMethod::chebyshev;
  throw std::invalid_argument("unknown filter method: " + std::string(name));
}

std::string_view to_string(FilterMethod method) {
  switch (method) {
    case FilterMethod::exact_eig: return "exact";
    case FilterMethod::linear_solve: return "cg";
    case FilterMethod::lanczos: return "lanczos";
    case FilterMethod::chebyshev: return "chebyshev";
  }
  return "?";
}

void FilterSpec::validate() const {
  check_mu(mu);
  if (order < 1) throw std::invalid_argument("approximation order must be >= 1");
  if (!(solve_tolerance > 0.0)) throw std::invalid_argument("solve tolerance must be positive");
}

double frequency_response(double mu, double lambda) { return 1.0 / (1.0 + mu * lambda); }

Signal filter_exact_eig(const SparseLaplacian& laplacian, std::span<const double> y,
                        double mu, std::size_t dense_cap) {
  check_mu(mu);
  check_input(laplacian, y);
  if (laplacian.size() > dense_cap)
    throw std::invalid_argument("graph too large for dense eigendecomposition (" +
                                std::to_string(laplacian.size()) + " > " +
                                std::to_string(dense_cap) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian.to_dense());
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::MatrixXd& U = eig.eigenvectors();
  Eigen::VectorXd spectrum = U.transpose() * as_eigen(y);
  for (Index k = 0; k < spectrum.size(); ++k)
    spectrum[k] *= frequency_response(mu, eig.eigenvalues()[k]);
  return to_signal(U * spectrum);
}

Signal filter_direct_solve(const SparseLaplacian& laplacian, std::span<const double> y,
                           double mu, std::size_t dense_cap) {
  check_mu(mu);
  check_input(laplacian, y);
  if (laplacian.size() > dense_cap)
    throw std::invalid_argument("graph too large for a dense solve");
  Eigen::MatrixXd A = mu * laplacian.to_dense();
  A.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("Cholesky factorization failed");
  return to_signal(llt.solve(as_eigen(y)));
}

Signal filter_linear_solve(const SparseLaplacian& laplacian, std::span<const double> y,
                           double mu, double tol) {
  check_mu(mu);
  check_input(laplacian, y);
  if (!(tol > 0.0)) throw std::invalid_argument("solve tolerance must be positive");
  const std::size_t n = y.size();
  Signal x(n, 0.0);
  const double target = tol * norm(y);
  if (target == 0.0) return x;

  Signal r(y.begin(), y.end());
  Signal p = r;
  Signal q(n);
  double rr = dot(r, r);
  // Rounding loses conjugacy on stiff l1-Laplacians, so n steps are not enough in practice.
  const std::size_t max_iterations = 10 * n + 100;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    laplacian.multiply(p, q);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] + mu * q[i];
    const double alpha = rr / dot(p, q);
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    const double rr_next = dot(r, r);
    if (std::sqrt(rr_next) <= target) return x;
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  throw std::runtime_error("conjugate gradients did not converge in " + std::to_string(max_iterations) +
                           " iterations");
}

Eigen::MatrixXd TridiagonalFactor::dense() const {
  const auto m = static_cast<Index>(alphas.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  for (Index k = 0; k < m; ++k) {
    H(k, k) = alphas[static_cast<std::size_t>(k)];
    if (k + 1 < m) H(k, k + 1) = H(k + 1, k) = betas[static_cast<std::size_t>(k)];
  }
  return H;
}

Eigen::VectorXd TridiagonalFactor::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(as_eigen(alphas), as_eigen(betas), Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

TridiagonalFactor lanczos_factorize(const SparseLaplacian& laplacian,
                                    std::span<const double> y, std::size_t order) {
  check_input(laplacian, y);
  if (order < 1) throw std::invalid_argument("Lanczos order must be >= 1");
  const std::size_t n = y.size();
  const double y_norm = norm(y);
  if (y_norm == 0.0) throw std::invalid_argument("Lanczos input vector is zero");
  order = std::min(order, n);
  // beta measured against the operator scale; below this the Krylov space is exhausted.
  const double breakdown = 1e-12 * laplacian.gershgorin_bound();

  TridiagonalFactor f;
  f.input_norm = y_norm;
  f.basis.reserve(order);
  Signal v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / y_norm;
  Signal w(n);

  for (std::size_t m = 0; m < order; ++m) {
    f.basis.push_back(v);
    const Signal& vm = f.basis.back();
    laplacian.multiply(vm, w);
    const double alpha = dot(vm, w);
    f.alphas.push_back(alpha);
    if (m + 1 == order) break;

    axpy(-alpha, vm, w);
    if (m > 0) axpy(-f.betas.back(), f.basis[m - 1], w);
    for (const Signal& vj : f.basis) axpy(-dot(vj, w), vj, w);
    const double beta = norm(w);
    if (beta <= breakdown) break;
    f.betas.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
  }
  return f;
}

Signal filter_lanczos(const SparseLaplacian& laplacian, std::span<const double> y,
                      double mu, std::size_t order) {
  check_mu(mu);
  check_input(laplacian, y);
  if (order < 1) throw std::invalid_argument("Lanczos order must be >= 1");
  if (norm(y) == 0.0) return Signal(y.size(), 0.0);

  const TridiagonalFactor f = lanczos_factorize(laplacian, y, order);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(as_eigen(f.alphas), as_eigen(f.betas), Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");

  // f(H) e_1 = Q f(Theta) Q^T e_1
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  Eigen::VectorXd coeff = Q.row(0).transpose();
  for (Index k = 0; k < coeff.size(); ++k)
    coeff[k] *= frequency_response(mu, eig.eigenvalues()[k]);
  const Eigen::VectorXd fe1 = Q * coeff;

  Signal out(y.size(), 0.0);
  for (std::size_t m = 0; m < f.order(); ++m)
    axpy(f.input_norm * fe1[static_cast<Index>(m)], f.basis[m], out);
  return out;
}

std::vector<double> chebyshev_coefficients(double mu, double lambda_max, std::size_t order) {
  check_mu(mu);
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  // On t in [-1, 1], f = 1 / (b + a t) with a = mu lambda_max / 2, b = 1 + a,
  // whose series is (1/s) [1 + 2 sum_k (-r)^k T_k(t)], s = sqrt(b^2 - a^2), r = (b - s) / a.
  const double a = 0.5 * mu * lambda_max;
  const double b = 1.0 + a;
  const double s = std::sqrt(1.0 + 2.0 * a);
  const double r = (b - s) / a;
  std::vector<double> c(order + 1);
  c[0] = 1.0 / s;
  double power = 1.0;
  for (std::size_t k = 1; k <= order; ++k) {
    power *= -r;
    c[k] = 2.0 / s * power;
  }
  return c;
}

Signal filter_chebyshev(const SparseLaplacian& laplacian, std::span<const double> y,
                        double mu, std::size_t order, double lambda_max) {
  check_input(laplacian, y);
  if (order < 1) throw std::invalid_argument("Chebyshev order must be >= 1");
  const std::vector<double> c = chebyshev_coefficients(mu, lambda_max, order);
  const std::size_t n = y.size();
  const double scale = 2.0 / lambda_max;

  // T_k of the shifted operator (2/lambda_max) L - I.
  auto shifted = [&](std::span<const double> in, std::span<double> out) {
    laplacian.multiply(in, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * out[i] - in[i];
  };

  Signal prev(y.begin(), y.end());
  Signal curr(n);
  shifted(prev, curr);
  Signal out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c[0] * prev[i] + c[1] * curr[i];

  Signal next(n);
  for (std::size_t k = 2; k <= order; ++k) {
    shifted(curr, next);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 2.0 * next[i] - prev[i];
      out[i] += c[k] * next[i];
    }
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return out;
}

Signal apply_filter(const SparseLaplacian& laplacian, std::span<const double> y,
                    const FilterSpec& spec) {
  spec.validate();
  switch (spec.method) {
    case FilterMethod::exact_eig:
      return filter_exact_eig(laplacian, y, spec.mu);
    case FilterMethod::linear_solve:
      return filter_linear_solve(laplacian, y, spec.mu, spec.solve_tolerance);
    case FilterMethod::lanczos:
      return filter_lanczos(laplacian, y, spec.mu, spec.order);
    case FilterMethod::chebyshev: {
      const double lambda_max = laplacian.gershgorin_bound();
      // An edgeless graph has L = 0 and the filter is the identity.
      if (lambda_max == 0.0) return Signal(y.begin(), y.end());
      return filter_chebyshev(laplacian, y, spec.mu, spec.order, lambda_max);
    }
  }
  throw std::logic_error("unhandled filter method");
}

}  // namespace dgtv
