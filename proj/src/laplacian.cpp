#include "dgtv/laplacian.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgtv {

SparseLaplacian SparseLaplacian::from_graph(const PatchGraph& graph) {
  SparseLaplacian L;
  L.n_ = graph.n;
  L.diag_.assign(graph.n, 0.0);

  std::vector<std::size_t> counts(graph.n, 1);  // diagonal
  for (const Edge& e : graph.edges) {
    if (e.i >= graph.n || e.j >= graph.n || e.i == e.j)
      throw std::invalid_argument("malformed edge in graph");
    if (e.weight < 0.0) throw std::invalid_argument("negative edge weight");
    ++counts[e.i];
    ++counts[e.j];
    L.diag_[e.i] += e.weight;
    L.diag_[e.j] += e.weight;
  }

  L.row_start_.assign(graph.n + 1, 0);
  for (std::size_t r = 0; r < graph.n; ++r) L.row_start_[r + 1] = L.row_start_[r] + counts[r];
  L.columns_.resize(L.row_start_.back());
  L.values_.resize(L.row_start_.back());

  std::vector<std::size_t> fill(L.row_start_.begin(), L.row_start_.end() - 1);
  for (std::size_t r = 0; r < graph.n; ++r) {
    L.columns_[fill[r]] = r;
    L.values_[fill[r]++] = L.diag_[r];
  }
  for (const Edge& e : graph.edges) {
    L.columns_[fill[e.i]] = e.j;
    L.values_[fill[e.i]++] = -e.weight;
    L.columns_[fill[e.j]] = e.i;
    L.values_[fill[e.j]++] = -e.weight;
  }
  return L;
}

void SparseLaplacian::multiply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_ || out.size() != n_)
    throw std::invalid_argument("Laplacian product dimension mismatch");
  for (std::size_t r = 0; r < n_; ++r) {
    double acc = 0.0;
    for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) acc += values_[p] * x[columns_[p]];
    out[r] = acc;
  }
}

Signal SparseLaplacian::multiply(std::span<const double> x) const {
  Signal out(n_);
  multiply(x, out);
  return out;
}

double SparseLaplacian::gershgorin_bound() const {
  double m = 0.0;
  for (double d : diag_) m = std::max(m, d);
  return 2.0 * m;
}

double SparseLaplacian::quadratic_form(std::span<const double> x) const {
  const Signal lx = multiply(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += x[i] * lx[i];
  return sum;
}

Eigen::MatrixXd SparseLaplacian::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                                static_cast<Eigen::Index>(n_));
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p)
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(columns_[p])) += values_[p];
  return dense;
}

SparseLaplacian l1_laplacian(const PatchGraph& gamma_graph) {
  return SparseLaplacian::from_graph(gamma_graph);
}

double glr_value(const SparseLaplacian& laplacian, std::span<const double> x) {
  if (x.size() != laplacian.size()) throw std::invalid_argument("signal length mismatch");
  return laplacian.quadratic_form(x);
}

}  // namespace dgtv
