#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "dgtv/graph.hpp"
#include "dgtv/laplacian.hpp"
#include "oracles.hpp"

using namespace dgtv;
using dgtv::testing::random_instance;
using dgtv::testing::uniform_signal;

namespace {

std::vector<std::size_t> degrees(const PatchGraph& g) {
  std::vector<std::size_t> d(g.n, 0);
  for (const Edge& e : g.edges) {
    ++d[e.i];
    ++d[e.j];
  }
  return d;
}

PatchGraph two_node(double w) {
  PatchGraph g;
  g.n = 2;
  g.height = 1;
  g.width = 2;
  g.edges = {{0, 1, w}};
  return g;
}

}  // namespace

TEST_CASE("build_topology enumerates the 8-neighborhood") {
  CHECK(build_topology(1, 1).edges.empty());
  CHECK(build_topology(2, 2).edges.size() == 6);
  CHECK(build_topology(36, 36).edges.size() == 4970);
  CHECK(oracle::brute_force_grid_edges(36, 36) == 4970);

  for (auto [h, w] : {std::pair{1ul, 7ul}, {5ul, 1ul}, {3ul, 4ul}, {6ul, 6ul}, {9ul, 2ul}})
    CHECK(build_topology(h, w).edges.size() == oracle::brute_force_grid_edges(h, w));

  const PatchGraph g = build_topology(5, 6);
  const auto d = degrees(g);
  CHECK(d[0] == 3);          // corner
  CHECK(d[2] == 5);          // top border
  CHECK(d[6 + 2] == 8);      // interior
  CHECK(d[29] == 3);         // bottom-right corner
  for (const Edge& e : g.edges) {
    CHECK(e.i < e.j);
    CHECK(e.weight == 1.0);
  }

  CHECK_THROWS_AS(build_topology(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_topology(3, 0), std::invalid_argument);
}

TEST_CASE("compute_edge_weights applies the Gaussian kernel") {
  SUBCASE("identical features give unit weights") {
    FeatureMap f{2, 3, 2, std::vector<double>(12, 0.7)};
    for (const Edge& e : compute_edge_weights(build_topology(2, 3), f, 0.3).edges)
      CHECK(e.weight == 1.0);
  }
  SUBCASE("squared distance equal to epsilon^2 gives 1/e") {
    FeatureMap f{1, 2, 2, {0.0, 0.0, 0.3 * 0.6, 0.3 * 0.8}};
    const auto g = compute_edge_weights(build_topology(1, 2), f, 0.3);
    CHECK(g.edges[0].weight == doctest::Approx(0.36787944117144233).epsilon(1e-12));
  }
  SUBCASE("random 3x3 map matches a per-edge evaluation exactly") {
    std::mt19937_64 rng(11);
    FeatureMap f{3, 3, 3, uniform_signal(rng, 27, -1.0, 1.0)};
    const auto g = compute_edge_weights(build_topology(3, 3), f, 0.3);
    for (const Edge& e : g.edges) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double d = f.values[3 * e.i + k] - f.values[3 * e.j + k];
        d2 += d * d;
      }
      CHECK(e.weight == std::exp(-d2 * (1.0 / (0.3 * 0.3))));
      CHECK(e.weight > 0.0);
      CHECK(e.weight <= 1.0);
    }
  }
  SUBCASE("errors") {
    FeatureMap f{2, 2, 1, {0.0, 1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(compute_edge_weights(build_topology(2, 2), f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_edge_weights(build_topology(2, 3), f, 0.3), std::invalid_argument);
    f.values[2] = std::nan("");
    CHECK_THROWS_AS(compute_edge_weights(build_topology(2, 2), f, 0.3), std::invalid_argument);
  }
}

TEST_CASE("handcrafted_features") {
  SUBCASE("constant patch without location term yields a complete unit graph") {
    const Signal patch(16, 0.4);
    const auto f = handcrafted_features(patch, 4, 4, 0.0, 1.0);
    for (const Edge& e : compute_edge_weights(build_topology(4, 4), f, 0.3).edges)
      CHECK(e.weight == 1.0);
  }
  SUBCASE("2x1 patch with intensities 0 and 1") {
    const auto f = handcrafted_features(Signal{0.0, 1.0}, 2, 1, 0.0, 1.0);
    double d2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) d2 += std::pow(f.at(0)[k] - f.at(1)[k], 2);
    CHECK(d2 == 1.0);
  }
  SUBCASE("4x4 ramp matches the per-pixel formula") {
    Signal ramp(16);
    for (std::size_t p = 0; p < 16; ++p) ramp[p] = static_cast<double>(p) / 15.0;
    const auto f = handcrafted_features(ramp, 4, 4, 0.1, 2.0);
    REQUIRE(f.k == 3);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        const auto v = f.at(r * 4 + c);
        CHECK(v[0] == static_cast<double>(r) / 4.0 * 0.1);
        CHECK(v[1] == static_cast<double>(c) / 4.0 * 0.1);
        CHECK(v[2] == ramp[r * 4 + c] * 2.0);
      }
  }
}

TEST_CASE("reweight_gamma") {
  SUBCASE("flat estimate hits the rho floor") {
    PatchGraph g = build_topology(3, 3);
    for (std::size_t k = 0; k < g.edges.size(); ++k) g.edges[k].weight = 0.1 * (k % 7 + 1) / 7.0;
    const auto gamma = reweight_gamma(g, Signal(9, 0.25), 0.01);
    for (std::size_t k = 0; k < g.edges.size(); ++k)
      CHECK(gamma.edges[k].weight == g.edges[k].weight / 0.01);
  }
  SUBCASE("direct arithmetic") {
    CHECK(reweight_gamma(two_node(0.5), Signal{0.0, 0.25}, 0.01).edges[0].weight == 2.0);
  }
  SUBCASE("rho must be positive") {
    CHECK_THROWS_AS(reweight_gamma(two_node(0.5), Signal{0.0, 0.25}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(reweight_gamma(two_node(0.5), Signal{0.0}, 0.1), std::invalid_argument);
  }
  SUBCASE("weight bound Gamma in [0, w / rho]") {
    std::mt19937_64 rng(3);
    const auto inst = random_instance(rng, 6, 7);
    const auto gamma = reweight_gamma(inst.weights, uniform_signal(rng, 42), 0.01);
    for (std::size_t k = 0; k < gamma.edges.size(); ++k) {
      CHECK(gamma.edges[k].weight >= 0.0);
      CHECK(gamma.edges[k].weight <= inst.weights.edges[k].weight / 0.01);
    }
  }
}

TEST_CASE("surrogate identity: Gamma(x) (x_i - x_j)^2 equals w |x_i - x_j|") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(rng, 5, 5);
    // Gaps of at least 0.05 clear rho = 0.01.
    Signal x(25);
    for (std::size_t p = 0; p < 25; ++p) x[p] = 0.1 * static_cast<double>(p) + 0.04 * (trial % 3);
    std::shuffle(x.begin(), x.end(), rng);
    const auto gamma = reweight_gamma(inst.weights, x, 0.01);
    CHECK(glr_value(gamma, x) == doctest::Approx(gtv_value(inst.weights, x)).epsilon(1e-12));
  }
}

TEST_CASE("l1_laplacian structure") {
  SUBCASE("two nodes") {
    const auto L = l1_laplacian(two_node(0.75)).to_dense();
    CHECK(L(0, 0) == 0.75);
    CHECK(L(1, 1) == 0.75);
    CHECK(L(0, 1) == -0.75);
    CHECK(L(1, 0) == -0.75);
  }
  SUBCASE("random 3x3 grid: zero row sums, symmetric, PSD by dense eigensolver") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(rng, 3, 3);
      const auto gamma = reweight_gamma(inst.weights, uniform_signal(rng, 9), 0.01);
      const auto L = l1_laplacian(gamma);
      const Eigen::MatrixXd D = L.to_dense();
      CHECK((D - oracle::dense_laplacian(gamma)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Signal ones(9, 1.0);
      for (double v : L.multiply(ones)) CHECK(std::abs(v) <= 1e-9);
      for (Eigen::Index i = 0; i < 9; ++i)
        for (Eigen::Index j = 0; j < 9; ++j)
          if (i != j) CHECK(D(i, j) <= 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(D);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
  }
  SUBCASE("negative weights are rejected") {
    CHECK_THROWS_AS(l1_laplacian(two_node(-0.1)), std::invalid_argument);
  }
  SUBCASE("Gershgorin bound dominates the spectrum") {
    std::mt19937_64 rng(21);
    const auto inst = random_instance(rng, 4, 5);
    const auto L = l1_laplacian(reweight_gamma(inst.weights, inst.patch, 0.01));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L.to_dense());
    CHECK(eig.eigenvalues().maxCoeff() <= L.gershgorin_bound() + 1e-12);
  }
}

TEST_CASE("glr_value and gtv_value") {
  CHECK(glr_value(two_node(1.0), Signal{0.0, 1.0}) == 1.0);
  CHECK(gtv_value(two_node(0.5), Signal{0.0, 2.0}) == 1.0);
  const auto g = build_topology(4, 4);
  CHECK(glr_value(g, Signal(16, 0.3)) == 0.0);
  CHECK(gtv_value(g, Signal(16, 0.3)) == 0.0);
  CHECK(glr_value(SparseLaplacian::from_graph(g), Signal(16, 0.3)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(glr_value(g, Signal(15, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(gtv_value(g, Signal(17, 0.0)), std::invalid_argument);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = random_instance(rng, 5, 6);
    const Signal x = uniform_signal(rng, 30, -2.0, 2.0);
    // Both sides of x^T L x = sum w (x_j - x_i)^2.
    const double edge_sum = glr_value(inst.weights, x);
    CHECK(glr_value(SparseLaplacian::from_graph(inst.weights), x) ==
          doctest::Approx(edge_sum).epsilon(1e-10));
    CHECK(edge_sum >= 0.0);
    // GTV against a dense all-pairs loop.
    const Eigen::MatrixXd L = oracle::dense_laplacian(inst.weights);
    double brute = 0.0;
    for (Eigen::Index i = 0; i < 30; ++i)
      for (Eigen::Index j = i + 1; j < 30; ++j) brute += -L(i, j) * std::abs(x[j] - x[i]);
    CHECK(gtv_value(inst.weights, x) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("permutation equivariance") {
  std::mt19937_64 rng(17);
  const auto inst = random_instance(rng, 4, 4);
  const Signal x = uniform_signal(rng, 16);
  std::vector<std::size_t> perm(16);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  PatchGraph relabeled = inst.weights;
  for (Edge& e : relabeled.edges) {
    e.i = perm[e.i];
    e.j = perm[e.j];
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  Signal px(16);
  for (std::size_t i = 0; i < 16; ++i) px[perm[i]] = x[i];

  CHECK(glr_value(relabeled, px) == doctest::Approx(glr_value(inst.weights, x)).epsilon(1e-12));
  CHECK(gtv_value(relabeled, px) == doctest::Approx(gtv_value(inst.weights, x)).epsilon(1e-12));

  const Eigen::MatrixXd L = l1_laplacian(inst.weights).to_dense();
  const Eigen::MatrixXd PL = l1_laplacian(relabeled).to_dense();
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      CHECK(std::abs(PL(perm[i], perm[j]) - L(i, j)) <= 1e-14);
}

TEST_CASE("graph construction is deterministic") {
  std::mt19937_64 a(99), b(99);
  const auto g1 = random_instance(a, 6, 6);
  const auto g2 = random_instance(b, 6, 6);
  const auto r1 = reweight_gamma(g1.weights, g1.patch, 0.01);
  const auto r2 = reweight_gamma(g2.weights, g2.patch, 0.01);
  REQUIRE(r1.edges.size() == r2.edges.size());
  for (std::size_t k = 0; k < r1.edges.size(); ++k) CHECK(r1.edges[k].weight == r2.edges[k].weight);
}

TEST_CASE("DGTVFEAT transport") {
  const auto dir = std::filesystem::temp_directory_path() / "dgtv_graph_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "f.feat";

  std::mt19937_64 rng(4);
  FeatureMap f{3, 5, 3, {}};
  for (float v : std::vector<float>{0.5f, -1.25f}) f.values.push_back(v);
  std::uniform_real_distribution<float> u(-3.0f, 3.0f);
  while (f.values.size() < 45) f.values.push_back(u(rng));
  write_feature_map(f, path);
  CHECK(std::filesystem::file_size(path) == 8 + 16 + 45 * 4);
  const FeatureMap back = read_feature_map(path);
  CHECK(back.height == 3);
  CHECK(back.width == 5);
  CHECK(back.k == 3);
  CHECK(back.values == f.values);

  SUBCASE("byte layout is little-endian") {
    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
    CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "DGTVFEAT");
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 3);
    CHECK(bytes[16] == 5);
    // 0.5f = 0x3F000000
    CHECK(bytes[24] == 0x00);
    CHECK(bytes[27] == 0x3F);
  }
  SUBCASE("rejects bad magic, version and truncation") {
    std::string bytes;
    {
      std::ifstream in(path, std::ios::binary);
      bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto write = [&](const std::string& data) {
      std::ofstream(path, std::ios::binary | std::ios::trunc) << data;
    };
    std::string bad = bytes;
    bad[0] = 'X';
    write(bad);
    CHECK_THROWS_AS(read_feature_map(path), std::runtime_error);
    bad = bytes;
    bad[8] = 2;
    write(bad);
    CHECK_THROWS_AS(read_feature_map(path), std::runtime_error);
    write(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_feature_map(path), std::runtime_error);
  }
  SUBCASE("crop") {
    const FeatureMap c = crop_features(f, 1, 2, 2, 3);
    CHECK(c.height == 2);
    CHECK(c.width == 3);
    CHECK(c.at(0)[0] == f.at(1 * 5 + 2)[0]);
    CHECK(c.at(5)[2] == f.at(2 * 5 + 4)[2]);
    CHECK_THROWS_AS(crop_features(f, 2, 0, 2, 2), std::invalid_argument);
  }
}
