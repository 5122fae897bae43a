#include "dgtv/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <numeric>
#include <stdexcept>

#include "dgtv/laplacian.hpp"
#include "dgtv/metrics.hpp"

namespace dgtv {

namespace {

struct TrialInstance {
  SparseLaplacian laplacian;
  Signal y;
};

// A uniform-random patch defines the handcrafted-feature graph and, by
// default, is also the filter input, as in the first block of a layer.
TrialInstance make_trial(const ApproxBenchConfig& config, std::size_t height,
                         std::size_t width, std::size_t trial) {
  std::seed_seq seq{config.seed, static_cast<std::uint64_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Signal patch(height * width);
  for (double& v : patch) v = unit(rng);
  Signal y = patch;
  if (config.independent_input)
    for (double& v : y) v = unit(rng);
  const PatchGraph w = compute_edge_weights(
      build_topology(height, width),
      handcrafted_features(patch, height, width, config.location_scale, config.intensity_scale),
      config.epsilon);
  if (config.reweighted) return {l1_laplacian(reweight_gamma(w, patch, config.rho)), y};
  return {SparseLaplacian::from_graph(w), y};
}

double mse(const Signal& a, const Signal& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

Signal run_method(FilterMethod method, const TrialInstance& t, double mu, std::size_t order) {
  if (method == FilterMethod::lanczos) return filter_lanczos(t.laplacian, t.y, mu, order);
  return filter_chebyshev(t.laplacian, t.y, mu, order, t.laplacian.gershgorin_bound());
}

double median_seconds(FilterMethod method, const TrialInstance& t, double mu, std::size_t order) {
  std::vector<double> samples;
  for (int rep = 0; rep < 5; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const Signal out = run_method(method, t, mu, order);
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::nth_element(samples.begin(), samples.begin() + 2, samples.end());
  return samples[2];
}

}  // namespace

std::pair<std::size_t, std::size_t> grid_shape(std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("node count must be >= 1");
  std::size_t h = static_cast<std::size_t>(std::sqrt(static_cast<double>(nodes)));
  while (h > 1 && nodes % h != 0) --h;
  return {h, nodes / h};
}

std::vector<ApproxBenchRow> bench_approx(const ApproxBenchConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("need at least one trial");
  if (config.nodes > kDenseEigenCap)
    throw std::invalid_argument("node count " + std::to_string(config.nodes) +
                                " above the dense reference cap " +
                                std::to_string(kDenseEigenCap));
  if (!(config.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  std::vector<std::size_t> orders = config.orders;
  if (orders.empty())
    for (std::size_t m = 1; m <= 20; ++m) orders.push_back(m);
  for (std::size_t m : orders)
    if (m < 1) throw std::invalid_argument("orders must be >= 1");

  const auto [height, width] = grid_shape(config.nodes);
  const std::array methods{FilterMethod::lanczos, FilterMethod::chebyshev};
  const std::size_t cells = methods.size() * orders.size();

  // Per-trial errors, reduced afterwards in trial order.
  std::vector<std::vector<double>> errors(config.trials, std::vector<double>(cells));
  std::vector<double> energy(config.trials);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    const TrialInstance t = make_trial(config, height, width, trial);
    const Signal exact = filter_direct_solve(t.laplacian, t.y, config.mu);
    energy[trial] = std::inner_product(t.y.begin(), t.y.end(), t.y.begin(), 0.0) /
                    static_cast<double>(t.y.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
      for (std::size_t oi = 0; oi < orders.size(); ++oi)
        errors[trial][mi * orders.size() + oi] =
            mse(run_method(methods[mi], t, config.mu, orders[oi]), exact);
  }

  double mean_energy = 0.0;
  for (double e : energy) mean_energy += e;
  mean_energy /= static_cast<double>(config.trials);

  std::vector<ApproxBenchRow> rows;
  const TrialInstance timing_instance = make_trial(config, height, width, 0);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      double total = 0.0;
      for (const auto& e : errors) total += e[mi * orders.size() + oi];
      ApproxBenchRow row;
      row.method = methods[mi];
      row.order = orders[oi];
      row.mean_mse = total / static_cast<double>(config.trials);
      row.relative_mse = row.mean_mse / mean_energy;
      if (config.timing)
        row.median_seconds = median_seconds(methods[mi], timing_instance, config.mu, orders[oi]);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_approx_csv(std::ostream& out, const std::vector<ApproxBenchRow>& rows, bool timing) {
  out << "method,order,mean_mse,relative_mse" << (timing ? ",median_seconds" : "") << '\n';
  out << std::setprecision(17);
  for (const ApproxBenchRow& r : rows) {
    out << to_string(r.method) << ',' << r.order << ',' << r.mean_mse << ',' << r.relative_mse;
    if (timing) out << ',' << r.median_seconds.value_or(0.0);
    out << '\n';
  }
}

DenoiseRun denoise_and_score(const ImageBuffer& clean, double sigma_255, std::uint64_t seed,
                             const DenoiserConfig& config, const MuSchedule& mu,
                             const std::vector<FeatureMap>& image_features,
                             const PipelineOptions& options) {
  DenoiseRun run;
  run.noisy = add_awgn(clean, sigma_255, seed);
  run.denoised = denoise_image(run.noisy, config, mu, image_features, options);
  run.report.psnr_in = psnr(clean, run.noisy);
  run.report.psnr_out = psnr(clean, run.denoised);
  run.report.ssim_in = ssim(clean, run.noisy);
  run.report.ssim_out = ssim(clean, run.denoised);
  return run;
}

void write_report(std::ostream& out, const DenoiseReport& report) {
  out << std::setprecision(10);
  out << "psnr_in=" << report.psnr_in << '\n'
      << "psnr_out=" << report.psnr_out << '\n'
      << "ssim_in=" << report.ssim_in << '\n'
      << "ssim_out=" << report.ssim_out << '\n';
}

std::vector<SweepRow> sweep_mu(const ImageBuffer& clean, double sigma_255, std::uint64_t seed,
                               const std::vector<double>& grid, const DenoiserConfig& config,
                               const PipelineOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty mu grid");
  std::vector<SweepRow> rows;
  for (double mu : grid) {
    const DenoiseRun run =
        denoise_and_score(clean, sigma_255, seed, config, MuSchedule::constant(mu), {}, options);
    rows.push_back({mu, run.report});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mu,psnr_in,psnr_out,ssim_in,ssim_out\n" << std::setprecision(10);
  for (const SweepRow& r : rows)
    out << r.mu << ',' << r.report.psnr_in << ',' << r.report.psnr_out << ','
        << r.report.ssim_in << ',' << r.report.ssim_out << '\n';
}

const SweepRow& best_by_psnr(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no sweep rows");
  const SweepRow* best = &rows.front();
  for (const SweepRow& r : rows)
    if (r.report.psnr_out > best->report.psnr_out) best = &r;
  return *best;
}

}  // namespace dgtv
