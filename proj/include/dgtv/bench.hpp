#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dgtv/denoiser.hpp"
#include "dgtv/image.hpp"

namespace dgtv {

struct ApproxBenchConfig {
  std::size_t trials = 1000;
  std::vector<std::size_t> orders;  // empty means 1..20
  std::size_t nodes = 1296;
  double mu = 0.5;
  std::uint64_t seed = 1;
  double epsilon = 0.3;
  double rho = 0.01;
  double location_scale = 0.1;
  double intensity_scale = 1.0;
  bool timing = false;
  /// Filter with L_Gamma reweighted at the random patch instead of L(W).
  bool reweighted = false;
  /// Draw the filter input independently of the patch that builds the graph.
  bool independent_input = false;
};

struct ApproxBenchRow {
  FilterMethod method = FilterMethod::lanczos;
  std::size_t order = 0;
  double mean_mse = 0.0;
  /// mean_mse divided by the mean per-sample energy of the inputs.
  double relative_mse = 0.0;
  std::optional<double> median_seconds;
};

/// Grid shape used for a node count: the most square factorization.
std::pair<std::size_t, std::size_t> grid_shape(std::size_t nodes);

/// Lanczos and Chebyshev filters against the exact solve on random patch
/// graphs. Rows come Lanczos first, each method in ascending order.
std::vector<ApproxBenchRow> bench_approx(const ApproxBenchConfig& config);

void write_approx_csv(std::ostream& out, const std::vector<ApproxBenchRow>& rows,
                      bool timing);

struct DenoiseReport {
  double psnr_in = 0.0;
  double psnr_out = 0.0;
  double ssim_in = 0.0;
  double ssim_out = 0.0;
};

struct DenoiseRun {
  ImageBuffer noisy;
  ImageBuffer denoised;
  DenoiseReport report;
};

/// Adds AWGN to `clean`, denoises, and scores both images against `clean`.
DenoiseRun denoise_and_score(const ImageBuffer& clean, double sigma_255,
                             std::uint64_t seed, const DenoiserConfig& config,
                             const MuSchedule& mu,
                             const std::vector<FeatureMap>& image_features,
                             const PipelineOptions& options);

void write_report(std::ostream& out, const DenoiseReport& report);

struct SweepRow {
  double mu = 0.0;
  DenoiseReport report;
};

std::vector<SweepRow> sweep_mu(const ImageBuffer& clean, double sigma_255,
                               std::uint64_t seed, const std::vector<double>& grid,
                               const DenoiserConfig& config,
                               const PipelineOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Row with the highest psnr_out; the first one wins ties.
const SweepRow& best_by_psnr(const std::vector<SweepRow>& rows);

}  // namespace dgtv
