#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string_view>

#include "dgtv/bench.hpp"
#include "dgtv/denoiser.hpp"
#include "dgtv/graph.hpp"
#include "dgtv/image.hpp"

namespace dgtv::cli {

namespace {

// Thrown for flag values that parse but make no sense together.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = static_cast<T>(std::stod(std::string(s), &used));
      return used == s.size();
    } catch (const std::exception&) {
      return false;
    }
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
  }
}

struct DenoiseFlags {
  std::string input;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t layers = 1;
  std::size_t blocks = 6;
  std::string mu = "0.5";
  std::string features = "handcrafted";
  double epsilon = 0.3;
  double rho = 0.01;
  std::string solver = "lanczos";
  std::size_t order = 20;
  double tolerance = 1e-10;
  double location_scale = 0.1;
  double intensity_scale = 1.0;
  std::size_t patch_size = 36;
  std::size_t stride = 36;
  std::size_t threads = 1;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--input", input, "Clean input image (PGM/PPM)")->required();
    cmd.add_option("--sigma", sigma, "AWGN standard deviation on the 0-255 scale")
        ->capture_default_str();
    cmd.add_option("--seed", seed, "Noise seed")->capture_default_str();
    cmd.add_option("--layers", layers, "Cascaded layers T")->capture_default_str();
    cmd.add_option("--blocks", blocks, "Blocks per layer B")->capture_default_str();
    cmd.add_option("--epsilon", epsilon, "Gaussian kernel width")->capture_default_str();
    cmd.add_option("--rho", rho, "Floor on |x_i - x_j| in the reweighting")->capture_default_str();
    cmd.add_option("--solver", solver, "exact | cg | lanczos | chebyshev")->capture_default_str();
    cmd.add_option("--order", order, "Lanczos/Chebyshev order M")->capture_default_str();
    cmd.add_option("--tolerance", tolerance, "Relative residual for --solver cg")
        ->capture_default_str();
    cmd.add_option("--features", features,
                   "'handcrafted' or DGTVFEAT path(s), comma-separated, one per layer")
        ->capture_default_str();
    cmd.add_option("--location-scale", location_scale, "Handcrafted location feature scale")
        ->capture_default_str();
    cmd.add_option("--intensity-scale", intensity_scale, "Handcrafted intensity feature scale")
        ->capture_default_str();
    cmd.add_option("--patch-size", patch_size)->capture_default_str();
    cmd.add_option("--stride", stride)->capture_default_str();
    cmd.add_option("--threads", threads, "Patch workers (0 = all cores)")->capture_default_str();
  }

  DenoiserConfig config() const {
    DenoiserConfig c;
    c.layers = layers;
    c.blocks_per_layer = blocks;
    c.epsilon = epsilon;
    c.rho = rho;
    c.location_scale = location_scale;
    c.intensity_scale = intensity_scale;
    try {
      c.filter.method = parse_filter_method(solver);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    c.filter.order = order;
    c.filter.solve_tolerance = tolerance;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }

  PipelineOptions pipeline() const {
    if (patch_size == 0 || stride == 0) throw UsageError("patch size and stride must be >= 1");
    if (stride > patch_size) throw UsageError("stride larger than patch size leaves gaps");
    return {patch_size, stride, threads};
  }

  std::vector<FeatureMap> feature_maps() const {
    if (features == "handcrafted") return {};
    std::vector<FeatureMap> maps;
    for (const std::string& path : split(features, ',')) maps.push_back(read_feature_map(path));
    return maps;
  }

  MuSchedule mu_schedule() const {
    double value = 0.0;
    if (parse_number(mu, value)) {
      if (!(value > 0.0)) throw UsageError("--mu must be positive");
      return MuSchedule::constant(value);
    }
    return MuSchedule::from_values(load_mu(mu));
  }
};

int cmd_denoise(const DenoiseFlags& flags, const std::string& output,
                const std::string& noisy_output, std::ostream& out) {
  const DenoiserConfig config = flags.config();
  const PipelineOptions options = flags.pipeline();
  if (!(flags.sigma >= 0.0)) throw UsageError("--sigma must be >= 0");
  const ImageBuffer clean = load_image(flags.input);
  const DenoiseRun run = denoise_and_score(clean, flags.sigma, flags.seed, config,
                                           flags.mu_schedule(), flags.feature_maps(), options);
  save_image(run.denoised, output);
  if (!noisy_output.empty()) save_image(run.noisy, noisy_output);
  write_report(out, run.report);
  return kOk;
}

int cmd_sweep_mu(const DenoiseFlags& flags, const std::string& grid_text,
                 const std::string& output, std::ostream& out) {
  const DenoiserConfig config = flags.config();
  const PipelineOptions options = flags.pipeline();
  std::vector<double> grid;
  try {
    grid = parse_grid(grid_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ImageBuffer clean = load_image(flags.input);
  const auto rows = sweep_mu(clean, flags.sigma, flags.seed, grid, config, options);
  if (output.empty()) {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream file(output);
    if (!file) throw std::runtime_error("cannot open " + output);
    write_sweep_csv(file, rows);
  }
  return kOk;
}

int cmd_bench_approx(ApproxBenchConfig config, const std::string& orders_text,
                     const std::string& output, std::ostream& out) {
  try {
    config.orders = parse_orders(orders_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (config.nodes > kDenseEigenCap)
    throw UsageError("--nodes above the dense reference cap of " + std::to_string(kDenseEigenCap));
  if (config.trials == 0 || config.nodes == 0 || !(config.mu > 0.0))
    throw UsageError("--trials, --nodes and --mu must be positive");
  const auto rows = bench_approx(config);
  if (output.empty()) {
    write_approx_csv(out, rows, config.timing);
  } else {
    std::ofstream file(output);
    if (!file) throw std::runtime_error("cannot open " + output);
    write_approx_csv(file, rows, config.timing);
  }
  return kOk;
}

}  // namespace

std::vector<std::size_t> parse_orders(const std::string& text) {
  std::vector<std::size_t> orders;
  for (const std::string& part : split(text, ',')) {
    const auto dash = part.find('-');
    std::size_t lo = 0;
    std::size_t hi = 0;
    const bool ok = dash == std::string::npos
                        ? parse_number(std::string_view(part), lo) && (hi = lo, true)
                        : parse_number(std::string_view(part).substr(0, dash), lo) &&
                              parse_number(std::string_view(part).substr(dash + 1), hi);
    if (!ok || lo < 1 || hi < lo) throw std::invalid_argument("bad order list: " + text);
    for (std::size_t m = lo; m <= hi; ++m) orders.push_back(m);
  }
  return orders;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const std::string& part : split(text, ',')) {
    double v = 0.0;
    if (!parse_number(std::string_view(part), v) || !(v > 0.0))
      throw std::invalid_argument("bad mu grid: " + text);
    grid.push_back(v);
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph total variation image denoiser"};
  app.require_subcommand(1);

  DenoiseFlags denoise_flags;
  std::string output;
  std::string noisy_output;
  auto* denoise = app.add_subcommand("denoise", "Add AWGN to an image, denoise it, report metrics");
  denoise_flags.add_to(*denoise);
  denoise->add_option("--mu", denoise_flags.mu, "Scalar mu or DGTVMU__ file")
      ->capture_default_str();
  denoise->add_option("--output", output, "Denoised image path")->required();
  denoise->add_option("--noisy-output", noisy_output, "Optional path for the noisy image");

  DenoiseFlags sweep_flags;
  sweep_flags.sigma = 25.0;
  std::string grid_text = "0.01,0.03,0.1,0.3,1,3,10";
  std::string sweep_output;
  auto* sweep = app.add_subcommand("sweep-mu", "PSNR/SSIM of the denoiser over a grid of mu");
  sweep_flags.add_to(*sweep);
  sweep->add_option("--mu-grid", grid_text, "Comma-separated mu values")->capture_default_str();
  sweep->add_option("--output", sweep_output, "CSV path (default: stdout)");

  ApproxBenchConfig bench_config;
  std::string orders_text = "1-20";
  std::string bench_output;
  auto* bench = app.add_subcommand("bench-approx",
                                   "Lanczos vs Chebyshev error against the exact graph filter");
  bench->add_option("--trials", bench_config.trials)->capture_default_str();
  bench->add_option("--orders", orders_text, "e.g. 1-20 or 1,2,5")->capture_default_str();
  bench->add_option("--nodes", bench_config.nodes, "Nodes per random grid graph")
      ->capture_default_str();
  bench->add_option("--mu", bench_config.mu)->capture_default_str();
  bench->add_option("--seed", bench_config.seed)->capture_default_str();
  bench->add_option("--epsilon", bench_config.epsilon)->capture_default_str();
  bench->add_option("--rho", bench_config.rho)->capture_default_str();
  bench->add_flag("--timing", bench_config.timing, "Add a median_seconds column");
  bench->add_flag("--reweighted", bench_config.reweighted,
                  "Use the l1-Laplacian at the random patch (with --rho)");
  bench->add_flag("--independent-input", bench_config.independent_input,
                  "Filter a second random signal instead of the graph's own patch");
  bench->add_option("--output", bench_output, "CSV path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (denoise->parsed()) return cmd_denoise(denoise_flags, output, noisy_output, out);
    if (sweep->parsed()) return cmd_sweep_mu(sweep_flags, grid_text, sweep_output, out);
    return cmd_bench_approx(bench_config, orders_text, bench_output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace dgtv::cli
