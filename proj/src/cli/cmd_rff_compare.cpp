#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/kernel.hpp"
#include "akm/rff.hpp"
#include "akm/serialize.hpp"

namespace akm::cli {

RunConfig rff_compare_defaults() {
  return RunConfig({
      {"sigma", "1.0"},                   // Gaussian kernel bandwidth
      {"N", "5"},                         // input dimension
      {"D", "256,1024,4096,16384"},       // feature counts
      {"pairs", "50"},                    // random (x, t) pairs
      {"seed", "0"},
  });
}

int cmd_rff_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const double sigma = cfg.get_double("sigma");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("key 'sigma' must be positive");
  const std::size_t n = cfg.get_size("N");
  if (n == 0) throw ConfigError("key 'N' must be positive");
  const auto dims = cfg.get_sizes("D");
  for (std::size_t d : dims)
    if (d == 0) throw ConfigError("key 'D': values must be positive");
  const std::size_t pairs = cfg.get_size("pairs");
  if (pairs == 0) throw ConfigError("key 'pairs' must be positive");
  const std::uint64_t seed = cfg.get_u64("seed");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<std::pair<Vec, Vec>> points;
  for (std::size_t p = 0; p < pairs; ++p) {
    Vec x(static_cast<Eigen::Index>(n)), t(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = normal(rng);
      t(i) = normal(rng);
    }
    points.emplace_back(std::move(x), std::move(t));
  }

  std::filesystem::create_directories(out);
  std::ofstream csv(out / "rff_error.csv");
  if (!csv) throw std::runtime_error("cannot write rff_error.csv");
  csv << "D,max_abs_error,max_abs_error_diagonal\n" << std::setprecision(17);
  Json rows = Json::array();
  for (std::size_t d : dims) {
    const Mat lambda = sample_spectral({sigma, n, seed + d}, d);
    double worst = 0.0, worst_diag = 0.0;
    for (const auto& [x, t] : points) {
      worst = std::max(worst, std::abs(rff_kernel_estimate(lambda, x, t) - gaussian_kernel(x, t, sigma)));
      worst_diag = std::max(worst_diag, std::abs(rff_kernel_estimate(lambda, x, x) - 1.0));
    }
    csv << d << ',' << worst << ',' << worst_diag << '\n';
    rows.push_back({{"D", d}, {"max_abs_error", worst}, {"max_abs_error_diagonal", worst_diag}});
    log << "  D=" << d << " max error " << worst << '\n';
  }
  write_json(out / "report.json", {{"command", "rff-compare"}, {"sigma", sigma}, {"N", n}, {"pairs", pairs}, {"rows", rows}});
  return kOk;
}

}  // namespace akm::cli
