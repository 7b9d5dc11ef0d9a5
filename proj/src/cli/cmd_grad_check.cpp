#include <ostream>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/serialize.hpp"
#include "akm/train.hpp"

namespace akm::cli {

RunConfig grad_check_defaults() {
  return RunConfig({
      {"trials", "100"},             // random instances per family/loss pair
      {"seed", "0"},
      {"step", "1e-6"},              // central-difference step
      {"smooth_threshold", "1e-5"},  // least squares
      {"hinge_threshold", "1e-4"},   // Crammer-Singer hinge, away from kinks
      {"alpha", "0.1"},              // hinge regularization weight
      {"corrupt_gradient", "false"}, // negative control: perturb the analytic gradient
  });
}

int cmd_grad_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  GradCheckOptions options;
  options.trials = cfg.get_size("trials");
  if (options.trials == 0) throw ConfigError("key 'trials' must be positive");
  options.seed = cfg.get_u64("seed");
  options.step = cfg.get_double("step");
  if (!(options.step > 0.0)) throw ConfigError("key 'step' must be positive");
  options.corrupt = cfg.get_bool("corrupt_gradient");
  const double smooth = cfg.get_double("smooth_threshold");
  const double hinge = cfg.get_double("hinge_threshold");
  const double alpha = cfg.get_double("alpha");
  if (!(alpha >= 0.0)) throw ConfigError("key 'alpha' must be non-negative");

  const std::vector<std::pair<std::string, BasisFamily>> families = {
      {"tm", BasisFamily::tm(std::vector<Complex>(4))},
      {"laguerre", BasisFamily::laguerre({}, 5)},
      {"trig", BasisFamily::trig(Mat::Zero(3, 4))},
      {"arctan", BasisFamily::arctan(Mat::Zero(3, 4))},
  };
  const std::vector<std::pair<std::string, LossSpec>> losses = {
      {"lsq", {LossKind::LeastSquares, 0.0}},
      {"hinge", {LossKind::CrammerSingerHinge, alpha}},
  };

  Json rows = Json::array();
  bool ok = true;
  for (const auto& [fname, family] : families)
    for (const auto& [lname, loss] : losses) {
      const double worst = grad_check(family, loss, options);
      const double threshold = loss.kind == LossKind::LeastSquares ? smooth : hinge;
      const bool pass = worst < threshold;
      ok = ok && pass;
      log << "  " << fname << '/' << lname << ": worst relative error " << worst << (pass ? "" : "  FAIL") << '\n';
      rows.push_back({{"family", fname}, {"loss", lname}, {"worst_relative_error", worst}, {"threshold", threshold}, {"pass", pass}});
    }
  std::filesystem::create_directories(out);
  write_json(out / "report.json", {{"command", "grad-check"}, {"trials", options.trials}, {"results", rows}, {"pass", ok}});
  return ok ? kOk : kGradientFailure;
}

}  // namespace akm::cli
