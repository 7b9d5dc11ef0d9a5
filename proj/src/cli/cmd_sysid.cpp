#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/rff.hpp"
#include "akm/serialize.hpp"
#include "akm/sysid.hpp"
#include "akm/train.hpp"

namespace akm::cli {
namespace {

Json complex_list(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const auto& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

void write_response_csv(const std::filesystem::path& path, const CVec& z, const CVec& truth, const CVec& fitted) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "angle,abs_h,arg_h,abs_f,arg_f\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < z.size(); ++k)
    out << std::arg(z(k)) << ',' << std::abs(truth(k)) << ',' << std::arg(truth(k)) << ',' << std::abs(fitted(k)) << ','
        << std::arg(fitted(k)) << '\n';
}

}  // namespace

RunConfig sysid_defaults() {
  return RunConfig({
      {"model", "tm"},             // tm | trig
      {"D", "4"},                  // TM basis size
      {"Q", "200"},                // trigonometric basis size
      {"q", "5000"},               // frequency samples on the unit circle
      {"sampling", "equispaced"},  // equispaced | uniform
      {"seed", "0"},
      {"epochs", "2000"},
      {"batch", "500"},
      {"step_lambda", "0.01"},
      {"step_w", "0.05"},
      {"tol", "1e-12"},
      {"init_radius", "0.5"},  // TM poles start uniform in this disk
      {"trig_sigma", "0.1"},   // spectral init of the trig frequencies: N(0, 1/sigma^2)
  });
}

int cmd_sysid_demo(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const std::string model_name = cfg.get("model");
  if (model_name != "tm" && model_name != "trig") throw ConfigError("key 'model' must be tm or trig, got '" + model_name + "'");
  const std::string sampling_name = cfg.get("sampling");
  if (sampling_name != "equispaced" && sampling_name != "uniform")
    throw ConfigError("key 'sampling' must be equispaced or uniform");
  const std::size_t q = cfg.get_size("q");
  if (q == 0) throw ConfigError("key 'q' must be positive");
  const std::size_t dim = model_name == "tm" ? cfg.get_size("D") : cfg.get_size("Q");
  if (dim == 0) throw ConfigError(std::string("key '") + (model_name == "tm" ? "D" : "Q") + "' must be positive");
  if (model_name == "tm" && dim > 8) throw ConfigError("key 'D' is limited to 8 for pole matching");
  const double radius = cfg.get_double("init_radius");
  if (!(radius >= 0.0 && radius < 1.0)) throw ConfigError("key 'init_radius' must lie in [0, 1)");
  const double trig_sigma = cfg.get_double("trig_sigma");
  if (!(trig_sigma > 0.0)) throw ConfigError("key 'trig_sigma' must be positive");

  AdamConfig adam;
  adam.max_iters = cfg.get_size("epochs");
  adam.batch_size = cfg.get_size("batch");
  adam.step_lambda = cfg.get_double("step_lambda");
  adam.step_w = cfg.get_double("step_w");
  adam.tol = cfg.get_double("tol");
  adam.seed = cfg.get_u64("seed");
  if (adam.batch_size == 0) throw ConfigError("key 'batch' must be positive");
  if (!(adam.step_lambda > 0.0) || !(adam.step_w > 0.0)) throw ConfigError("step sizes must be positive");

  std::filesystem::create_directories(out);
  const LtiSystem sys = benchmark_system();
  const Dataset freq = frequency_dataset(sys, q, adam.seed, sampling_name == "uniform" ? Sampling::Uniform : Sampling::Equispaced);
  write_frequency_csv(out / "frequency_data.csv", freq);

  std::mt19937_64 rng(adam.seed ^ 0x51d0c0deULL);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CMat w(static_cast<Eigen::Index>(dim), 1);
  for (Eigen::Index j = 0; j < w.rows(); ++j) w(j, 0) = {normal(rng), normal(rng)};

  const bool tm = model_name == "tm";
  Dataset train_set = freq;
  std::optional<AdaptiveKernelModel> init;
  if (tm) {
    std::vector<Complex> poles(dim);
    for (auto& a : poles) a = std::polar(radius * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng));
    init.emplace(BasisFamily::tm(std::move(poles)), w);
  } else {
    train_set = make_regression(angle_inputs(freq.inputs.disk()), freq.targets);
    init.emplace(BasisFamily::trig(sample_spectral({trig_sigma, 1, rng()}, dim)), w);
  }

  log << "sysid-demo: model=" << model_name << " dim=" << dim << " q=" << q << " seed=" << adam.seed << '\n';
  const FitResult result = fit(*init, train_set, {LossKind::LeastSquares, 0.0}, adam);
  const AdaptiveKernelModel& model = result.model;
  const CVec fitted = model.scores(train_set.inputs).col(0);
  const double rel_error = (fitted - freq.targets).norm() / freq.targets.norm();
  write_response_csv(out / "response.csv", freq.inputs.disk(), freq.targets, fitted);
  write_loss_csv(out / "loss.csv", result.report.loss_trace);

  Json report = {{"command", "sysid-demo"},
                 {"model", model_name},
                 {"dim", dim},
                 {"q", q},
                 {"seed", adam.seed},
                 {"epochs", adam.max_iters},
                 {"epochs_run", result.report.epochs_run},
                 {"steps", result.report.steps_run},
                 {"stop_reason", to_string(result.report.stop_reason)},
                 {"final_loss", result.report.best_loss},
                 {"best_epoch", result.report.best_epoch},
                 {"relative_error", rel_error},
                 {"true_poles", complex_list(sys.lambdas)},
                 {"wall_seconds", result.report.wall_seconds},
                 {"model_state", to_json(model)}};
  if (tm) {
    const auto& learned = model.family().poles();
    const PoleMatch match = pole_match(learned, sys.lambdas);
    write_pole_csv(out / "poles.csv", learned, sys.lambdas, match);
    report["pole_max_abs_error"] = match.max_abs_error;
    report["learned_poles"] = complex_list(learned);
    log << "  pole max abs error " << match.max_abs_error << '\n';
  } else {
    report["pole_max_abs_error"] = nullptr;
    report["learned_poles"] = nullptr;
  }
  write_json(out / "report.json", report);
  log << "  relative response error " << rel_error << ", loss " << result.report.best_loss << ", "
      << result.report.wall_seconds << " s\n";
  return kOk;
}

}  // namespace akm::cli
