#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/rff.hpp"
#include "akm/serialize.hpp"
#include "akm/train.hpp"

namespace akm::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& truth, const std::vector<int>& pred,
                                                       int classes) {
  std::vector<std::vector<std::size_t>> c(static_cast<std::size_t>(classes), std::vector<std::size_t>(static_cast<std::size_t>(classes)));
  for (std::size_t k = 0; k < truth.size(); ++k) ++c[static_cast<std::size_t>(truth[k])][static_cast<std::size_t>(pred[k])];
  return c;
}

}  // namespace

RunConfig classifier_defaults() {
  return RunConfig({
      {"data", "covtype.data"},    // UCI covtype CSV, or "synthetic" for the generated stand-in
      {"model", "trig-adaptive"},  // trig-adaptive | trig-rff | arctan
      {"D", "500"},
      {"epochs", "50"},
      {"batch", "8000"},
      {"limit", "50000"},          // seeded row subset before splitting; 0 keeps every row
      {"seed", "0"},
      {"train_fraction", "0.8"},
      {"alpha", "0.1"},            // Frobenius penalty on the weights
      {"step_lambda", "0.01"},
      {"step_w", "0.01"},
      {"init_range", "10"},        // adaptive frequencies start uniform in [-r, r]^N
      {"sigma", "1.0"},            // Gaussian bandwidth of the RFF spectral draw
      {"init_w_scale", "0.001"},   // std of the initial complex weights
  });
}

int cmd_train_classifier(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const std::string model_name = cfg.get("model");
  if (model_name != "trig-adaptive" && model_name != "trig-rff" && model_name != "arctan")
    throw ConfigError("key 'model' must be trig-adaptive, trig-rff or arctan, got '" + model_name + "'");
  const std::size_t dim = cfg.get_size("D");
  if (dim == 0) throw ConfigError("key 'D' must be positive");
  const double fraction = cfg.get_double("train_fraction");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("key 'train_fraction' must lie in (0, 1)");
  const double init_range = cfg.get_double("init_range");
  if (!(init_range > 0.0)) throw ConfigError("key 'init_range' must be positive");
  const double sigma = cfg.get_double("sigma");
  if (!(sigma > 0.0)) throw ConfigError("key 'sigma' must be positive");
  const double w_scale = cfg.get_double("init_w_scale");
  if (!(w_scale >= 0.0)) throw ConfigError("key 'init_w_scale' must be non-negative");
  const LossSpec loss{LossKind::CrammerSingerHinge, cfg.get_double("alpha")};
  if (!(loss.alpha >= 0.0)) throw ConfigError("key 'alpha' must be non-negative");

  AdamConfig adam;
  adam.max_iters = cfg.get_size("epochs");
  adam.batch_size = cfg.get_size("batch");
  adam.step_lambda = cfg.get_double("step_lambda");
  adam.step_w = cfg.get_double("step_w");
  adam.seed = cfg.get_u64("seed");
  adam.tol = 0.0;
  if (adam.batch_size == 0) throw ConfigError("key 'batch' must be positive");
  if (!(adam.step_lambda > 0.0) || !(adam.step_w > 0.0)) throw ConfigError("step sizes must be positive");
  const std::size_t limit = cfg.get_size("limit");

  const std::string source = cfg.get("data");
  Dataset full;
  if (source == "synthetic") {
    full = synthetic_covtype(limit > 0 ? limit : 50000, adam.seed);
  } else {
    if (!std::filesystem::exists(source)) throw MissingDataError("data file '" + source + "' not found");
    full = load_covtype(source);
  }
  if (limit > 0) full = limit_rows(full, limit, adam.seed);
  if (full.size() < 2) throw ConfigError("need at least two rows to split");
  const Split parts = split(full, {fraction, adam.seed});
  const Dataset train = standardize(parts.train, parts.train).data;
  const Dataset test = standardize(parts.train, parts.test).data;
  const auto n = static_cast<Eigen::Index>(train.inputs.dim());
  const int classes = full.num_classes;

  std::mt19937_64 rng(adam.seed ^ 0xc1a55e5ULL);
  Mat lambda;
  if (model_name == "trig-rff") {
    lambda = sample_spectral({sigma, static_cast<std::size_t>(n), rng()}, dim);
  } else {
    std::uniform_real_distribution<double> uniform(-init_range, init_range);
    lambda.resize(n, static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < lambda.cols(); ++j)
      for (Eigen::Index i = 0; i < n; ++i) lambda(i, j) = uniform(rng);
  }
  std::normal_distribution<double> normal(0.0, w_scale);
  CMat w(static_cast<Eigen::Index>(dim), classes);
  for (Eigen::Index j = 0; j < w.rows(); ++j)
    for (Eigen::Index mu = 0; mu < w.cols(); ++mu) w(j, mu) = {normal(rng), normal(rng)};
  const BasisFamily family = model_name == "arctan" ? BasisFamily::arctan(std::move(lambda)) : BasisFamily::trig(std::move(lambda));
  const AdaptiveKernelModel init(family, w, OutputMode::RealPart);

  log << "train-classifier: model=" << model_name << " D=" << dim << " train=" << train.size() << " test=" << test.size()
      << " seed=" << adam.seed << '\n';

  const auto started = Clock::now();
  std::vector<double> elapsed;
  std::vector<std::vector<std::size_t>> best_confusion;
  double best_accuracy = -1.0;
  auto on_epoch = [&](const AdaptiveKernelModel& m, std::size_t epoch) {
    const std::vector<int> pred = predict_labels(m, test.inputs);
    std::size_t correct = 0;
    for (std::size_t k = 0; k < pred.size(); ++k) correct += pred[k] == test.labels[k];
    const double accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
    elapsed.push_back(std::chrono::duration<double>(Clock::now() - started).count());
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_confusion = confusion_matrix(test.labels, pred, classes);
    }
    log << "  epoch " << epoch << " test accuracy " << accuracy << '\n';
    return accuracy;
  };
  const FitResult result = model_name == "trig-rff" ? freeze_lambda_fit(init, train, loss, adam, on_epoch)
                                                     : fit(init, train, loss, adam, on_epoch);
  const TrainReport& rep = result.report;

  std::filesystem::create_directories(out);
  std::ofstream csv(out / "accuracy.csv");
  if (!csv) throw std::runtime_error("cannot write accuracy.csv");
  csv << "epoch,test_accuracy,train_loss,elapsed_seconds\n" << std::setprecision(17);
  for (std::size_t e = 0; e < rep.metric_trace.size(); ++e) {
    csv << e << ',' << rep.metric_trace[e] << ',';
    if (e > 0) csv << rep.loss_trace[e - 1];
    csv << ',' << elapsed[e] << '\n';
  }
  const std::size_t ref = rep.reference_epoch.value_or(0);
  write_json(out / "report.json", {{"command", "train-classifier"},
                                   {"model", model_name},
                                   {"D", dim},
                                   {"epochs", adam.max_iters},
                                   {"batch", adam.batch_size},
                                   {"seed", adam.seed},
                                   {"data", source},
                                   {"rows_train", train.size()},
                                   {"rows_test", test.size()},
                                   {"best_accuracy", rep.best_test_metric.value_or(0.0)},
                                   {"reference_epoch", ref},
                                   {"wall_minutes", elapsed[ref] / 60.0},
                                   {"total_wall_minutes", rep.wall_seconds / 60.0},
                                   {"best_train_loss", rep.best_loss},
                                   {"confusion", best_confusion}});
  log << "  best test accuracy " << rep.best_test_metric.value_or(0.0) << " at epoch " << ref << '\n';
  return kOk;
}

}  // namespace akm::cli
