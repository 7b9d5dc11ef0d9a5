#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "akm/data.hpp"
#include "akm/model.hpp"

namespace akm {

enum class LossKind { LeastSquares, CrammerSingerHinge };

struct LossSpec {
  LossKind kind = LossKind::LeastSquares;
  /// Weight of the Frobenius-norm penalty alpha * ||W||_F (hinge only).
  double alpha = 0.0;
};

enum class OptimizerKind { Adam, GradientDescent };

struct AdamConfig {
  double step_lambda = 1e-2;
  double step_w = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  /// Stop once ||g_Lambda|| + ||g_w|| <= tol on a batch.
  double tol = 1e-8;
  /// Epoch budget.
  std::size_t max_iters = 500;
  std::size_t batch_size = 8000;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::Adam;
};

enum class StopReason { Tolerance, MaxIters };

std::string to_string(StopReason reason);

struct TrainReport {
  std::vector<double> loss_trace;       // full-data loss after each epoch
  std::vector<double> grad_norm_trace;  // ||g_Lambda|| + ||g_w|| of each epoch's last batch
  std::vector<double> metric_trace;     // callback value at epochs 0..epochs_run (when a callback is set)
  StopReason stop_reason = StopReason::MaxIters;
  std::size_t epochs_run = 0;
  std::size_t steps_run = 0;
  double wall_seconds = 0.0;
  double best_loss = 0.0;
  std::size_t best_epoch = 0;
  std::optional<double> best_test_metric;
  std::optional<std::size_t> reference_epoch;
};

struct FitResult {
  AdaptiveKernelModel model;
  TrainReport report;
};

/// Called with the model at epoch 0 and after every epoch; the returned value
/// (higher is better, e.g. test accuracy) is tracked in the report.
using EpochCallback = std::function<double(const AdaptiveKernelModel&, std::size_t epoch)>;

struct LossGradients {
  double loss = 0.0;
  Vec g_lambda;  // basis parameters, layout of BasisFamily::params()
  Vec g_w;       // weights, flatten_weights layout
};

/// W (D x M) -> (Re W00, Im W00, Re W01, Im W01, ...), row-major in (j, mu).
Vec flatten_weights(const CMat& w);
CMat unflatten_weights(const Vec& flat, Eigen::Index rows, Eigen::Index cols);

/// sum_k |f(x_k) - y_k|^2 over the batch (M = 1).
double lsq_loss(const AdaptiveKernelModel& m, const Dataset& batch);

/// (1/q) sum_k max_{mu != y_k} max(0, 1 + f_mu(x_k) - f_{y_k}(x_k)) + alpha ||W||_F
/// on the real parts of the scores.
double hinge_loss(const AdaptiveKernelModel& m, const Dataset& batch, double alpha);

double evaluate_loss(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss);

/// Loss and its gradient with respect to every real parameter component.
/// Complex parameters contribute (dL/dRe, dL/dIm). The hinge loss returns the
/// subgradient of the first active violator (smallest class index on ties).
LossGradients loss_gradients(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss);

/// Minibatched joint descent over (Lambda, W); returns the iterate with the
/// lowest full-data loss seen at an epoch boundary.
FitResult fit(const AdaptiveKernelModel& init, const Dataset& data, const LossSpec& loss, const AdamConfig& cfg,
              const EpochCallback& on_epoch = {});

/// As fit, with the basis parameters held fixed (random-features training).
FitResult freeze_lambda_fit(const AdaptiveKernelModel& init, const Dataset& data, const LossSpec& loss,
                            const AdamConfig& cfg, const EpochCallback& on_epoch = {});

/// Least-squares weights for a fixed basis from (F^*F + ridge I) W = F^* y.
CMat exact_linear_solve(const BasisFamily& family, const Dataset& data, double ridge = 1e-10);

struct GradCheckOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  /// Perturb the analytic gradient before comparing (negative control).
  bool corrupt = false;
  double step = 1e-6;
};

/// Worst relative error ||g - g_fd|| / max(||g||, ||g_fd||) between analytic
/// gradients and central differences over random instances shaped like
/// `family`. Hinge trials closer than 1e-4 to a kink are redrawn.
double grad_check(const BasisFamily& family, const LossSpec& loss, const GradCheckOptions& options);

}  // namespace akm
