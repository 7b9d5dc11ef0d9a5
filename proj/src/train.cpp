#include "akm/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "akm/errors.hpp"

namespace akm {
namespace {

constexpr std::size_t kChunkRows = 1024;

struct Partial {
  double loss = 0.0;
  Vec g_lambda;
  CMat g_w;  // dL/dRe W + i dL/dIm W
};

void require_loss_shape(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss) {
  if (batch.size() == 0) throw ShapeError("loss needs a nonempty batch");
  if (loss.kind == LossKind::LeastSquares) {
    if (m.outputs() != 1) throw ShapeError("least-squares loss needs a single-output model");
    if (static_cast<std::size_t>(batch.targets.size()) != batch.size()) throw ShapeError("least-squares loss needs targets");
  } else {
    if (m.outputs() < 2) throw ShapeError("hinge loss needs at least two outputs");
    if (batch.labels.size() != batch.size()) throw ShapeError("hinge loss needs class labels");
    if (!(loss.alpha >= 0.0)) throw DomainError("regularization weight must be non-negative");
    for (std::size_t k = 0; k < batch.labels.size(); ++k)
      if (batch.labels[k] < 0 || batch.labels[k] >= m.outputs()) throw BatchElementError("label out of range", k);
  }
}

// Loss contribution and dL/dscores for rows [begin, begin + count).
double score_gradient(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss, std::size_t begin,
                      const CMat& scores, double inv_total, CMat* g_scores) {
  const Eigen::Index rows = scores.rows();
  double total = 0.0;
  if (g_scores) g_scores->setZero(rows, scores.cols());
  if (loss.kind == LossKind::LeastSquares) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      const Complex y = batch.targets(static_cast<Eigen::Index>(begin) + k);
      const Complex r = scores(k, 0) - y;
      total += std::norm(r);
      if (g_scores) (*g_scores)(k, 0) = m.mode() == OutputMode::RealPart ? Complex{2.0 * r.real(), 0.0} : 2.0 * r;
    }
    return total;
  }
  for (Eigen::Index k = 0; k < rows; ++k) {
    const int y = batch.labels[begin + static_cast<std::size_t>(k)];
    Eigen::Index rival = -1;
    for (Eigen::Index mu = 0; mu < scores.cols(); ++mu) {
      if (mu == y) continue;
      if (rival < 0 || scores(k, mu).real() > scores(k, rival).real()) rival = mu;
    }
    const double margin = 1.0 + scores(k, rival).real() - scores(k, y).real();
    if (margin > 0.0) {
      total += margin * inv_total;
      if (g_scores) {
        (*g_scores)(k, rival) += inv_total;
        (*g_scores)(k, y) -= inv_total;
      }
    }
  }
  return total;
}

Partial chunk_partial(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss, std::size_t begin,
                      std::size_t count, double inv_total, bool need_lambda) {
  const BasisFamily& family = m.family();
  const CMat& w = m.weights();
  const InputSet xs = batch.inputs.slice(begin, count);
  const CMat features = family.feature_matrix(xs);
  CMat scores = features * w;
  if (m.mode() == OutputMode::RealPart) scores.imag().setZero();

  Partial out;
  CMat g_scores;
  out.loss = score_gradient(m, batch, loss, begin, scores, inv_total, &g_scores);
  out.g_w = features.adjoint() * g_scores;
  out.g_lambda = Vec::Zero(static_cast<Eigen::Index>(family.param_count()));
  if (!need_lambda) return out;

  const CMat g_phi = g_scores * w.adjoint();  // dL/dRe phi + i dL/dIm phi
  switch (family.kind()) {
    case BasisKind::Trig: {
      // d phi / d lambda_{j,n} = i x_n phi  =>  contribution x_n * Re(i conj(g) phi)
      const Mat weight = -(g_phi.conjugate().cwiseProduct(features)).imag();
      const Mat grad = xs.real().transpose() * weight;
      out.g_lambda = grad.reshaped();
      break;
    }
    case BasisKind::ArcTan: {
      // d atan(u) / du = 1 / (1 + u^2) = cos^2(atan(u))
      const Mat slope = features.real().array().cos().square().matrix();
      const Mat weight = g_phi.real().cwiseProduct(slope);
      const Mat grad = xs.real().transpose() * weight;
      out.g_lambda = grad.reshaped();
      break;
    }
    case BasisKind::TM:
    case BasisKind::Laguerre: {
      CMat jac;
      const Eigen::Index params = out.g_lambda.size();
      for (Eigen::Index k = 0; k < features.rows(); ++k) {
        feature_jacobian_into(family, xs.disk()(k), jac);
        for (Eigen::Index p = 0; p < params; ++p) {
          double acc = 0.0;
          for (Eigen::Index j = 0; j < jac.rows(); ++j) acc += (std::conj(g_phi(k, j)) * jac(j, p)).real();
          out.g_lambda(p) += acc;
        }
      }
      break;
    }
  }
  return out;
}

// Fixed chunking plus pairwise reduction in index order keeps the sum
// bit-identical regardless of how many threads evaluate the chunks.
Partial accumulate(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss, bool need_lambda) {
  const std::size_t q = batch.size();
  const std::size_t chunks = (q + kChunkRows - 1) / kChunkRows;
  const double inv_total = 1.0 / static_cast<double>(q);
  std::vector<Partial> parts(chunks);
  auto work = [&](std::size_t c) {
    const std::size_t begin = c * kChunkRows;
    parts[c] = chunk_partial(m, batch, loss, begin, std::min(kChunkRows, q - begin), inv_total, need_lambda);
  };

  const std::size_t workers = std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = t; c < chunks; c += workers) work(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  while (parts.size() > 1) {
    std::vector<Partial> next((parts.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = std::move(parts[2 * i]);
      if (2 * i + 1 < parts.size()) {
        next[i].loss += parts[2 * i + 1].loss;
        next[i].g_lambda += parts[2 * i + 1].g_lambda;
        next[i].g_w += parts[2 * i + 1].g_w;
      }
    }
    parts = std::move(next);
  }
  Partial total = std::move(parts.front());
  if (loss.kind == LossKind::CrammerSingerHinge && loss.alpha > 0.0) {
    const double norm = m.weights().norm();
    total.loss += loss.alpha * norm;
    if (norm > 0.0) total.g_w += (loss.alpha / norm) * m.weights();
  }
  return total;
}

LossGradients compute_gradients(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss,
                                bool need_lambda) {
  require_loss_shape(m, batch, loss);
  Partial p = accumulate(m, batch, loss, need_lambda);
  return {p.loss, std::move(p.g_lambda), flatten_weights(p.g_w)};
}

struct AdamState {
  Vec m, v;
  explicit AdamState(Eigen::Index n) : m(Vec::Zero(n)), v(Vec::Zero(n)) {}

  void step(Vec& theta, const Vec& grad, double lr, const AdamConfig& cfg, std::size_t t) {
    if (cfg.optimizer == OptimizerKind::GradientDescent) {
      theta -= lr * grad;
      return;
    }
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.eps_adam);
  }
};

std::uint64_t epoch_seed(std::uint64_t seed, std::size_t epoch) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (epoch + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FitResult run_training(const AdaptiveKernelModel& init, const Dataset& data, const LossSpec& loss,
                       const AdamConfig& cfg, const EpochCallback& on_epoch, bool train_lambda) {
  if (cfg.batch_size == 0) throw DomainError("batch size must be at least 1");
  if (!(cfg.step_lambda > 0.0) || !(cfg.step_w > 0.0)) throw DomainError("step sizes must be positive");
  require_loss_shape(init, data, loss);
  const auto started = std::chrono::steady_clock::now();

  BasisFamily family = init.family();
  Vec theta = family.params();
  Vec w = flatten_weights(init.weights());
  const Eigen::Index d_rows = init.weights().rows();
  const Eigen::Index d_cols = init.weights().cols();
  AdamState lambda_state(theta.size()), w_state(w.size());

  FitResult result{init, {}};
  TrainReport& report = result.report;
  report.best_loss = evaluate_loss(init, data, loss);
  if (!std::isfinite(report.best_loss)) throw DivergenceError("initial loss is not finite");
  if (on_epoch) {
    const double metric = on_epoch(init, 0);
    report.metric_trace.push_back(metric);
    report.best_test_metric = metric;
    report.reference_epoch = 0;
  }

  const std::size_t q = data.size();
  const std::size_t batch_size = std::min(cfg.batch_size, q);
  std::size_t step = 0;
  bool converged = false;
  for (std::size_t epoch = 1; epoch <= cfg.max_iters && !converged; ++epoch) {
    const BatchPlan plan(q, batch_size, epoch_seed(cfg.seed, epoch));
    double grad_norm = 0.0;
    for (std::size_t b = 0; b < plan.size(); ++b) {
      const Dataset batch = batch_size == q && b == 0 && plan.size() == 1 ? data : data.subset(plan[b]);
      const AdaptiveKernelModel current(family, unflatten_weights(w, d_rows, d_cols), init.mode());
      LossGradients g = compute_gradients(current, batch, loss, train_lambda);
      if (!std::isfinite(g.loss) || !g.g_lambda.allFinite() || !g.g_w.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite loss or gradient at epoch " << epoch << ", step " << step + 1
            << " (|Lambda| = " << theta.norm() << ", |W| = " << w.norm() << ")";
        throw DivergenceError(msg.str());
      }
      ++step;
      if (train_lambda) {
        lambda_state.step(theta, g.g_lambda, cfg.step_lambda, cfg, step);
        family = family.with_params(theta);
        theta = family.params();
      }
      w_state.step(w, g.g_w, cfg.step_w, cfg, step);
      grad_norm = (train_lambda ? g.g_lambda.norm() : 0.0) + g.g_w.norm();
      if (grad_norm <= cfg.tol) {
        converged = true;
        break;
      }
    }

    const AdaptiveKernelModel model(family, unflatten_weights(w, d_rows, d_cols), init.mode());
    const double full_loss = evaluate_loss(model, data, loss);
    if (!std::isfinite(full_loss)) {
      std::ostringstream msg;
      msg << "non-finite loss after epoch " << epoch << " (|Lambda| = " << theta.norm() << ", |W| = " << w.norm() << ")";
      throw DivergenceError(msg.str());
    }
    report.loss_trace.push_back(full_loss);
    report.grad_norm_trace.push_back(grad_norm);
    report.epochs_run = epoch;
    if (full_loss < report.best_loss) {
      report.best_loss = full_loss;
      report.best_epoch = epoch;
      result.model = model;
    }
    if (on_epoch) {
      const double metric = on_epoch(model, epoch);
      report.metric_trace.push_back(metric);
      if (metric > *report.best_test_metric) {
        report.best_test_metric = metric;
        report.reference_epoch = epoch;
      }
    }
  }
  report.steps_run = step;
  report.stop_reason = converged ? StopReason::Tolerance : StopReason::MaxIters;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace

std::string to_string(StopReason reason) { return reason == StopReason::Tolerance ? "tolerance" : "max_iters"; }

Vec flatten_weights(const CMat& w) {
  Vec flat(2 * w.size());
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < w.rows(); ++j)
    for (Eigen::Index mu = 0; mu < w.cols(); ++mu) {
      flat(i++) = w(j, mu).real();
      flat(i++) = w(j, mu).imag();
    }
  return flat;
}

CMat unflatten_weights(const Vec& flat, Eigen::Index rows, Eigen::Index cols) {
  if (flat.size() != 2 * rows * cols) throw ShapeError("flattened weight vector has the wrong length");
  CMat w(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < rows; ++j)
    for (Eigen::Index mu = 0; mu < cols; ++mu) {
      w(j, mu) = {flat(i), flat(i + 1)};
      i += 2;
    }
  return w;
}

double lsq_loss(const AdaptiveKernelModel& m, const Dataset& batch) {
  return evaluate_loss(m, batch, {LossKind::LeastSquares, 0.0});
}

double hinge_loss(const AdaptiveKernelModel& m, const Dataset& batch, double alpha) {
  return evaluate_loss(m, batch, {LossKind::CrammerSingerHinge, alpha});
}

double evaluate_loss(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss) {
  require_loss_shape(m, batch, loss);
  const std::size_t q = batch.size();
  const double inv_total = 1.0 / static_cast<double>(q);
  std::vector<double> parts;
  for (std::size_t begin = 0; begin < q; begin += kChunkRows) {
    const std::size_t count = std::min(kChunkRows, q - begin);
    const CMat scores = m.scores(batch.inputs.slice(begin, count));
    parts.push_back(score_gradient(m, batch, loss, begin, scores, inv_total, nullptr));
  }
  while (parts.size() > 1) {
    std::vector<double> next((parts.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = parts[2 * i] + (2 * i + 1 < parts.size() ? parts[2 * i + 1] : 0.0);
    parts = std::move(next);
  }
  double total = parts.front();
  if (loss.kind == LossKind::CrammerSingerHinge) total += loss.alpha * m.weights().norm();
  return total;
}

LossGradients loss_gradients(const AdaptiveKernelModel& m, const Dataset& batch, const LossSpec& loss) {
  return compute_gradients(m, batch, loss, true);
}

FitResult fit(const AdaptiveKernelModel& init, const Dataset& data, const LossSpec& loss, const AdamConfig& cfg,
              const EpochCallback& on_epoch) {
  return run_training(init, data, loss, cfg, on_epoch, true);
}

FitResult freeze_lambda_fit(const AdaptiveKernelModel& init, const Dataset& data, const LossSpec& loss,
                            const AdamConfig& cfg, const EpochCallback& on_epoch) {
  return run_training(init, data, loss, cfg, on_epoch, false);
}

CMat exact_linear_solve(const BasisFamily& family, const Dataset& data, double ridge) {
  if (!(ridge >= 0.0)) throw DomainError("ridge must be non-negative");
  if (data.size() == 0) throw ShapeError("linear solve needs at least one sample");
  if (static_cast<std::size_t>(data.targets.size()) != data.size()) throw ShapeError("linear solve needs regression targets");
  const CMat features = family.feature_matrix(data.inputs);
  CMat normal = features.adjoint() * features;
  normal.diagonal().array() += ridge;
  const CVec rhs = features.adjoint() * data.targets;
  Eigen::LLT<CMat> llt(normal);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-15)
    throw SingularSystemError("normal equations are singular; increase the ridge");
  return llt.solve(rhs);
}

namespace {

struct Instance {
  AdaptiveKernelModel model;
  Dataset data;
};

Instance random_instance(const BasisFamily& shape, const LossSpec& loss, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disk_point = [&](double radius) { return std::polar(radius * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng)); };
  constexpr std::size_t kSamples = 6;
  const bool hinge = loss.kind == LossKind::CrammerSingerHinge;
  const Eigen::Index outputs = hinge ? 3 : 1;
  const auto dim = static_cast<Eigen::Index>(shape.dim());

  BasisFamily family = shape;
  InputSet inputs;
  if (shape.is_disk_family()) {
    if (shape.kind() == BasisKind::TM) {
      std::vector<Complex> poles(shape.dim());
      for (auto& a : poles) a = disk_point(0.7);
      family = BasisFamily::tm(std::move(poles));
    } else {
      family = BasisFamily::laguerre(disk_point(0.7), shape.dim());
    }
    CVec z(kSamples);
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = disk_point(1.0);
    inputs = InputSet(std::move(z));
  } else {
    Mat lambda(shape.lambda().rows(), dim);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = normal(rng);
    family = shape.kind() == BasisKind::Trig ? BasisFamily::trig(std::move(lambda)) : BasisFamily::arctan(std::move(lambda));
    Mat x(static_cast<Eigen::Index>(kSamples), shape.lambda().rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    inputs = InputSet(std::move(x));
  }
  CMat w(dim, outputs);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = {normal(rng), normal(rng)};

  if (hinge) {
    std::vector<int> labels(kSamples);
    for (auto& y : labels) y = static_cast<int>(unit(rng) * static_cast<double>(outputs)) % static_cast<int>(outputs);
    return {AdaptiveKernelModel(family, w, OutputMode::RealPart),
            make_classification(std::move(inputs), std::move(labels), static_cast<int>(outputs))};
  }
  CVec y(static_cast<Eigen::Index>(kSamples));
  for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = {normal(rng), normal(rng)};
  return {AdaptiveKernelModel(family, w, OutputMode::Complex), make_regression(std::move(inputs), std::move(y))};
}

bool near_hinge_kink(const Instance& inst, double gap) {
  const Mat scores = inst.model.scores(inst.data.inputs).real();
  for (Eigen::Index k = 0; k < scores.rows(); ++k) {
    const int y = inst.data.labels[static_cast<std::size_t>(k)];
    double best = -HUGE_VAL, second = -HUGE_VAL;
    for (Eigen::Index mu = 0; mu < scores.cols(); ++mu) {
      if (mu == y) continue;
      const double s = scores(k, mu);
      if (s > best) {
        second = best;
        best = s;
      } else if (s > second) {
        second = s;
      }
    }
    if (best - second < gap) return true;
    if (std::abs(1.0 + best - scores(k, y)) < gap) return true;
  }
  return inst.model.weights().norm() < gap;
}

}  // namespace

double grad_check(const BasisFamily& family, const LossSpec& loss, const GradCheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  const double h = options.step;
  double worst = 0.0;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    Instance inst = random_instance(family, loss, rng);
    if (loss.kind == LossKind::CrammerSingerHinge) {
      for (int redraw = 0; redraw < 1000 && near_hinge_kink(inst, 1e-4); ++redraw) inst = random_instance(family, loss, rng);
    }
    const LossGradients g = loss_gradients(inst.model, inst.data, loss);
    Vec analytic(g.g_lambda.size() + g.g_w.size());
    analytic << g.g_lambda, g.g_w;
    if (options.corrupt) analytic(0) += 1e-2 * (1.0 + std::abs(analytic(0)));

    const Vec theta = inst.model.family().params();
    const Vec w = flatten_weights(inst.model.weights());
    const Eigen::Index rows = inst.model.weights().rows(), cols = inst.model.weights().cols();
    Vec numeric(analytic.size());
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
      Vec plus = theta, minus = theta;
      plus(p) += h;
      minus(p) -= h;
      const double lp = evaluate_loss(inst.model.with_family(inst.model.family().with_params(plus)), inst.data, loss);
      const double lm = evaluate_loss(inst.model.with_family(inst.model.family().with_params(minus)), inst.data, loss);
      numeric(p) = (lp - lm) / (2.0 * h);
    }
    for (Eigen::Index p = 0; p < w.size(); ++p) {
      Vec plus = w, minus = w;
      plus(p) += h;
      minus(p) -= h;
      const double lp = evaluate_loss(inst.model.with_weights(unflatten_weights(plus, rows, cols)), inst.data, loss);
      const double lm = evaluate_loss(inst.model.with_weights(unflatten_weights(minus, rows, cols)), inst.data, loss);
      numeric(theta.size() + p) = (lp - lm) / (2.0 * h);
    }
    const double scale = std::max({analytic.norm(), numeric.norm(), 1e-300});
    worst = std::max(worst, (analytic - numeric).norm() / scale);
  }
  return worst;
}

}  // namespace akm
