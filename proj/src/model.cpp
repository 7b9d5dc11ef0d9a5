#include "akm/model.hpp"

#include <stdexcept>

#include "akm/errors.hpp"

namespace akm {
namespace {

Prediction make_prediction(const AdaptiveKernelModel& m, const CVec& phi) {
  Prediction p;
  p.scores = m.weights().transpose() * phi;
  if (m.mode() == OutputMode::RealPart) p.scores = p.scores.real().cast<Complex>();
  if (p.scores.size() > 1) {
    Eigen::Index best = 0;
    for (Eigen::Index mu = 1; mu < p.scores.size(); ++mu)
      if (p.scores(mu).real() > p.scores(best).real()) best = mu;
    p.label = static_cast<int>(best);
  }
  return p;
}

}  // namespace

std::string to_string(OutputMode mode) { return mode == OutputMode::Complex ? "complex" : "real_part"; }

OutputMode output_mode_from_string(const std::string& name) {
  if (name == "complex") return OutputMode::Complex;
  if (name == "real_part") return OutputMode::RealPart;
  throw std::invalid_argument("unknown output mode '" + name + "'");
}

AdaptiveKernelModel::AdaptiveKernelModel(BasisFamily family, CMat weights, OutputMode mode)
    : family_(std::move(family)), weights_(std::move(weights)), mode_(mode) {
  if (static_cast<std::size_t>(weights_.rows()) != family_.dim() || weights_.cols() < 1)
    throw ShapeError("weight matrix must be D x M with M >= 1");
  if (!weights_.allFinite()) throw DomainError("weight matrix has non-finite entries");
}

CMat AdaptiveKernelModel::scores(const InputSet& xs) const {
  CMat out = family_.feature_matrix(xs) * weights_;
  if (mode_ == OutputMode::RealPart) out.imag().setZero();
  return out;
}

Prediction predict(const AdaptiveKernelModel& m, Complex z) { return make_prediction(m, feature_map(m.family(), z)); }

Prediction predict(const AdaptiveKernelModel& m, const Vec& x) { return make_prediction(m, feature_map(m.family(), x)); }

std::vector<Prediction> predict_batch(const AdaptiveKernelModel& m, const InputSet& xs) {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    try {
      if (xs.is_disk())
        out.push_back(predict(m, xs.disk()(row)));
      else
        out.push_back(predict(m, Vec(xs.real().row(row).transpose())));
    } catch (const std::exception& e) {
      throw BatchElementError(e.what(), k);
    }
  }
  return out;
}

std::vector<int> predict_labels(const AdaptiveKernelModel& m, const InputSet& xs) {
  std::vector<int> labels(xs.size());
  constexpr std::size_t kChunk = 4096;
  for (std::size_t begin = 0; begin < xs.size(); begin += kChunk) {
    const std::size_t count = std::min(kChunk, xs.size() - begin);
    const Mat real_scores = m.scores(xs.slice(begin, count)).real();
    for (Eigen::Index k = 0; k < real_scores.rows(); ++k) {
      Eigen::Index best = 0;
      for (Eigen::Index mu = 1; mu < real_scores.cols(); ++mu)
        if (real_scores(k, mu) > real_scores(k, best)) best = mu;
      labels[begin + static_cast<std::size_t>(k)] = static_cast<int>(best);
    }
  }
  return labels;
}

AdaptiveKernelModel model_from_rff(const CVec& coefficients, const Mat& anchors, const Mat& lambda) {
  if (anchors.rows() == 0) throw ShapeError("RFF expansion needs at least one anchor");
  if (coefficients.size() != anchors.rows()) throw ShapeError("one coefficient per anchor is required");
  if (anchors.cols() != lambda.rows()) throw ShapeError("anchor dimension does not match the frequencies");
  // phase(k, j) = <lambda_j, t_k>
  const Mat phase = anchors * lambda;
  CMat conj_features(phase.rows(), phase.cols());
  conj_features.real() = phase.array().cos().matrix();
  conj_features.imag() = -phase.array().sin().matrix();
  CMat weights = conj_features.transpose() * coefficients;
  return AdaptiveKernelModel(BasisFamily::trig(lambda), std::move(weights), OutputMode::Complex);
}

}  // namespace akm
