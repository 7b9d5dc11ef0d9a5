#pragma once

#include <optional>
#include <string>
#include <vector>

#include "akm/basis.hpp"

namespace akm {

enum class OutputMode { Complex, RealPart };

std::string to_string(OutputMode mode);
OutputMode output_mode_from_string(const std::string& name);

/// f_mu = sum_j W(j, mu) phi_j^Lambda, mu = 0..M-1.
class AdaptiveKernelModel {
 public:
  AdaptiveKernelModel(BasisFamily family, CMat weights, OutputMode mode = OutputMode::Complex);

  const BasisFamily& family() const noexcept { return family_; }
  const CMat& weights() const noexcept { return weights_; }
  OutputMode mode() const noexcept { return mode_; }
  Eigen::Index outputs() const noexcept { return weights_.cols(); }

  AdaptiveKernelModel with_family(BasisFamily family) const { return {std::move(family), weights_, mode_}; }
  AdaptiveKernelModel with_weights(CMat weights) const { return {family_, std::move(weights), mode_}; }

  /// Scores for every input (q x M); RealPart mode zeroes the imaginary parts.
  CMat scores(const InputSet& xs) const;

 private:
  BasisFamily family_;
  CMat weights_;
  OutputMode mode_;
};

struct Prediction {
  CVec scores;
  /// Argmax of the real scores when M > 1; ties go to the smallest index.
  std::optional<int> label;
};

Prediction predict(const AdaptiveKernelModel& m, Complex z);
Prediction predict(const AdaptiveKernelModel& m, const Vec& x);

/// Elementwise predict. A failing element aborts with BatchElementError naming
/// its index.
std::vector<Prediction> predict_batch(const AdaptiveKernelModel& m, const InputSet& xs);

/// Argmax over the real part of each score row.
std::vector<int> predict_labels(const AdaptiveKernelModel& m, const InputSet& xs);

/// Collapse sum_k c_k xi_D(., t_k) into the primal model with
/// w_j = sum_k c_k exp(-i <lambda_j, t_k>).
AdaptiveKernelModel model_from_rff(const CVec& coefficients, const Mat& anchors, const Mat& lambda);

}  // namespace akm
