#include "akm/rff.hpp"

#include <cmath>
#include <random>

#include "akm/errors.hpp"

namespace akm {

Mat sample_spectral(const SpectralSampler& s, std::size_t dim) {
  if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) throw DomainError("sigma must be positive");
  if (dim == 0) throw DomainError("need at least one frequency");
  if (s.input_dim == 0) throw DomainError("input dimension must be positive");
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, 1.0 / s.sigma);
  Mat lambda(static_cast<Eigen::Index>(s.input_dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < lambda.cols(); ++j)
    for (Eigen::Index n = 0; n < lambda.rows(); ++n) lambda(n, j) = normal(rng);
  return lambda;
}

double rff_kernel_estimate(const Mat& lambda, const Vec& x, const Vec& t) {
  if (x.size() != lambda.rows() || t.size() != lambda.rows()) throw ShapeError("input dimension does not match frequencies");
  if (lambda.cols() == 0) throw ShapeError("no frequencies");
  const Vec phase = lambda.transpose() * (x - t);
  return phase.array().cos().sum() / static_cast<double>(lambda.cols());
}

}  // namespace akm
