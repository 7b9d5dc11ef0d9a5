#pragma once

#include <cstddef>
#include <cstdint>

#include "akm/types.hpp"

namespace akm {

/// Spectral sampler for the Gaussian kernel exp(-|x - t|^2 / (2 sigma^2)) on R^N.
struct SpectralSampler {
  double sigma = 1.0;
  std::size_t input_dim = 1;
  std::uint64_t seed = 0;
};

/// N x D frequency matrix with i.i.d. N(0, sigma^-2) entries.
Mat sample_spectral(const SpectralSampler& s, std::size_t dim);

/// (1/D) Re sum_j exp(i <lambda_j, x - t>).
double rff_kernel_estimate(const Mat& lambda, const Vec& x, const Vec& t);

}  // namespace akm
