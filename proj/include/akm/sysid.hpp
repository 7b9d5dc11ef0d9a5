#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "akm/data.hpp"
#include "akm/model.hpp"

namespace akm {

/// Stable SISO system with transfer function H(z) = sum_j w_j / (1 - conj(lambda_j) z).
struct LtiSystem {
  std::vector<Complex> lambdas;
  std::vector<Complex> weights;

  LtiSystem(std::vector<Complex> lambdas, std::vector<Complex> weights);
};

/// The four-pole benchmark: lambdas {0.8, 0.4-0.3i, 0.4+0.3i, -0.5},
/// weights {1, 1+i, 1-i, 1}.
LtiSystem benchmark_system();

Complex transfer_eval(const LtiSystem& sys, Complex z);

/// h_n = sum_j w_j conj(lambda_j)^n, n = 0..n_max-1.
CVec impulse_response(const LtiSystem& sys, std::size_t n_max);

enum class Sampling { Equispaced, Uniform };

/// q samples z_k = exp(i theta_k) with y_k = H(z_k). Equispaced uses
/// theta_k = 2 pi k / q; Uniform draws theta_k from [0, 2 pi) with `seed`.
Dataset frequency_dataset(const LtiSystem& sys, std::size_t q = 5000, std::uint64_t seed = 0,
                          Sampling sampling = Sampling::Equispaced);

/// Angles t_k = arg(z_k) in [-pi, pi) as a q x 1 real input set.
InputSet angle_inputs(const CVec& z);

struct PoleMatch {
  /// assignment[i] is the index into `truth` paired with learned[i].
  std::vector<std::size_t> assignment;
  double max_abs_error = 0.0;
};

/// Brute force over all permutations (D <= 8) minimizing the largest |learned - truth|.
PoleMatch pole_match(const std::vector<Complex>& learned, const std::vector<Complex>& truth);

/// Relative L2 error ||f(z) - y|| / ||y|| of a disk model over the samples.
double relative_response_error(const AdaptiveKernelModel& m, const Dataset& data);

/// Columns theta, re_z, im_z, re_y, im_y.
void write_frequency_csv(const std::filesystem::path& path, const Dataset& data);

/// Columns re_true, im_true, re_learned, im_learned, abs_err (one row per true pole).
void write_pole_csv(const std::filesystem::path& path, const std::vector<Complex>& learned,
                    const std::vector<Complex>& truth, const PoleMatch& match);

}  // namespace akm
