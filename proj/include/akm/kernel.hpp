#pragma once

#include <cstddef>
#include <string>

#include "akm/basis.hpp"

namespace akm {

/// xi_D(x, t) = <Phi(x), Phi(t)> for the feature map of `family`.
struct TruncatedKernel {
  BasisFamily family;
};

Complex truncated_kernel_eval(const TruncatedKernel& k, Complex z, Complex t);
Complex truncated_kernel_eval(const TruncatedKernel& k, const Vec& x, const Vec& t);

/// Reproducing kernel of H_2(D): 1 / (1 - conj(t) z).
Complex cauchy_kernel(Complex z, Complex t);

double gaussian_kernel(const Vec& x, const Vec& t, double sigma);

/// G[k, k'] = xi_D(x_k, x_k'), assembled from the feature factorization F F^*.
CMat gram_matrix(const TruncatedKernel& k, const InputSet& points);

/// Eigenvalues (ascending) of the Hermitian part (G + G^*) / 2.
Vec hermitian_eigenvalues(const CMat& gram);

/// Closed-form sup bound on |xi - xi_D^a| over the disk of radius rho:
///   ((|a| + rho) / (1 + |a| rho))^{2D} / (1 - rho^2).
double laguerre_error_bound(double a_abs, double rho, std::size_t dim);

struct BoundReport {
  double rho = 0.0;
  double a_abs = 0.0;
  std::size_t dim = 0;
  double bound = 0.0;
  double empirical_sup = 0.0;
  std::size_t grid_size = 0;
};

/// Grid supremum of |cauchy_kernel - truncated Laguerre kernel| over all pairs
/// drawn from a polar grid (grid_n radii in [0, rho] x grid_n angles). Throws
/// BoundViolation if it exceeds laguerre_error_bound beyond rounding.
BoundReport certify_bound(Complex a, double rho, std::size_t dim, std::size_t grid_n);

struct TailEstimate {
  /// max_x sum_{j=D}^{J_max-1} |phi_j(x)|^2
  double value = 0.0;
  /// max_x sum_{j>=J_max} |phi_j(x)|^2 = max_x |B_{J_max}(x)|^2 / (1 - |x|^2);
  /// infinite when a point lies on the unit circle.
  double remainder_bound = 0.0;
};

/// Truncated tail factor of the kernel error bound for a complete orthonormal
/// rational system. TM families with fewer than J_max poles are extended by
/// repeating their last pole. Ridge families throw UnsupportedFamilyError.
TailEstimate tail_bound_estimate(const BasisFamily& family, std::size_t dim, std::size_t j_max, const CVec& points);

}  // namespace akm
