#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "akm/inputs.hpp"
#include "akm/types.hpp"

namespace akm {

// ---------------------------------------------------------------------------
// Rational functions on the unit disk
// ---------------------------------------------------------------------------

/// Single Blaschke factor (z - a) / (1 - conj(a) z). Throws DomainError unless
/// |a| < 1 and |z| <= 1.
Complex blaschke_factor(Complex a, Complex z);

/// Product of the first `j` factors built from `poles`. The empty product is 1.
Complex blaschke_product(const std::vector<Complex>& poles, std::size_t j, Complex z);

/// Takenaka-Malmquist function
///   phi_j(z) = sqrt(1 - |a_j|^2) / (1 - conj(a_j) z) * prod_{nu<j} B_{a_nu}(z).
Complex tm_eval(const std::vector<Complex>& poles, std::size_t j, Complex z);

/// Discrete Laguerre function: the TM function of the constant pole sequence a.
Complex laguerre_eval(Complex a, std::size_t j, Complex z);

// ---------------------------------------------------------------------------
// Ridge features on R^N
// ---------------------------------------------------------------------------

/// exp(i <lambda_j, x>) where lambda_j is column j of `lambda` (N x D).
Complex trig_eval(const Mat& lambda, std::size_t j, const Vec& x);

/// arctan(<x, lambda_j>).
double at_eval(const Mat& lambda, std::size_t j, const Vec& x);

// ---------------------------------------------------------------------------
// Parameterized families
// ---------------------------------------------------------------------------

enum class BasisKind { TM, Laguerre, Trig, ArcTan };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// A parameterized system {phi_j^Lambda}_{j<D}. Value type; `with_params`
/// produces an updated copy.
///
/// Real parameter layout (the P columns of `feature_jacobian`):
///  - TM:       (Re a_0, Im a_0, Re a_1, Im a_1, ...), P = 2D
///  - Laguerre: (Re a, Im a), P = 2
///  - Trig/ArcTan: lambda in column-major order, so lambda_j occupies
///    entries [j*N, (j+1)*N), P = N*D
class BasisFamily {
 public:
  static BasisFamily tm(std::vector<Complex> poles);
  static BasisFamily laguerre(Complex a, std::size_t dim);
  static BasisFamily trig(Mat lambda);
  static BasisFamily arctan(Mat lambda);

  BasisKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Input dimension N (1 for the disk families).
  std::size_t input_dim() const noexcept;
  std::size_t param_count() const noexcept;
  bool is_disk_family() const noexcept { return kind_ == BasisKind::TM || kind_ == BasisKind::Laguerre; }
  bool is_real_valued() const noexcept { return kind_ == BasisKind::ArcTan; }

  const std::vector<Complex>& poles() const noexcept { return poles_; }
  Complex laguerre_param() const noexcept { return poles_.empty() ? Complex{} : poles_.front(); }
  const Mat& lambda() const noexcept { return lambda_; }

  Vec params() const;
  /// Copy with new real parameters. Poles escaping the disk are projected
  /// radially onto |a| = 1 - 1e-6.
  BasisFamily with_params(const Vec& theta) const;

  /// True when two ridge columns compare exactly equal. Such collisions are
  /// tolerated (they only make the system linearly dependent).
  bool has_duplicate_columns() const;

  /// Evaluate phi_0..phi_{D-1} at every input; result is q x D.
  CMat feature_matrix(const InputSet& xs) const;

 private:
  BasisFamily(BasisKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  BasisKind kind_;
  std::size_t dim_;
  std::vector<Complex> poles_;  // TM: D poles, Laguerre: the single parameter
  Mat lambda_;                  // Trig/ArcTan: N x D
};

/// Project a pole onto the closed disk of radius kMaxPoleRadius if it escaped.
Complex project_pole(Complex a);

/// Phi(z) for a disk family.
CVec feature_map(const BasisFamily& family, Complex z);
/// Phi(x) for a ridge family.
CVec feature_map(const BasisFamily& family, const Vec& x);

/// D x P matrix of analytic partial derivatives d phi_j / d theta_p.
CMat feature_jacobian(const BasisFamily& family, Complex z);
CMat feature_jacobian(const BasisFamily& family, const Vec& x);
/// Disk-family jacobian written into `jac`, reusing its storage.
void feature_jacobian_into(const BasisFamily& family, Complex z, CMat& jac);

/// Multi-index of a tensor-product system.
using MultiIndex = std::vector<std::size_t>;

/// Graded lexicographic order: compare |j|_1 first, then the first coordinate
/// where the indices differ (smaller entry first).
bool multi_index_less(const MultiIndex& lhs, const MultiIndex& rhs);

/// The first `count` multi-indices of length `dim` in the order above.
std::vector<MultiIndex> tensor_index_order(std::size_t dim, std::size_t count);

}  // namespace akm
