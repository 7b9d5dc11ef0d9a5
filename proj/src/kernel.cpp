#include "akm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "akm/errors.hpp"

namespace akm {

Complex truncated_kernel_eval(const TruncatedKernel& k, Complex z, Complex t) {
  return feature_map(k.family, t).dot(feature_map(k.family, z));
}

Complex truncated_kernel_eval(const TruncatedKernel& k, const Vec& x, const Vec& t) {
  // Eigen's dot conjugates its left operand: sum_j phi_j(x) conj(phi_j(t)).
  return feature_map(k.family, t).dot(feature_map(k.family, x));
}

Complex cauchy_kernel(Complex z, Complex t) {
  if (!(std::abs(z) < 1.0) || !(std::abs(t) < 1.0)) throw DomainError("Cauchy kernel needs points in the open unit disk");
  return 1.0 / (1.0 - std::conj(t) * z);
}

double gaussian_kernel(const Vec& x, const Vec& t, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("Gaussian bandwidth must be positive");
  if (x.size() != t.size()) throw ShapeError("Gaussian kernel arguments differ in dimension");
  return std::exp(-(x - t).squaredNorm() / (2.0 * sigma * sigma));
}

CMat gram_matrix(const TruncatedKernel& k, const InputSet& points) {
  if (points.size() == 0) throw ShapeError("Gram matrix needs at least one point");
  const CMat features = k.family.feature_matrix(points);
  CMat gram = features * features.adjoint();
  gram.diagonal() = features.rowwise().squaredNorm().cast<Complex>();
  return gram;
}

Vec hermitian_eigenvalues(const CMat& gram) {
  const CMat sym = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double laguerre_error_bound(double a_abs, double rho, std::size_t dim) {
  if (!(a_abs >= 0.0 && a_abs < 1.0)) throw DomainError("|a| must lie in [0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
  if (dim == 0) throw DomainError("D must be at least 1");
  const double contraction = (a_abs + rho) / (1.0 + a_abs * rho);
  return std::pow(contraction, 2.0 * static_cast<double>(dim)) / (1.0 - rho * rho);
}

BoundReport certify_bound(Complex a, double rho, std::size_t dim, std::size_t grid_n) {
  if (grid_n < 2) throw DomainError("certification grid needs at least 2 radii and angles");
  BoundReport report;
  report.rho = rho;
  report.a_abs = std::abs(a);
  report.dim = dim;
  report.grid_size = grid_n;
  report.bound = laguerre_error_bound(report.a_abs, rho, dim);

  const auto n = static_cast<Eigen::Index>(grid_n);
  CVec grid(n * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double radius = rho * static_cast<double>(r) / static_cast<double>(n - 1);
    for (Eigen::Index m = 0; m < n; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
      grid(r * n + m) = std::polar(radius, angle);
    }
  }

  const BasisFamily family = BasisFamily::laguerre(a, dim);
  const CMat features = family.feature_matrix(InputSet(grid));
  const CMat features_adj = features.adjoint();
  const Eigen::Index total = grid.size();
  constexpr Eigen::Index kBlock = 256;
  double sup = 0.0;
  for (Eigen::Index begin = 0; begin < total; begin += kBlock) {
    const Eigen::Index rows = std::min(kBlock, total - begin);
    const CMat truncated = features.middleRows(begin, rows) * features_adj;
    for (Eigen::Index t = 0; t < total; ++t) {
      const Complex t_conj = std::conj(grid(t));
      for (Eigen::Index i = 0; i < rows; ++i) {
        const Complex exact = 1.0 / (1.0 - t_conj * grid(begin + i));
        sup = std::max(sup, std::abs(exact - truncated(i, t)));
      }
    }
  }
  report.empirical_sup = sup;

  // Rounding slack: the error is a difference of O(1/(1 - rho^2)) quantities.
  const double slack = 16.0 * static_cast<double>(dim + 4) * std::numeric_limits<double>::epsilon() / (1.0 - rho * rho);
  if (report.empirical_sup > report.bound + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "kernel error bound violated: a=" << a << " rho=" << rho << " D=" << dim
        << " empirical_sup=" << report.empirical_sup << " bound=" << report.bound;
    throw BoundViolation(msg.str());
  }
  return report;
}

TailEstimate tail_bound_estimate(const BasisFamily& family, std::size_t dim, std::size_t j_max, const CVec& points) {
  if (!family.is_disk_family())
    throw UnsupportedFamilyError("tail estimates need a complete orthonormal system; " + to_string(family.kind()) +
                                 " cannot be extended");
  if (dim == 0 || j_max <= dim) throw DomainError("tail estimate needs 1 <= D < J_max");
  if (points.size() == 0) throw ShapeError("tail estimate needs at least one point");

  std::vector<Complex> poles = family.poles();
  poles.resize(j_max, poles.back());

  TailEstimate out;
  for (Eigen::Index k = 0; k < points.size(); ++k) {
    const Complex z = points(k);
    if (std::abs(z) > 1.0 + 1e-12) throw DomainError("tail estimate points must lie in the closed unit disk");
    Complex prefix{1.0, 0.0};
    double tail = 0.0;
    for (std::size_t j = 0; j < j_max; ++j) {
      const Complex d = 1.0 - std::conj(poles[j]) * z;
      if (j >= dim) tail += std::norm(std::sqrt(1.0 - std::norm(poles[j])) / d * prefix);
      prefix *= (z - poles[j]) / d;
    }
    out.value = std::max(out.value, tail);
    const double gap = 1.0 - std::norm(z);
    const double remainder = gap > 0.0 ? std::norm(prefix) / gap : std::numeric_limits<double>::infinity();
    out.remainder_bound = std::max(out.remainder_bound, remainder);
  }
  return out;
}

}  // namespace akm
