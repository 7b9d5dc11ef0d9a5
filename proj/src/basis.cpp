#include "akm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "akm/errors.hpp"

namespace akm {
namespace {

constexpr double kDiskSlack = 1e-12;

// sin and cos of a contiguous block. Eigen evaluates double-precision sin/cos
// one element at a time; this loop vectorizes. Cody-Waite reduction by pi/2
// (two-term split, fused), then the Cephes minimax polynomials on [-pi/4, pi/4].
// Falls back to the C library when any argument is too large for the
// rounding trick.
void sincos_block(const double* x, double* s, double* c, Eigen::Index n) {
  constexpr double kLimit = 1e9;
  bool small = true;
  for (Eigen::Index i = 0; i < n; ++i) small &= std::abs(x[i]) < kLimit;
  if (!small) {
    for (Eigen::Index i = 0; i < n; ++i) {
      s[i] = std::sin(x[i]);
      c[i] = std::cos(x[i]);
    }
    return;
  }
  constexpr double kTwoOverPi = 0.63661977236758134308;
  constexpr double kPio2Hi = 1.5707963267948966;
  constexpr double kPio2Lo = 6.123233995736766e-17;
  constexpr double kShift = 6755399441055744.0;  // 1.5 * 2^52
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = (x[i] * kTwoOverPi + kShift) - kShift;
    double r = std::fma(-k, kPio2Hi, x[i]);
    r = std::fma(-k, kPio2Lo, r);
    const double z = r * r;
    double ps = 1.58962301576546568060e-10;
    ps = ps * z - 2.50507477628578072866e-8;
    ps = ps * z + 2.75573136213857245213e-6;
    ps = ps * z - 1.98412698295895385996e-4;
    ps = ps * z + 8.33333333332211858878e-3;
    ps = ps * z - 1.66666666666666307295e-1;
    const double sr = r + r * z * ps;
    double pc = -1.13585365213876817300e-11;
    pc = pc * z + 2.08757008419747316778e-9;
    pc = pc * z - 2.75573141792967388112e-7;
    pc = pc * z + 2.48015872888517045348e-5;
    pc = pc * z - 1.38888888888730564116e-3;
    pc = pc * z + 4.16666666666665929218e-2;
    const double cr = 1.0 - 0.5 * z + z * z * pc;
    const auto q = static_cast<std::int64_t>(k);
    const bool swap = (q & 1) != 0;
    const double sv = swap ? cr : sr;
    const double cv = swap ? sr : cr;
    s[i] = (q & 2) ? -sv : sv;
    c[i] = ((q + 1) & 2) ? -cv : cv;
  }
}

void require_pole(Complex a) {
  if (!(std::abs(a) < 1.0)) {
    std::ostringstream msg;
    msg << "pole " << a << " is not inside the open unit disk";
    throw DomainError(msg.str());
  }
}

void require_closed_disk(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1.0 + kDiskSlack) {
    std::ostringstream msg;
    msg << "point " << z << " is outside the closed unit disk";
    throw DomainError(msg.str());
  }
}

void require_poles(const std::vector<Complex>& poles) {
  for (const Complex& a : poles) require_pole(a);
}

void require_column(const Mat& lambda, std::size_t j, const Vec& x) {
  if (j >= static_cast<std::size_t>(lambda.cols())) throw ShapeError("basis index out of range");
  if (x.size() != lambda.rows()) throw ShapeError("input dimension does not match frequency dimension");
}

// Derivatives of a single factor and normalizer with respect to (Re a, Im a).
struct FactorTerms {
  Complex blaschke;   // (z - a) / d
  Complex norm;       // sqrt(1 - |a|^2) / d
  Complex dB_dx, dB_dy;
  Complex dn_dx, dn_dy;
};

FactorTerms factor_terms(Complex a, Complex z) {
  const double s = std::sqrt(1.0 - std::norm(a));
  const Complex d = 1.0 - std::conj(a) * z;
  const Complex d2 = d * d;
  const Complex num = z - a;
  FactorTerms t;
  t.blaschke = num / d;
  t.norm = s / d;
  t.dB_dx = (-d + num * z) / d2;
  t.dB_dy = (-kI * d - kI * z * num) / d2;
  t.dn_dx = (-(a.real() / s) * d + s * z) / d2;
  t.dn_dy = (-(a.imag() / s) * d - kI * s * z) / d2;
  return t;
}

CVec tm_features(const std::vector<Complex>& poles, Complex z) {
  const std::size_t dim = poles.size();
  CVec phi(static_cast<Eigen::Index>(dim));
  Complex prefix{1.0, 0.0};
  for (std::size_t j = 0; j < dim; ++j) {
    const Complex a = poles[j];
    const Complex d = 1.0 - std::conj(a) * z;
    phi(static_cast<Eigen::Index>(j)) = std::sqrt(1.0 - std::norm(a)) / d * prefix;
    prefix *= (z - a) / d;
  }
  return phi;
}

CVec laguerre_features(Complex a, std::size_t dim, Complex z) {
  CVec phi(static_cast<Eigen::Index>(dim));
  const Complex d = 1.0 - std::conj(a) * z;
  const Complex b = (z - a) / d;
  Complex value = std::sqrt(1.0 - std::norm(a)) / d;
  for (std::size_t j = 0; j < dim; ++j) {
    phi(static_cast<Eigen::Index>(j)) = value;
    value *= b;
  }
  return phi;
}

void tm_jacobian_into(const std::vector<Complex>& poles, Complex z, CMat& jac) {
  const auto dim = static_cast<Eigen::Index>(poles.size());
  thread_local std::vector<FactorTerms> terms;
  thread_local std::vector<Complex> prefix;
  terms.clear();
  for (const Complex& a : poles) terms.push_back(factor_terms(a, z));
  prefix.assign(poles.size() + 1, Complex{1.0, 0.0});
  for (std::size_t j = 0; j < poles.size(); ++j) prefix[j + 1] = prefix[j] * terms[j].blaschke;

  jac.setZero(dim, 2 * dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto& t = terms[static_cast<std::size_t>(j)];
    jac(j, 2 * j) = t.dn_dx * prefix[static_cast<std::size_t>(j)];
    jac(j, 2 * j + 1) = t.dn_dy * prefix[static_cast<std::size_t>(j)];
  }
  // phi_j depends on a_nu (nu < j) through the factor B_nu only.
  for (Eigen::Index nu = 0; nu < dim; ++nu) {
    const auto& t = terms[static_cast<std::size_t>(nu)];
    Complex others = prefix[static_cast<std::size_t>(nu)];
    for (Eigen::Index j = nu + 1; j < dim; ++j) {
      const Complex base = terms[static_cast<std::size_t>(j)].norm * others;
      jac(j, 2 * nu) = base * t.dB_dx;
      jac(j, 2 * nu + 1) = base * t.dB_dy;
      others *= terms[static_cast<std::size_t>(j)].blaschke;
    }
  }
}

void laguerre_jacobian_into(Complex a, std::size_t dim, Complex z, CMat& jac) {
  const FactorTerms t = factor_terms(a, z);
  jac.resize(static_cast<Eigen::Index>(dim), 2);
  Complex power{1.0, 0.0};       // B^j
  Complex power_prev{0.0, 0.0};  // B^{j-1}, unused at j = 0
  for (std::size_t j = 0; j < dim; ++j) {
    const double jd = static_cast<double>(j);
    const auto r = static_cast<Eigen::Index>(j);
    jac(r, 0) = t.dn_dx * power + t.norm * jd * power_prev * t.dB_dx;
    jac(r, 1) = t.dn_dy * power + t.norm * jd * power_prev * t.dB_dy;
    power_prev = power;
    power *= t.blaschke;
  }
}

}  // namespace

Complex blaschke_factor(Complex a, Complex z) {
  require_pole(a);
  require_closed_disk(z);
  return (z - a) / (1.0 - std::conj(a) * z);
}

Complex blaschke_product(const std::vector<Complex>& poles, std::size_t j, Complex z) {
  if (j > poles.size()) throw ShapeError("Blaschke product longer than the pole sequence");
  require_closed_disk(z);
  Complex product{1.0, 0.0};
  for (std::size_t nu = 0; nu < j; ++nu) product *= blaschke_factor(poles[nu], z);
  return product;
}

Complex tm_eval(const std::vector<Complex>& poles, std::size_t j, Complex z) {
  if (j >= poles.size()) throw ShapeError("TM index out of range");
  const Complex a = poles[j];
  require_pole(a);
  require_closed_disk(z);
  return std::sqrt(1.0 - std::norm(a)) / (1.0 - std::conj(a) * z) * blaschke_product(poles, j, z);
}

Complex laguerre_eval(Complex a, std::size_t j, Complex z) {
  require_pole(a);
  require_closed_disk(z);
  const Complex d = 1.0 - std::conj(a) * z;
  return std::sqrt(1.0 - std::norm(a)) / d * std::pow((z - a) / d, static_cast<int>(j));
}

Complex trig_eval(const Mat& lambda, std::size_t j, const Vec& x) {
  require_column(lambda, j, x);
  const double phase = lambda.col(static_cast<Eigen::Index>(j)).dot(x);
  return {std::cos(phase), std::sin(phase)};
}

double at_eval(const Mat& lambda, std::size_t j, const Vec& x) {
  require_column(lambda, j, x);
  return std::atan(lambda.col(static_cast<Eigen::Index>(j)).dot(x));
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::TM: return "tm";
    case BasisKind::Laguerre: return "laguerre";
    case BasisKind::Trig: return "trig";
    case BasisKind::ArcTan: return "arctan";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "tm") return BasisKind::TM;
  if (name == "laguerre") return BasisKind::Laguerre;
  if (name == "trig") return BasisKind::Trig;
  if (name == "arctan") return BasisKind::ArcTan;
  throw std::invalid_argument("unknown basis kind '" + name + "'");
}

BasisFamily BasisFamily::tm(std::vector<Complex> poles) {
  if (poles.empty()) throw ShapeError("TM family needs at least one pole");
  require_poles(poles);
  BasisFamily family(BasisKind::TM, poles.size());
  family.poles_ = std::move(poles);
  return family;
}

BasisFamily BasisFamily::laguerre(Complex a, std::size_t dim) {
  if (dim == 0) throw ShapeError("Laguerre family needs D >= 1");
  require_pole(a);
  BasisFamily family(BasisKind::Laguerre, dim);
  family.poles_ = {a};
  return family;
}

BasisFamily BasisFamily::trig(Mat lambda) {
  if (lambda.cols() == 0 || lambda.rows() == 0) throw ShapeError("frequency matrix must be N x D with N, D >= 1");
  if (!lambda.allFinite()) throw DomainError("frequency matrix has non-finite entries");
  BasisFamily family(BasisKind::Trig, static_cast<std::size_t>(lambda.cols()));
  family.lambda_ = std::move(lambda);
  return family;
}

BasisFamily BasisFamily::arctan(Mat lambda) {
  if (lambda.cols() == 0 || lambda.rows() == 0) throw ShapeError("ridge matrix must be N x D with N, D >= 1");
  if (!lambda.allFinite()) throw DomainError("ridge matrix has non-finite entries");
  BasisFamily family(BasisKind::ArcTan, static_cast<std::size_t>(lambda.cols()));
  family.lambda_ = std::move(lambda);
  return family;
}

std::size_t BasisFamily::input_dim() const noexcept {
  return is_disk_family() ? 1 : static_cast<std::size_t>(lambda_.rows());
}

std::size_t BasisFamily::param_count() const noexcept {
  switch (kind_) {
    case BasisKind::TM: return 2 * dim_;
    case BasisKind::Laguerre: return 2;
    default: return static_cast<std::size_t>(lambda_.size());
  }
}

Vec BasisFamily::params() const {
  if (is_disk_family()) {
    Vec theta(static_cast<Eigen::Index>(2 * poles_.size()));
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      theta(static_cast<Eigen::Index>(2 * j)) = poles_[j].real();
      theta(static_cast<Eigen::Index>(2 * j + 1)) = poles_[j].imag();
    }
    return theta;
  }
  return lambda_.reshaped();
}

BasisFamily BasisFamily::with_params(const Vec& theta) const {
  if (static_cast<std::size_t>(theta.size()) != param_count()) throw ShapeError("parameter vector has the wrong length");
  BasisFamily out = *this;
  if (is_disk_family()) {
    for (std::size_t j = 0; j < out.poles_.size(); ++j) {
      const Complex a{theta(static_cast<Eigen::Index>(2 * j)), theta(static_cast<Eigen::Index>(2 * j + 1))};
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("non-finite pole parameter");
      out.poles_[j] = project_pole(a);
    }
  } else {
    out.lambda_ = theta.reshaped(lambda_.rows(), lambda_.cols());
  }
  return out;
}

bool BasisFamily::has_duplicate_columns() const {
  for (Eigen::Index j = 0; j < lambda_.cols(); ++j)
    for (Eigen::Index n = j + 1; n < lambda_.cols(); ++n)
      if (lambda_.col(j) == lambda_.col(n)) return true;
  return false;
}

CMat BasisFamily::feature_matrix(const InputSet& xs) const {
  const auto q = static_cast<Eigen::Index>(xs.size());
  const auto dim = static_cast<Eigen::Index>(dim_);
  if (is_disk_family()) {
    if (!xs.is_disk()) throw ShapeError("rational bases take complex disk inputs");
    require_poles(poles_);
    CMat out(q, dim);
    for (Eigen::Index k = 0; k < q; ++k) {
      const Complex z = xs.disk()(k);
      require_closed_disk(z);
      out.row(k) = (kind_ == BasisKind::TM ? tm_features(poles_, z) : laguerre_features(poles_.front(), dim_, z)).transpose();
    }
    return out;
  }
  if (xs.is_disk()) throw ShapeError("ridge bases take real inputs");
  if (xs.real().cols() != lambda_.rows()) throw ShapeError("input dimension does not match the basis");
  const Mat phase = xs.real() * lambda_;
  if (kind_ == BasisKind::Trig) {
    Mat re(q, dim), im(q, dim);
    sincos_block(phase.data(), im.data(), re.data(), phase.size());
    CMat out(q, dim);
    out.real() = re;
    out.imag() = im;
    return out;
  }
  return phase.array().atan().matrix().cast<Complex>();
}

Complex project_pole(Complex a) {
  const double r = std::abs(a);
  if (r > kMaxPoleRadius) return a * (kMaxPoleRadius / r);
  return a;
}

CVec feature_map(const BasisFamily& family, Complex z) {
  if (!family.is_disk_family()) throw ShapeError("ridge bases take real inputs");
  require_poles(family.poles());
  require_closed_disk(z);
  if (family.kind() == BasisKind::TM) return tm_features(family.poles(), z);
  return laguerre_features(family.laguerre_param(), family.dim(), z);
}

CVec feature_map(const BasisFamily& family, const Vec& x) {
  if (family.is_disk_family()) throw ShapeError("rational bases take complex disk inputs");
  if (x.size() != family.lambda().rows()) throw ShapeError("input dimension does not match the basis");
  const Vec phase = family.lambda().transpose() * x;
  if (family.kind() == BasisKind::Trig) {
    CVec out(phase.size());
    for (Eigen::Index j = 0; j < phase.size(); ++j) out(j) = {std::cos(phase(j)), std::sin(phase(j))};
    return out;
  }
  return phase.array().atan().matrix().cast<Complex>();
}

CMat feature_jacobian(const BasisFamily& family, Complex z) {
  CMat jac;
  feature_jacobian_into(family, z, jac);
  return jac;
}

void feature_jacobian_into(const BasisFamily& family, Complex z, CMat& jac) {
  if (!family.is_disk_family()) throw ShapeError("ridge bases take real inputs");
  require_poles(family.poles());
  require_closed_disk(z);
  if (family.kind() == BasisKind::TM)
    tm_jacobian_into(family.poles(), z, jac);
  else
    laguerre_jacobian_into(family.laguerre_param(), family.dim(), z, jac);
}

CMat feature_jacobian(const BasisFamily& family, const Vec& x) {
  if (family.is_disk_family()) throw ShapeError("rational bases take complex disk inputs");
  const Mat& lambda = family.lambda();
  if (x.size() != lambda.rows()) throw ShapeError("input dimension does not match the basis");
  const Eigen::Index n_dim = lambda.rows();
  const Eigen::Index dim = lambda.cols();
  CMat jac = CMat::Zero(dim, n_dim * dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double u = lambda.col(j).dot(x);
    // Only lambda_j enters phi_j.
    const Complex scale = family.kind() == BasisKind::Trig ? kI * Complex{std::cos(u), std::sin(u)}
                                                           : Complex{1.0 / (1.0 + u * u), 0.0};
    for (Eigen::Index n = 0; n < n_dim; ++n) jac(j, j * n_dim + n) = scale * x(n);
  }
  return jac;
}

bool multi_index_less(const MultiIndex& lhs, const MultiIndex& rhs) {
  std::size_t lhs_norm = 0, rhs_norm = 0;
  for (std::size_t v : lhs) lhs_norm += v;
  for (std::size_t v : rhs) rhs_norm += v;
  if (lhs_norm != rhs_norm) return lhs_norm < rhs_norm;
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

namespace {

void compositions(std::size_t total, std::size_t pos, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = total;
    out.push_back(current);
    return;
  }
  for (std::size_t v = 0; v <= total; ++v) {
    current[pos] = v;
    compositions(total - v, pos + 1, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> tensor_index_order(std::size_t dim, std::size_t count) {
  if (dim == 0 || count == 0) throw ShapeError("tensor_index_order needs N >= 1 and D >= 1");
  std::vector<MultiIndex> out;
  out.reserve(count);
  for (std::size_t degree = 0; out.size() < count; ++degree) {
    std::vector<MultiIndex> level;
    MultiIndex current(dim, 0);
    compositions(degree, 0, current, level);
    std::sort(level.begin(), level.end(), multi_index_less);
    for (auto& idx : level) {
      if (out.size() == count) break;
      out.push_back(std::move(idx));
    }
  }
  return out;
}

}  // namespace akm
