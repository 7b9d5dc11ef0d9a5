#include "akm/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>

#include "akm/errors.hpp"

namespace akm {

LtiSystem::LtiSystem(std::vector<Complex> l, std::vector<Complex> w) : lambdas(std::move(l)), weights(std::move(w)) {
  if (lambdas.size() != weights.size()) throw ShapeError("system needs one weight per pole parameter");
  if (lambdas.empty()) throw ShapeError("system needs at least one term");
  for (const auto& a : lambdas)
    if (!(std::abs(a) < 1.0)) throw DomainError("system parameters must lie in the open unit disk");
  for (const auto& c : weights)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("system weights must be finite");
}

LtiSystem benchmark_system() {
  return LtiSystem({{0.8, 0.0}, {0.4, -0.3}, {0.4, 0.3}, {-0.5, 0.0}}, {{1.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, 0.0}});
}

Complex transfer_eval(const LtiSystem& sys, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("transfer function is evaluated on the closed unit disk");
  Complex h{};
  for (std::size_t j = 0; j < sys.lambdas.size(); ++j) h += sys.weights[j] / (1.0 - std::conj(sys.lambdas[j]) * z);
  return h;
}

CVec impulse_response(const LtiSystem& sys, std::size_t n_max) {
  if (n_max == 0) throw DomainError("impulse response needs n_max >= 1");
  CVec h = CVec::Zero(static_cast<Eigen::Index>(n_max));
  for (std::size_t j = 0; j < sys.lambdas.size(); ++j) {
    Complex term = sys.weights[j];
    const Complex ratio = std::conj(sys.lambdas[j]);
    for (Eigen::Index n = 0; n < h.size(); ++n) {
      h(n) += term;
      term *= ratio;
    }
  }
  return h;
}

Dataset frequency_dataset(const LtiSystem& sys, std::size_t q, std::uint64_t seed, Sampling sampling) {
  if (q == 0) throw DomainError("need at least one frequency sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  CVec z(static_cast<Eigen::Index>(q));
  CVec y(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double theta = sampling == Sampling::Equispaced ? 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(q)
                                                          : angle(rng);
    z(k) = std::polar(1.0, theta);
    y(k) = transfer_eval(sys, z(k));
  }
  return make_regression(InputSet(std::move(z)), std::move(y));
}

InputSet angle_inputs(const CVec& z) {
  Mat t(z.size(), 1);
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    double a = std::arg(z(k));
    if (a >= M_PI) a -= 2.0 * M_PI;
    t(k, 0) = a;
  }
  return InputSet(std::move(t));
}

PoleMatch pole_match(const std::vector<Complex>& learned, const std::vector<Complex>& truth) {
  if (learned.size() != truth.size()) throw ShapeError("pole sequences differ in length");
  if (learned.size() > 8) throw ShapeError("pole matching is limited to 8 poles");
  std::vector<std::size_t> perm(learned.size());
  std::iota(perm.begin(), perm.end(), 0);
  PoleMatch best{perm, HUGE_VAL};
  if (learned.empty()) return {perm, 0.0};
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size() && worst < best.max_abs_error; ++i)
      worst = std::max(worst, std::abs(learned[i] - truth[perm[i]]));
    if (worst < best.max_abs_error) best = {perm, worst};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double relative_response_error(const AdaptiveKernelModel& m, const Dataset& data) {
  const CVec f = m.scores(data.inputs).col(0);
  const double denom = data.targets.norm();
  if (denom == 0.0) throw DomainError("relative error of an all-zero response");
  return (f - data.targets).norm() / denom;
}

void write_frequency_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const CVec& z = data.inputs.disk();
  out << "theta,re_z,im_z,re_y,im_y\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    double theta = std::arg(z(k));
    if (theta < 0.0) theta += 2.0 * M_PI;
    out << theta << ',' << z(k).real() << ',' << z(k).imag() << ',' << data.targets(k).real() << ','
        << data.targets(k).imag() << '\n';
  }
}

void write_pole_csv(const std::filesystem::path& path, const std::vector<Complex>& learned,
                    const std::vector<Complex>& truth, const PoleMatch& match) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::vector<std::size_t> owner(truth.size());
  for (std::size_t i = 0; i < match.assignment.size(); ++i) owner[match.assignment[i]] = i;
  out << "re_true,im_true,re_learned,im_learned,abs_err\n" << std::setprecision(17);
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const Complex l = learned[owner[t]];
    out << truth[t].real() << ',' << truth[t].imag() << ',' << l.real() << ',' << l.imag() << ','
        << std::abs(l - truth[t]) << '\n';
  }
}

}  // namespace akm
