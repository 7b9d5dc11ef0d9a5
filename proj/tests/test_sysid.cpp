#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "akm/errors.hpp"
#include "akm/sysid.hpp"
#include "akm/train.hpp"

using namespace akm;

TEST(TransferEval, Examples) {
  const LtiSystem sys = benchmark_system();
  EXPECT_NEAR(std::abs(transfer_eval(sys, {}) - 4.0), 0.0, 1e-15);
  const LtiSystem single({{}}, {{1.0, 0.0}});
  EXPECT_EQ(transfer_eval(single, {0.3, 0.8}), Complex(1.0, 0.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Complex z = std::polar(std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
    EXPECT_NEAR(std::abs(transfer_eval(sys, std::conj(z)) - std::conj(transfer_eval(sys, z))), 0.0, 1e-13);
  }
  EXPECT_THROW(transfer_eval(sys, {1.5, 0.0}), DomainError);
  EXPECT_THROW(LtiSystem({{1.0, 0.0}}, {{1.0, 0.0}}), DomainError);
  EXPECT_THROW(LtiSystem({{0.1, 0.0}}, {}), ShapeError);
}

TEST(ImpulseResponse, Examples) {
  const LtiSystem sys = benchmark_system();
  EXPECT_NEAR(std::abs(impulse_response(sys, 1)(0) - 4.0), 0.0, 1e-15);
  const CVec geo = impulse_response(LtiSystem({{0.5, 0.0}}, {{1.0, 0.0}}), 20);
  for (Eigen::Index n = 0; n < 20; ++n) EXPECT_EQ(geo(n), Complex(std::pow(0.5, static_cast<double>(n)), 0.0));
  EXPECT_THROW(impulse_response(sys, 0), DomainError);
}

TEST(ImpulseResponse, ZTransformConverges) {
  const LtiSystem sys = benchmark_system();
  double wsum = 0.0;
  for (const auto& w : sys.weights) wsum += std::abs(w);
  const CVec h = impulse_response(sys, 200);
  for (const Complex z : {Complex{0.9, 0.0}, Complex{0.0, -0.9}, Complex{-0.5, 0.6}, Complex{0.3, 0.1}}) {
    const double r = 0.8 * std::abs(z);  // largest |conj(lambda) z|
    for (int n : {10, 40, 120}) {
      Complex partial{};
      Complex zn{1.0, 0.0};
      for (int k = 0; k < n; ++k) {
        partial += h(k) * zn;
        zn *= z;
      }
      const double tail = std::pow(r, n) / (1.0 - r) * wsum;
      EXPECT_LE(std::abs(partial - transfer_eval(sys, z)), tail + 1e-13);
    }
  }
}

TEST(FrequencyDataset, Examples) {
  const LtiSystem sys = benchmark_system();
  const Dataset one = frequency_dataset(sys, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.inputs.disk()(0), Complex(1.0, 0.0));
  EXPECT_EQ(one.targets(0), transfer_eval(sys, {1.0, 0.0}));

  const Dataset four = frequency_dataset(sys, 4);
  const double expected[] = {0.0, M_PI / 2, M_PI, -M_PI / 2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::arg(four.inputs.disk()(k)), expected[k], 1e-15);

  const Dataset big = frequency_dataset(sys, 5000);
  EXPECT_TRUE(big.targets.allFinite());
  Eigen::Index arg_max = 0;
  big.targets.cwiseAbs().maxCoeff(&arg_max);
  EXPECT_LT(std::abs(std::arg(big.inputs.disk()(arg_max))), 0.05);

  const Dataset a = frequency_dataset(sys, 50, 7, Sampling::Uniform);
  const Dataset b = frequency_dataset(sys, 50, 7, Sampling::Uniform);
  EXPECT_EQ(a.inputs.disk(), b.inputs.disk());
  for (Eigen::Index k = 0; k < 50; ++k) EXPECT_NEAR(std::abs(a.inputs.disk()(k)), 1.0, 1e-15);
}

TEST(PoleMatch, Examples) {
  const std::vector<Complex> truth = {{0.8, 0.0}, {0.4, 0.3}, {0.4, -0.3}, {-0.5, 0.0}};
  EXPECT_EQ(pole_match(truth, truth).max_abs_error, 0.0);
  const std::vector<Complex> permuted = {truth[2], truth[0], truth[3], truth[1]};
  const PoleMatch m = pole_match(permuted, truth);
  EXPECT_EQ(m.max_abs_error, 0.0);
  EXPECT_EQ(m.assignment, (std::vector<std::size_t>{2, 0, 3, 1}));

  std::vector<Complex> learned = permuted;
  const Complex offsets[] = {{0.005, -0.004}, {-0.006, 0.0}, {0.0, 0.007}, {0.003, 0.003}};
  for (int i = 0; i < 4; ++i) learned[static_cast<std::size_t>(i)] += offsets[i];
  const PoleMatch near = pole_match(learned, truth);
  EXPECT_LT(near.max_abs_error, 1e-2);
  EXPECT_EQ(near.max_abs_error, pole_match(truth, learned).max_abs_error);
  EXPECT_THROW(pole_match(truth, {truth[0]}), ShapeError);
}

TEST(PoleMatch, SymmetricOnRandomSequences) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 0.4);
  for (int i = 0; i < 50; ++i) {
    std::vector<Complex> a(5), b(5);
    for (auto& v : a) v = {normal(rng), normal(rng)};
    for (auto& v : b) v = {normal(rng), normal(rng)};
    EXPECT_EQ(pole_match(a, b).max_abs_error, pole_match(b, a).max_abs_error);
  }
}

TEST(SpanMembership, TrueTmPolesReconstructPerfectly) {
  const LtiSystem sys = benchmark_system();
  const Dataset data = frequency_dataset(sys, 5000);
  const auto family = BasisFamily::tm(sys.lambdas);
  const AdaptiveKernelModel m(family, exact_linear_solve(family, data));
  EXPECT_LT(lsq_loss(m, data), 1e-16);
  EXPECT_LT(relative_response_error(m, data), 1e-10);
}

TEST(SysidCsv, Columns) {
  const auto dir = std::filesystem::temp_directory_path() / "akm_sysid_csv";
  std::filesystem::create_directories(dir);
  const LtiSystem sys = benchmark_system();
  write_frequency_csv(dir / "f.csv", frequency_dataset(sys, 8));
  std::ifstream f(dir / "f.csv");
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "theta,re_z,im_z,re_y,im_y");
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  EXPECT_EQ(rows, 8);

  const PoleMatch m = pole_match(sys.lambdas, sys.lambdas);
  write_pole_csv(dir / "p.csv", sys.lambdas, sys.lambdas, m);
  std::ifstream p(dir / "p.csv");
  std::getline(p, header);
  EXPECT_EQ(header, "re_true,im_true,re_learned,im_learned,abs_err");
}
