#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

#include "akm/data.hpp"
#include "akm/errors.hpp"

using namespace akm;

namespace {

const std::filesystem::path kFixture = std::filesystem::path(AKM_TEST_DATA_DIR) / "covtype_fixture.csv";

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

Dataset indexed_dataset(std::size_t q) {
  Mat x(static_cast<Eigen::Index>(q), 1);
  CVec y(static_cast<Eigen::Index>(q));
  for (std::size_t k = 0; k < q; ++k) {
    x(static_cast<Eigen::Index>(k), 0) = static_cast<double>(k);
    y(static_cast<Eigen::Index>(k)) = static_cast<double>(k);
  }
  return make_regression(InputSet(std::move(x)), std::move(y));
}

}  // namespace

TEST(LoadCovtype, Fixture) {
  const Dataset d = load_covtype(kFixture);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.inputs.dim(), 54);
  EXPECT_EQ(d.labels, (std::vector<int>{4, 1, 6}));
  EXPECT_EQ(d.num_classes, 7);
  EXPECT_EQ(d.task, Task::Classification);
  EXPECT_EQ(d.inputs.real()(0, 0), 2601.0);
}

TEST(LoadCovtype, Errors) {
  EXPECT_THROW(load_covtype(write_temp("akm_empty.csv", "")), ParseError);
  EXPECT_THROW(load_covtype("/nonexistent/covtype.data"), MissingDataError);

  std::ifstream in(kFixture);
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  try {
    load_covtype(write_temp("akm_short.csv", first + "\n" + second.substr(0, second.rfind(',')) + "\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::string bad_label = first.substr(0, first.rfind(',')) + ",8";
  try {
    load_covtype(write_temp("akm_label.csv", first + "\n" + first + "\n" + bad_label + "\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::string text = first;
  text.replace(0, 4, "abcd");
  EXPECT_THROW(load_covtype(write_temp("akm_text.csv", text + "\n")), ParseError);
}

TEST(LoadCsv, HeaderAndTasks) {
  const auto path = write_temp("akm_generic.csv", "a,b,y\n1,2,0\n3,4,2\n5,6,1\n");
  const Dataset cls = load_csv(path, {true, Task::Classification});
  EXPECT_EQ(cls.size(), 3u);
  EXPECT_EQ(cls.num_classes, 3);
  EXPECT_EQ(cls.labels, (std::vector<int>{0, 2, 1}));
  const Dataset reg = load_csv(path, {true, Task::Regression});
  EXPECT_EQ(reg.targets(1), Complex(2.0, 0.0));
  EXPECT_THROW(load_csv(path, {false, Task::Regression}), ParseError);
}

TEST(Split, Examples) {
  const Dataset d = indexed_dataset(10);
  const Split s = split(d, {0.8, 3});
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  const Split again = split(d, {0.8, 3});
  EXPECT_EQ(s.train_rows, again.train_rows);
  EXPECT_EQ(s.test_rows, again.test_rows);

  std::vector<std::size_t> all = s.train_rows;
  all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(10);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(all, expected);
  for (std::size_t i = 0; i < s.train_rows.size(); ++i)
    EXPECT_EQ(s.train.inputs.real()(static_cast<Eigen::Index>(i), 0), static_cast<double>(s.train_rows[i]));

  EXPECT_EQ(split(indexed_dataset(581012), {0.8, 0}).train.size(), 464809u);
  EXPECT_THROW(split(indexed_dataset(1), {0.8, 0}), ShapeError);
}

TEST(LimitRows, SeededSubset) {
  const Dataset d = indexed_dataset(100);
  const Dataset a = limit_rows(d, 30, 5);
  EXPECT_EQ(a.size(), 30u);
  EXPECT_EQ(a.inputs.real(), limit_rows(d, 30, 5).inputs.real());
  std::set<double> unique(a.inputs.real().data(), a.inputs.real().data() + 30);
  EXPECT_EQ(unique.size(), 30u);
  EXPECT_EQ(limit_rows(d, 500, 5).size(), 100u);
}

TEST(Standardize, Examples) {
  Mat x(6, 3);
  // column 0: mean 5, population std 2; column 1: binary; column 2: already standardized
  x << 3, 0, -1, 7, 1, 1, 3, 1, -1, 7, 0, 1, 3, 0, -1, 7, 1, 1;
  const Dataset d = make_regression(InputSet(x), CVec::Zero(6));
  const Standardized s = standardize(d, d);
  const Mat& y = s.data.inputs.real();
  EXPECT_NEAR(y.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(std::sqrt(y.col(0).array().square().mean()), 1.0, 1e-15);
  EXPECT_EQ(std::memcmp(y.col(1).data(), x.col(1).data(), sizeof(double) * 6), 0);
  EXPECT_LT((y.col(2) - x.col(2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(s.stats.binary[1]);
  EXPECT_FALSE(s.stats.binary[0]);
  EXPECT_NEAR(s.stats.mean(0), 5.0, 1e-15);
  EXPECT_NEAR(s.stats.std(0), 2.0, 1e-15);
}

TEST(Standardize, ZeroVarianceWarnsAndNoLeakage) {
  Mat train(4, 2), test(3, 2);
  train << 1, 4, 2, 4, 3, 4, 4, 4;
  test << 10, 4, 20, 4, 30, 4;
  const Dataset tr = make_regression(InputSet(train), CVec::Zero(4));
  const Dataset te = make_regression(InputSet(test), CVec::Zero(3));
  const Standardized s = standardize(tr, te);
  EXPECT_EQ(s.stats.warnings.size(), 1u);
  EXPECT_EQ(s.data.inputs.real().col(1), test.col(1));

  Mat perturbed = test * 7.0;
  const Standardized s2 = standardize(tr, make_regression(InputSet(perturbed), CVec::Zero(3)));
  EXPECT_EQ(s.stats.mean, s2.stats.mean);
  EXPECT_EQ(s.stats.std, s2.stats.std);
}

TEST(Standardize, CovtypeBinaryColumnsUntouched) {
  const Dataset d = synthetic_covtype(500, 1);
  const Standardized s = standardize(d, d);
  for (Eigen::Index c = 10; c < 54; ++c) {
    EXPECT_EQ(std::memcmp(s.data.inputs.real().col(c).data(), d.inputs.real().col(c).data(), sizeof(double) * 500), 0);
  }
  for (Eigen::Index c = 0; c < 10; ++c) EXPECT_NEAR(s.data.inputs.real().col(c).mean(), 0.0, 1e-12);
}

TEST(Batches, Examples) {
  const Dataset d = indexed_dataset(10);
  const BatchPlan plan = batches(d, 4, 1);
  ASSERT_EQ(plan.size(), 3u);
  EXPECT_EQ(plan[0].size(), 4u);
  EXPECT_EQ(plan[1].size(), 4u);
  EXPECT_EQ(plan[2].size(), 2u);

  const BatchPlan whole = batches(d, 10, 1);
  EXPECT_EQ(whole.size(), 1u);
  std::vector<std::size_t> cover(whole[0].begin(), whole[0].end());
  std::sort(cover.begin(), cover.end());
  std::vector<std::size_t> expected(10);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(cover, expected);

  const BatchPlan other = batches(d, 4, 2);
  EXPECT_NE(plan.order(), other.order());
  std::vector<std::size_t> a = plan.order(), b = other.order();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_THROW(batches(d, 0, 1), DomainError);
}

TEST(SyntheticCovtype, Shape) {
  const Dataset d = synthetic_covtype(2000, 3);
  EXPECT_EQ(d.size(), 2000u);
  EXPECT_EQ(d.inputs.dim(), 54);
  EXPECT_EQ(d.num_classes, 7);
  std::vector<int> counts(7);
  for (int y : d.labels) ++counts[static_cast<std::size_t>(y)];
  for (int c : counts) EXPECT_GT(c, 0);
  for (Eigen::Index k = 0; k < 50; ++k) {
    EXPECT_EQ(d.inputs.real().row(k).segment(10, 4).sum(), 1.0);
    EXPECT_EQ(d.inputs.real().row(k).segment(14, 40).sum(), 1.0);
  }
  EXPECT_EQ(synthetic_covtype(100, 3).labels, synthetic_covtype(100, 3).labels);
}
