#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "akm/inputs.hpp"

namespace akm {

enum class Task { Regression, Classification };

/// Samples (x_k, y_k). Regression targets live in `targets`, class labels in
/// `labels`; the unused one is empty.
struct Dataset {
  InputSet inputs;
  CVec targets;
  std::vector<int> labels;
  Task task = Task::Regression;
  int num_classes = 0;
  std::vector<std::string> feature_names;

  std::size_t size() const noexcept { return inputs.size(); }
  Dataset subset(std::span<const std::size_t> rows) const;
};

Dataset make_regression(InputSet inputs, CVec targets);
Dataset make_classification(InputSet inputs, std::vector<int> labels, int num_classes);

/// UCI covtype layout: 54 numeric features then a label in 1..7, comma
/// separated, no header. Labels are shifted to 0..6.
Dataset load_covtype(const std::filesystem::path& path);

struct CsvOptions {
  bool header = false;
  Task task = Task::Regression;
};

/// Generic numeric CSV; the last column is the target (integer class label
/// >= 0 for classification).
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Seeded permutation, then a prefix of floor(q * fraction) rows (clamped to
/// [1, q-1]) goes to training.
Split split(const Dataset& d, const SplitSpec& spec);

/// Seeded random subset of `limit` rows (order preserved); identity when
/// limit >= q.
Dataset limit_rows(const Dataset& d, std::size_t limit, std::uint64_t seed);

struct ColumnStats {
  Vec mean;
  Vec std;
  std::vector<bool> binary;        // column takes only the values 0 and 1
  std::vector<bool> standardized;  // column is transformed
  std::vector<std::string> warnings;
};

/// Column statistics of a real-input training set.
ColumnStats column_stats(const Dataset& train);
Dataset apply_stats(const ColumnStats& stats, const Dataset& d);

struct Standardized {
  Dataset data;
  ColumnStats stats;
};

/// Standardize the continuous columns of `apply_to` with statistics of `train`.
/// Binary and zero-variance columns pass through untouched.
Standardized standardize(const Dataset& train, const Dataset& apply_to);

/// One epoch of minibatches: a seeded permutation cut into consecutive slices,
/// the last one possibly short.
class BatchPlan {
 public:
  BatchPlan(std::size_t count, std::size_t batch_size, std::uint64_t epoch_seed);

  std::size_t size() const noexcept { return (order_.size() + batch_size_ - 1) / batch_size_; }
  std::span<const std::size_t> operator[](std::size_t b) const;
  const std::vector<std::size_t>& order() const noexcept { return order_; }

 private:
  std::vector<std::size_t> order_;
  std::size_t batch_size_;
};

BatchPlan batches(const Dataset& d, std::size_t batch_size, std::uint64_t epoch_seed);

/// Stand-in for covtype when the real file is unavailable: 10 continuous
/// columns, 4 one-hot "wilderness" and 40 one-hot "soil" columns, 7 classes.
Dataset synthetic_covtype(std::size_t rows, std::uint64_t seed);

}  // namespace akm
