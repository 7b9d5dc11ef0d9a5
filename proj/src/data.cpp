#include "akm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string_view>

#include "akm/errors.hpp"

namespace akm {
namespace {

constexpr std::size_t kCovtypeFeatures = 54;
constexpr int kCovtypeClasses = 7;

std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    std::string_view field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size())
      throw ParseError("non-numeric field '" + std::string(field) + "'", line_no);
    values.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return values;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open data file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (line.empty() || line == "\r") continue;
    rows.push_back(parse_row(line, line_no));
    if (rows.size() > 1 && rows.back().size() != rows.front().size())
      throw ParseError("expected " + std::to_string(rows.front().size()) + " columns, got " +
                           std::to_string(rows.back().size()),
                       line_no);
  }
  if (rows.empty()) throw ParseError("data file " + path.string() + " contains no rows", line_no);
  return rows;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.inputs = inputs.select(rows);
  out.task = task;
  out.num_classes = num_classes;
  out.feature_names = feature_names;
  if (targets.size() > 0) {
    out.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
      out.targets(static_cast<Eigen::Index>(k)) = targets(static_cast<Eigen::Index>(rows[k]));
  }
  if (!labels.empty()) {
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) out.labels.push_back(labels[r]);
  }
  return out;
}

Dataset make_regression(InputSet inputs, CVec targets) {
  if (inputs.size() != static_cast<std::size_t>(targets.size())) throw ShapeError("inputs and targets differ in length");
  Dataset d;
  d.inputs = std::move(inputs);
  d.targets = std::move(targets);
  d.task = Task::Regression;
  return d;
}

Dataset make_classification(InputSet inputs, std::vector<int> labels, int num_classes) {
  if (inputs.size() != labels.size()) throw ShapeError("inputs and labels differ in length");
  if (num_classes < 2) throw ShapeError("classification needs at least two classes");
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] < 0 || labels[k] >= num_classes) throw BatchElementError("label out of range", k);
  Dataset d;
  d.inputs = std::move(inputs);
  d.labels = std::move(labels);
  d.task = Task::Classification;
  d.num_classes = num_classes;
  return d;
}

Dataset load_covtype(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open covtype file " + path.string());
  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<double> row = parse_row(line, line_no);
    if (row.size() != kCovtypeFeatures + 1)
      throw ParseError("expected 55 columns, got " + std::to_string(row.size()), line_no);
    const double label = row.back();
    if (!is_integer(label) || label < 1 || label > kCovtypeClasses)
      throw ParseError("label must be an integer in 1..7", line_no);
    values.insert(values.end(), row.begin(), row.end() - 1);
    labels.push_back(static_cast<int>(label) - 1);
  }
  if (labels.empty()) throw ParseError("covtype file " + path.string() + " contains no rows", line_no);
  const auto q = static_cast<Eigen::Index>(labels.size());
  Mat x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), q, static_cast<Eigen::Index>(kCovtypeFeatures));
  return make_classification(InputSet(std::move(x)), std::move(labels), kCovtypeClasses);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  const auto rows = read_rows(path, options.header);
  const std::size_t cols = rows.front().size();
  if (cols < 2) throw ParseError("need at least one feature column and a target column", 1);
  const auto q = static_cast<Eigen::Index>(rows.size());
  Mat x(q, static_cast<Eigen::Index>(cols - 1));
  for (Eigen::Index k = 0; k < q; ++k)
    for (std::size_t c = 0; c + 1 < cols; ++c) x(k, static_cast<Eigen::Index>(c)) = rows[static_cast<std::size_t>(k)][c];
  if (options.task == Task::Regression) {
    CVec y(q);
    for (Eigen::Index k = 0; k < q; ++k) y(k) = rows[static_cast<std::size_t>(k)].back();
    return make_regression(InputSet(std::move(x)), std::move(y));
  }
  std::vector<int> labels;
  int max_label = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double v = rows[k].back();
    if (!is_integer(v) || v < 0) throw ParseError("class label must be a non-negative integer", k + 1 + (options.header ? 1 : 0));
    labels.push_back(static_cast<int>(v));
    max_label = std::max(max_label, labels.back());
  }
  return make_classification(InputSet(std::move(x)), std::move(labels), std::max(2, max_label + 1));
}

Split split(const Dataset& d, const SplitSpec& spec) {
  if (d.size() < 2) throw ShapeError("splitting needs at least two samples");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) throw DomainError("train fraction must lie in (0, 1)");
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(d.size()) * spec.train_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, d.size() - 1);
  Split out;
  out.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  out.train = d.subset(out.train_rows);
  out.test = d.subset(out.test_rows);
  return out;
}

Dataset limit_rows(const Dataset& d, std::size_t limit, std::uint64_t seed) {
  if (limit >= d.size()) return d;
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(limit);
  std::sort(order.begin(), order.end());
  return d.subset(order);
}

ColumnStats column_stats(const Dataset& train) {
  if (train.inputs.is_disk()) throw ShapeError("standardization applies to real-valued inputs");
  const Mat& x = train.inputs.real();
  if (x.rows() == 0) throw ShapeError("cannot compute statistics of an empty dataset");
  ColumnStats stats;
  const Eigen::Index cols = x.cols();
  stats.mean = Vec::Zero(cols);
  stats.std = Vec::Ones(cols);
  stats.binary.assign(static_cast<std::size_t>(cols), false);
  stats.standardized.assign(static_cast<std::size_t>(cols), false);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto col = x.col(c);
    const bool binary = (col.array() == 0.0 || col.array() == 1.0).all();
    stats.binary[static_cast<std::size_t>(c)] = binary;
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(x.rows());
    stats.mean(c) = mean;
    stats.std(c) = std::sqrt(var);
    if (binary) continue;
    if (!(stats.std(c) > 0.0)) {
      stats.warnings.push_back("column " + std::to_string(c) + " has zero variance; left untouched");
      continue;
    }
    stats.standardized[static_cast<std::size_t>(c)] = true;
  }
  return stats;
}

Dataset apply_stats(const ColumnStats& stats, const Dataset& d) {
  if (d.inputs.is_disk()) throw ShapeError("standardization applies to real-valued inputs");
  Mat x = d.inputs.real();
  if (x.cols() != stats.mean.size()) throw ShapeError("column count does not match the statistics");
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    if (stats.standardized[static_cast<std::size_t>(c)])
      x.col(c) = (x.col(c).array() - stats.mean(c)) / stats.std(c);
  Dataset out = d;
  out.inputs = InputSet(std::move(x));
  return out;
}

Standardized standardize(const Dataset& train, const Dataset& apply_to) {
  Standardized out;
  out.stats = column_stats(train);
  out.data = apply_stats(out.stats, apply_to);
  return out;
}

BatchPlan::BatchPlan(std::size_t count, std::size_t batch_size, std::uint64_t epoch_seed)
    : order_(count), batch_size_(batch_size) {
  if (batch_size == 0) throw DomainError("batch size must be at least 1");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::mt19937_64 rng(epoch_seed);
  std::shuffle(order_.begin(), order_.end(), rng);
}

std::span<const std::size_t> BatchPlan::operator[](std::size_t b) const {
  const std::size_t begin = b * batch_size_;
  if (begin >= order_.size()) throw std::out_of_range("batch index out of range");
  return std::span<const std::size_t>(order_).subspan(begin, std::min(batch_size_, order_.size() - begin));
}

BatchPlan batches(const Dataset& d, std::size_t batch_size, std::uint64_t epoch_seed) {
  return BatchPlan(d.size(), batch_size, epoch_seed);
}

Dataset synthetic_covtype(std::size_t rows, std::uint64_t seed) {
  constexpr int kContinuous = 10;
  constexpr int kWilderness = 4;
  constexpr int kSoil = 40;
  constexpr int kTerms = 24;

  // The labelling rule is fixed; only the sampled rows depend on `seed`.
  std::mt19937_64 structure(0x5eedc0feULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  Mat freq(kContinuous, kTerms * kCovtypeClasses);
  for (Eigen::Index i = 0; i < freq.size(); ++i) freq(i) = 0.6 * normal(structure);
  Vec offset(kTerms * kCovtypeClasses), amp(kTerms * kCovtypeClasses);
  for (Eigen::Index i = 0; i < offset.size(); ++i) {
    offset(i) = phase(structure);
    amp(i) = normal(structure);
  }
  Mat soil_effect(kSoil, kCovtypeClasses), wild_effect(kWilderness, kCovtypeClasses);
  for (Eigen::Index i = 0; i < soil_effect.size(); ++i) soil_effect(i) = 0.8 * normal(structure);
  for (Eigen::Index i = 0; i < wild_effect.size(); ++i) wild_effect(i) = 0.8 * normal(structure);
  const Vec class_bias = (Vec(kCovtypeClasses) << 0.9, 1.2, 0.0, -1.2, -0.6, -0.3, 0.1).finished();
  // Raw-scale means and spreads loosely shaped like the covtype columns.
  const Vec col_mean = (Vec(kContinuous) << 2959, 155, 14, 269, 46, 2350, 212, 223, 142, 1980).finished();
  const Vec col_std = (Vec(kContinuous) << 280, 112, 7.5, 212, 58, 1559, 27, 20, 38, 1324).finished();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto q = static_cast<Eigen::Index>(rows);
  Mat x = Mat::Zero(q, kCovtypeFeatures);
  std::vector<int> labels(rows);
  for (Eigen::Index k = 0; k < q; ++k) {
    Vec latent(kContinuous);
    const double shared = normal(rng);
    for (int c = 0; c < kContinuous; ++c) latent(c) = 0.5 * shared + 0.866 * normal(rng);
    for (int c = 0; c < kContinuous; ++c) x(k, c) = col_mean(c) + col_std(c) * latent(c);
    const int wild = std::min(kWilderness - 1, static_cast<int>(unit(rng) * kWilderness + 0.3 * std::tanh(latent(0))));
    const int soil_center = static_cast<int>((std::tanh(latent(0)) + 1.0) * 0.5 * (kSoil - 1));
    const int soil = std::clamp(soil_center + static_cast<int>(std::lround(4.0 * normal(rng))), 0, kSoil - 1);
    x(k, kContinuous + std::max(0, wild)) = 1.0;
    x(k, kContinuous + kWilderness + soil) = 1.0;

    Vec score = class_bias + wild_effect.row(std::max(0, wild)).transpose() + soil_effect.row(soil).transpose();
    const Vec waves = (freq.transpose() * latent + offset).array().cos().matrix().cwiseProduct(amp);
    for (int mu = 0; mu < kCovtypeClasses; ++mu) score(mu) += waves.segment(mu * kTerms, kTerms).sum() / std::sqrt(kTerms) * 1.5;
    int label = 0;
    score.maxCoeff(&label);
    if (unit(rng) < 0.03) label = static_cast<int>(unit(rng) * kCovtypeClasses) % kCovtypeClasses;
    labels[static_cast<std::size_t>(k)] = label;
  }
  return make_classification(InputSet(std::move(x)), std::move(labels), kCovtypeClasses);
}

}  // namespace akm
