#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "akm/types.hpp"

namespace akm {

/// A collection of model inputs: either complex points on the closed unit
/// disk (rational bases) or rows of a real q x N matrix (trigonometric and
/// arctan bases).
class InputSet {
 public:
  InputSet() : data_(Mat(0, 0)) {}
  explicit InputSet(CVec disk_points) : data_(std::move(disk_points)) {}
  explicit InputSet(Mat rows) : data_(std::move(rows)) {}

  bool is_disk() const noexcept { return std::holds_alternative<CVec>(data_); }
  std::size_t size() const noexcept {
    return is_disk() ? static_cast<std::size_t>(disk().size())
                     : static_cast<std::size_t>(real().rows());
  }
  /// Input dimension N; 1 for disk points.
  Eigen::Index dim() const noexcept { return is_disk() ? 1 : real().cols(); }

  const CVec& disk() const { return std::get<CVec>(data_); }
  const Mat& real() const { return std::get<Mat>(data_); }

  InputSet select(std::span<const std::size_t> rows) const {
    if (is_disk()) {
      CVec out(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Eigen::Index>(k)) = disk()(static_cast<Eigen::Index>(rows[k]));
      return InputSet(std::move(out));
    }
    const Mat& x = real();
    Mat out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(rows[k]));
    return InputSet(std::move(out));
  }

  InputSet slice(std::size_t begin, std::size_t count) const {
    const auto b = static_cast<Eigen::Index>(begin);
    const auto n = static_cast<Eigen::Index>(count);
    if (is_disk()) return InputSet(CVec(disk().segment(b, n)));
    return InputSet(Mat(real().middleRows(b, n)));
  }

 private:
  std::variant<CVec, Mat> data_;
};

}  // namespace akm
