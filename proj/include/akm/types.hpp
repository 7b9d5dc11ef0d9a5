#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace akm {

using Complex = std::complex<double>;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Poles leaving the open disk are pulled back radially onto this radius.
inline constexpr double kMaxPoleRadius = 1.0 - 1e-6;

}  // namespace akm
