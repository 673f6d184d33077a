#pragma once

// Internal glue between the row-major Matrix type and Eigen. Not installed.

#include <Eigen/Dense>

#include "wdisc/linalg.hpp"

namespace wdisc::detail {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenRowMajor> map(const Matrix& m) {
    return {m.data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

inline Eigen::Map<EigenRowMajor> map(Matrix& m) {
    return {m.data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

}  // namespace wdisc::detail
