#pragma once

#include <Eigen/Core>

namespace subgae {

// Row-major throughout: the sparse-times-dense kernels accumulate whole rows,
// and row-major keeps those accesses contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace subgae
