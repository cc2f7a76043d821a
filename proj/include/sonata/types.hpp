#pragma once

#include <Eigen/Dense>

namespace sonata {

using Vec = Eigen::VectorXd;
// Agents are rows; row-major keeps each agent's copy contiguous.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace sonata
