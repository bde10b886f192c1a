#pragma once

#include <Eigen/Dense>

namespace epcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace epcs
