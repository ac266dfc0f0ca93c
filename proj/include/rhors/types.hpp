#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace rhors {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = std::int64_t;

}  // namespace rhors
