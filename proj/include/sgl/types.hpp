#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace sgl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Number of unordered node pairs i<j, i.e. the length of an edge vector.
constexpr Index pair_count(Index n) { return n * (n - 1) / 2; }

}  // namespace sgl
