#pragma once

#include <cstdint>

#include "modpcp/matrix_core.hpp"
#include "modpcp/random.hpp"

namespace testing {

inline modpcp::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  modpcp::Rng rng(seed);
  return rng.gaussian(rows, cols, 1.0);
}

inline modpcp::OrthoBasis random_basis(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  return modpcp::orthonormalize(random_matrix(n, k, seed));
}

inline bool bit_equal(const modpcp::Matrix& a, const modpcp::Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace testing
