#pragma once

// Seeded random source with fully specified transforms, so generated
// instances are bit-reproducible across standard libraries:
//   engine     std::mt19937_64 seeded with splitmix64(seed)
//   uniform01  (next() >> 11) * 2^-53, in [0, 1)
//   normal     Box-Muller on (1 - uniform01, uniform01); the sine branch is
//              cached for the following call
//   below(n)   rejection sampling on the top bits (no modulo bias)

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace modpcp {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic seed for trial `trial` of parameter point `point`.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// +1 or -1 with probability 1/2 each.
  double sign();

  /// rows x cols matrix of i.i.d. N(0, variance) entries, filled column by column.
  Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, double variance);

  /// `count` distinct values from [0, n), uniformly without replacement, in draw order.
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t count);

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace modpcp
