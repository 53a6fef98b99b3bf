#include "modpcp/random.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "modpcp/errors.hpp"

namespace modpcp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ (point + 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ (trial + 0x8CB92BA72F3D8DD7ULL));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ParameterError("Rng::below: empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

Eigen::MatrixXd Rng::gaussian(Eigen::Index rows, Eigen::Index cols, double variance) {
  const double sd = std::sqrt(variance);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = sd * normal();
  return m;
}

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t n, std::uint64_t count) {
  if (count > n) throw ParameterError("cannot sample more items than the population holds");
  // Sparse Fisher-Yates: only displaced slots are stored.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  auto value_at = [&](std::uint64_t k) {
    auto it = swapped.find(k);
    return it == swapped.end() ? k : it->second;
  };
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + below(n - i);
    const std::uint64_t vi = value_at(i);
    const std::uint64_t vj = value_at(j);
    swapped[j] = vi;
    out.push_back(vj);
  }
  return out;
}

}  // namespace modpcp
