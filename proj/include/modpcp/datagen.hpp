#pragma once

// Seeded synthetic instances. Every generator consumes its Rng in a fixed
// order, so the same parameters and seed always give a bit-identical result.

#include <cstdint>
#include <variant>
#include <vector>

#include "modpcp/matrix_core.hpp"
#include "modpcp/model.hpp"
#include "modpcp/random.hpp"

namespace modpcp {

// ------------------------------------------------------------------ supports

struct BernoulliSupport {
  double rho = 0.0;
};
struct UniformSupport {
  std::uint64_t m = 0;
};
using SupportModel = std::variant<BernoulliSupport, UniformSupport>;

SupportSet sample_support(Eigen::Index n1, Eigen::Index n2, const SupportModel& model, Rng& rng);
SupportSet sample_support(Eigen::Index n1, Eigen::Index n2, const SupportModel& model,
                          std::uint64_t seed);

/// Rolling block support for an n x num_cols sequence: column t holds rows
/// (start + k) mod n for k < s, with start = start_offset + step * floor(t / period).
SupportSet gen_correlated_support(Eigen::Index n, Eigen::Index s, Eigen::Index period,
                                  Eigen::Index step, Eigen::Index num_cols,
                                  Eigen::Index start_offset = 0);

/// Fills the support with independent +1 / -1 values.
Matrix random_signs_on(const SupportSet& support, Rng& rng);

// ------------------------------------------------------------------ static

/// Partial-knowledge instance: [U0 G_extra U_new] orthonormalized from an
/// n1 x (r0 + r_extra + r_new) N(0, 1/n1) matrix, G = [U0 G_extra],
/// training data M_G = G Y1 (r_G x d), M = [U0 U_new] Y2 + S with m
/// uniformly placed +-1 entries.
struct StaticGenParams {
  Eigen::Index n1 = 200;
  Eigen::Index d = 200;
  Eigen::Index n2 = 120;
  std::uint64_t m = 1800;
  Eigen::Index r = 20;
  Eigen::Index r0 = 18;
  Eigen::Index r_new = 2;
  Eigen::Index r_extra = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StaticInstance {
  ProblemInstance problem;  // prior = left singular vectors of m_train
  Matrix m_train;           // M_G
  OrthoBasis u0;
  OrthoBasis g_extra;
  OrthoBasis u_new;
};

StaticInstance gen_static_instance(const StaticGenParams& p);

// ------------------------------------------------------------------ phase transition

/// L = X Y^T with X ~ N(0, 1/n1) (n1 x r) and Y ~ N(0, 1/n2) (n2 x r).
/// G = [U0 G_extra]: U0 the first r - r_new columns of orthonormalized X,
/// G_extra the first r_extra columns of orthonormalized (I - U U^T) X1 with
/// X1 an n1 x 2 r_extra N(0, 1/n1) matrix.
struct PhaseGenParams {
  Eigen::Index n1 = 400;
  Eigen::Index n2 = 400;
  Eigen::Index r = 10;
  std::uint64_t m = 0;
  double r_new_frac = 0.15;
  double r_extra_frac = 0.15;
  std::uint64_t seed = 0;
};

/// floor(frac * r), robust to representation error in frac.
Eigen::Index fraction_of_rank(double frac, Eigen::Index r);

ProblemInstance gen_phase_instance(const PhaseGenParams& p);

// ------------------------------------------------------------------ noisy

/// Noisy instance: L and G built as in gen_phase_instance, Bernoulli(rho_s)
/// support with Unif[-amplitude, amplitude] values, Gaussian noise Z rescaled
/// so that ||Z||_F = sigma.
struct NoisyGenParams {
  Eigen::Index n1 = 200;
  Eigen::Index n2 = 200;
  Eigen::Index r = 10;
  Eigen::Index r_new = 2;
  Eigen::Index r_extra = 0;
  double rho_s = 0.2;
  double amplitude = 5.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

ProblemInstance gen_noisy_instance(const NoisyGenParams& p);

// ------------------------------------------------------------------ online

struct OnlineBernoulliSupport {
  double p = 0.0781;
  double lo = 20.0;
  double hi = 60.0;
};
struct OnlineCorrelatedSupport {
  Eigen::Index s = 5;
  Eigen::Index period = 25;
  Eigen::Index step = 5;
  double lo = 20.0;
  double hi = 60.0;
};
using OnlineSupportMode = std::variant<OnlineBernoulliSupport, OnlineCorrelatedSupport>;

/// Piecewise-constant subspace model. Column t (0-based over training and
/// test columns together) is l_t = P_j a_t for change_times[j-1] <= t <
/// change_times[j]. At each change c_new directions orthogonal to P_{j-1}
/// are appended and c_old columns dropped (the last ones unless
/// remove_first). Coefficients are Unif[-gamma, gamma], except that the newly
/// added directions use Unif[-gamma_new, gamma_new] for the first
/// ramp_length columns after the change. Columns [0, t0) are clean training
/// data; sparse outliers are added to the test columns only.
struct OnlineGenParams {
  Eigen::Index n = 256;
  Eigen::Index r0 = 40;
  Eigen::Index t0 = 200;
  Eigen::Index test_length = 2400;
  std::vector<Eigen::Index> change_times{800, 1400, 2000};
  std::vector<Eigen::Index> c_new{4, 4, 4};
  std::vector<Eigen::Index> c_old{4, 4, 4};
  double gamma = 5.0;
  double gamma_new = 5.0;
  Eigen::Index ramp_length = 1700;
  bool remove_first = false;
  OnlineSupportMode support = OnlineBernoulliSupport{};
  std::uint64_t seed = 0;

  void validate() const;
};

/// Full-scale online cases: 'a' (Bernoulli support, gamma_new = gamma),
/// 'b' (correlated s = 5, gamma_new = 1), 'c' (correlated s = 10, gamma_new = 1).
/// Change times t0 + 6 alpha, t0 + 12 alpha, t0 + 18 alpha with alpha = 100.
OnlineGenParams online_case_params(char which, std::uint64_t seed);

struct SequenceData {
  Matrix m_train;  // n x t0, clean
  Matrix m_test;
  Matrix l_test;
  Matrix s_test;
  /// Test-relative first column of every segment; starts with 0.
  std::vector<Eigen::Index> segment_starts;
  /// P_0 .. P_J
  std::vector<OrthoBasis> bases;
  /// P_{j,new} for j = 1 .. J (index 0 is empty).
  std::vector<OrthoBasis> new_bases;
};

SequenceData gen_online_sequence(const OnlineGenParams& p);

}  // namespace modpcp
