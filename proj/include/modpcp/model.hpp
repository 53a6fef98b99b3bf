#pragma once

#include <optional>

#include "modpcp/matrix_core.hpp"

namespace modpcp {

/// Observed data M with optional prior basis G and optional ground truth.
///   noiseless: M = L + S exactly
///   noisy:     ||M - L - S||_F <= noise_sigma
struct ProblemInstance {
  Matrix m;
  OrthoBasis prior;
  std::optional<Matrix> truth_l;
  std::optional<Matrix> truth_s;
  std::optional<SupportSet> truth_support;
  std::optional<double> noise_sigma;

  /// Throws DimensionError / ParameterError when an invariant is broken.
  void validate() const;
};

/// Factors of L_new = (I - G G^T) L.
struct LNewFactors {
  OrthoBasis u_new;
  Vector sigma_new;
  OrthoBasis v_new;
};

/// The rank floor is measured against L, not against the projected residual.
LNewFactors compute_l_new(const Matrix& l, const OrthoBasis& g, RankFloor floor = {});

/// Splits span(U) and span(G) into the common part u0, the prior-only part
/// g_extra and the truth-only part u_new. Only spans are meaningful; the
/// rotations relating these to the input columns are not kept.
struct SubspaceDecomposition {
  Eigen::Index r0 = 0;
  Eigen::Index r_new = 0;
  Eigen::Index r_extra = 0;
  OrthoBasis u0;
  OrthoBasis g_extra;
  OrthoBasis u_new;
  /// Right singular vectors of (I - G G^T) U, in the r-dimensional
  /// coefficient space of U.
  OrthoBasis v_new;
  Vector sigma_new;
};

/// Default cut for counting a cosine of GᵀU as 1.
inline constexpr double kIntersectionTol = 1e-8;

/// tol must lie in (0, 1): a singular value c of G^T U counts as a shared
/// direction when c >= 1 - tol.
SubspaceDecomposition decompose_subspace(const OrthoBasis& u, const OrthoBasis& g,
                                         double tol = kIntersectionTol);

/// max-abs of U U^T - [u0 u_new][u0 u_new]^T.
double reconstruct_identity_check(const SubspaceDecomposition& dec, const OrthoBasis& u,
                                  const OrthoBasis& g);

}  // namespace modpcp
