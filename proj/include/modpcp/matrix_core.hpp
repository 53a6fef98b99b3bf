#pragma once

// Dense numerical primitives shared by every other module: the basis and
// support-set value types, SVD with an explicit rank floor, the two shrinkage
// operators and the projections onto supports and onto the subspace
//   Pi = { L Y1^T + Y2 R^T }
// spanned by a left basis L and a right basis R.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace modpcp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Matrix with orthonormal columns. A rank-0 basis is legal and represents the
/// empty prior.
class OrthoBasis {
 public:
  /// Max-abs deviation of C^T C from the identity accepted at construction.
  static constexpr double kOrthonormalityTol = 1e-10;

  OrthoBasis() = default;

  /// Validates orthonormality; throws ParameterError otherwise.
  explicit OrthoBasis(Matrix columns, double tol = kOrthonormalityTol);

  static OrthoBasis empty(Eigen::Index ambient_dim);
  static OrthoBasis identity(Eigen::Index ambient_dim);
  /// First `count` columns of the identity.
  static OrthoBasis canonical(Eigen::Index ambient_dim, Eigen::Index count);

  /// Skips the orthonormality check. For columns produced by an SVD or a
  /// column slice of an existing basis.
  static OrthoBasis trusted(Matrix columns);

  Eigen::Index ambient_dim() const { return columns_.rows(); }
  Eigen::Index rank() const { return columns_.cols(); }
  bool is_empty() const { return columns_.cols() == 0; }
  const Matrix& columns() const { return columns_; }

  /// B B^T M
  Matrix project(const Matrix& m) const;
  /// (I - B B^T) M
  Matrix project_complement(const Matrix& m) const;
  /// B B^T
  Matrix projector() const;

  /// Columns [first, first + count).
  OrthoBasis slice(Eigen::Index first, Eigen::Index count) const;

  /// Horizontal concatenation [a b]. Throws if the result is not orthonormal.
  static OrthoBasis concat(const OrthoBasis& a, const OrthoBasis& b,
                           double tol = 1e-8);

 private:
  Matrix columns_{0, 0};
};

/// Projector Frobenius distance ||P1 P1^T - P2 P2^T||_F, the basis-invariant
/// way to compare spans.
double projector_distance(const OrthoBasis& a, const OrthoBasis& b);

/// Set of (row, col) positions inside an n1 x n2 grid, stored as a mask.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(Eigen::Index rows, Eigen::Index cols);

  /// Throws DimensionError on out-of-range and ParameterError on duplicates.
  static SupportSet from_indices(
      Eigen::Index rows, Eigen::Index cols,
      const std::vector<std::pair<Eigen::Index, Eigen::Index>>& indices);
  static SupportSet from_mask(Mask mask);
  static SupportSet full(Eigen::Index rows, Eigen::Index cols);
  /// Positions of the nonzero entries of m.
  static SupportSet nonzeros_of(const Matrix& m);

  Eigen::Index rows() const { return mask_.rows(); }
  Eigen::Index cols() const { return mask_.cols(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(Eigen::Index i, Eigen::Index j) const { return mask_(i, j); }
  const Mask& mask() const { return mask_; }

  /// Returns false when the position was already present.
  bool insert(Eigen::Index i, Eigen::Index j);

  SupportSet complement() const;
  SupportSet united(const SupportSet& other) const;

  /// Positions in row-major order.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> indices() const;

  friend bool operator==(const SupportSet& a, const SupportSet& b);

 private:
  Mask mask_{0, 0};
  std::size_t count_ = 0;
};

/// How small singular values are discarded when defining numerical rank.
struct RankFloor {
  enum class Kind { relative, absolute };
  Kind kind = Kind::relative;
  /// relative: drop s_i <= value * max(n1, n2) * s_max. absolute: drop s_i <= value.
  double value = 1e-12;

  static RankFloor relative(double factor) { return {Kind::relative, factor}; }
  static RankFloor absolute(double threshold) { return {Kind::absolute, threshold}; }

  double threshold(Eigen::Index rows, Eigen::Index cols, double s_max) const;
};

struct SvdResult {
  OrthoBasis u;
  Vector singular_values;  // nonincreasing, all above the rank floor
  OrthoBasis v;

  Eigen::Index rank() const { return singular_values.size(); }
  Matrix reconstruct() const;
};

double soft_threshold(double x, double eps);
Matrix soft_threshold_matrix(const Matrix& m, double eps);

/// Reduced SVD truncated at the rank floor. Throws NumericalError on
/// non-finite input or non-convergence.
SvdResult svd(const Matrix& m, RankFloor floor = {});

/// All min(n1, n2) singular values, nonincreasing.
Vector singular_values(const Matrix& m);

/// Singular value thresholding: U diag(max(s - tau, 0)) V^T.
Matrix svt(const Matrix& m, double tau);

/// Same as svt, also reporting how many singular values survived.
Matrix svt(const Matrix& m, double tau, Eigen::Index& kept_rank);

/// Orthonormal basis for the span of the left singular vectors of a with
/// singular values above tol (absolute).
OrthoBasis orthonormalize(const Matrix& a, double tol = 1e-10);

Matrix project_support(const Matrix& m, const SupportSet& omega);
Matrix project_support_complement(const Matrix& m, const SupportSet& omega);

/// P_Pi(M) = M - (I - L L^T) M (I - R R^T).
Matrix project_pi(const Matrix& m, const OrthoBasis& left, const OrthoBasis& right);
/// P_Pi_perp(M) = (I - L L^T) M (I - R R^T).
Matrix project_pi_perp(const Matrix& m, const OrthoBasis& left, const OrthoBasis& right);

struct Norms {
  double operator_norm = 0.0;
  double frobenius = 0.0;
  double l1 = 0.0;
  double linf = 0.0;
  double nuclear = 0.0;
};

Norms norms(const Matrix& m);
double operator_norm(const Matrix& m);
double nuclear_norm(const Matrix& m);
/// Largest absolute entry (the entrywise l-infinity norm).
double max_abs(const Matrix& m);
/// Entrywise sign with sgn(0) = 0.
Matrix sign(const Matrix& m);

/// Throws NumericalError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace modpcp
