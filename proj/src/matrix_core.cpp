#include "modpcp/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modpcp/errors.hpp"

namespace modpcp {

namespace {

std::string shape_str(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_same_shape(const Matrix& m, const SupportSet& omega) {
  if (m.rows() != omega.rows() || m.cols() != omega.cols()) {
    throw DimensionError("support shape " + shape_str(omega.rows(), omega.cols()) +
                         " does not match matrix " + shape_str(m.rows(), m.cols()));
  }
}

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& m) {
  require_finite(m, "svd input");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("SVD failed to converge on " + shape_str(m.rows(), m.cols()) +
                         " matrix");
  }
  return dec;
}

}  // namespace

// ---------------------------------------------------------------- OrthoBasis

OrthoBasis::OrthoBasis(Matrix columns, double tol) : columns_(std::move(columns)) {
  if (columns_.cols() > columns_.rows()) {
    throw ParameterError("basis rank " + std::to_string(columns_.cols()) +
                         " exceeds ambient dimension " + std::to_string(columns_.rows()));
  }
  require_finite(columns_, "basis");
  if (columns_.cols() == 0) return;
  const Matrix gram = columns_.transpose() * columns_;
  const double dev = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw ParameterError("columns are not orthonormal (max |C^T C - I| = " +
                         std::to_string(dev) + ")");
  }
}

OrthoBasis OrthoBasis::empty(Eigen::Index ambient_dim) {
  return trusted(Matrix(ambient_dim, 0));
}

OrthoBasis OrthoBasis::identity(Eigen::Index ambient_dim) {
  return trusted(Matrix::Identity(ambient_dim, ambient_dim));
}

OrthoBasis OrthoBasis::canonical(Eigen::Index ambient_dim, Eigen::Index count) {
  if (count < 0 || count > ambient_dim) throw ParameterError("canonical basis rank out of range");
  return trusted(Matrix::Identity(ambient_dim, ambient_dim).leftCols(count));
}

OrthoBasis OrthoBasis::trusted(Matrix columns) {
  OrthoBasis b;
  b.columns_ = std::move(columns);
  return b;
}

Matrix OrthoBasis::project(const Matrix& m) const {
  if (m.rows() != ambient_dim()) throw DimensionError("project: row count mismatch");
  if (is_empty()) return Matrix::Zero(m.rows(), m.cols());
  return columns_ * (columns_.transpose() * m);
}

Matrix OrthoBasis::project_complement(const Matrix& m) const {
  if (m.rows() != ambient_dim()) throw DimensionError("project_complement: row count mismatch");
  if (is_empty()) return m;
  return m - columns_ * (columns_.transpose() * m);
}

Matrix OrthoBasis::projector() const { return columns_ * columns_.transpose(); }

OrthoBasis OrthoBasis::slice(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 0 || first + count > rank()) {
    throw ParameterError("basis slice out of range");
  }
  return trusted(columns_.middleCols(first, count));
}

OrthoBasis OrthoBasis::concat(const OrthoBasis& a, const OrthoBasis& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("concat: ambient dimension mismatch");
  Matrix c(a.ambient_dim(), a.rank() + b.rank());
  c << a.columns(), b.columns();
  return OrthoBasis(std::move(c), tol);
}

double projector_distance(const OrthoBasis& a, const OrthoBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("projector_distance: dimension mismatch");
  return (a.projector() - b.projector()).norm();
}

// ---------------------------------------------------------------- SupportSet

SupportSet::SupportSet(Eigen::Index rows, Eigen::Index cols)
    : mask_(Mask::Constant(rows, cols, false)) {
  if (rows < 0 || cols < 0) throw DimensionError("negative support shape");
}

SupportSet SupportSet::from_indices(
    Eigen::Index rows, Eigen::Index cols,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& indices) {
  SupportSet s(rows, cols);
  for (const auto& [i, j] : indices) {
    if (i < 0 || j < 0 || i >= rows || j >= cols) {
      throw DimensionError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") outside " + shape_str(rows, cols));
    }
    if (!s.insert(i, j)) {
      throw ParameterError("duplicate index (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    }
  }
  return s;
}

SupportSet SupportSet::from_mask(Mask mask) {
  SupportSet s;
  s.count_ = static_cast<std::size_t>(mask.count());
  s.mask_ = std::move(mask);
  return s;
}

SupportSet SupportSet::full(Eigen::Index rows, Eigen::Index cols) {
  return from_mask(Mask::Constant(rows, cols, true));
}

SupportSet SupportSet::nonzeros_of(const Matrix& m) {
  return from_mask(m.array() != 0.0);
}

bool SupportSet::insert(Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= rows() || j >= cols()) throw DimensionError("insert out of range");
  if (mask_(i, j)) return false;
  mask_(i, j) = true;
  ++count_;
  return true;
}

SupportSet SupportSet::complement() const { return from_mask(!mask_); }

SupportSet SupportSet::united(const SupportSet& other) const {
  if (rows() != other.rows() || cols() != other.cols()) throw DimensionError("union: shape mismatch");
  return from_mask(mask_ || other.mask_);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> SupportSet::indices() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  out.reserve(count_);
  for (Eigen::Index i = 0; i < rows(); ++i)
    for (Eigen::Index j = 0; j < cols(); ++j)
      if (mask_(i, j)) out.emplace_back(i, j);
  return out;
}

bool operator==(const SupportSet& a, const SupportSet& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.count_ == b.count_ &&
         (a.mask_ == b.mask_).all();
}

// ---------------------------------------------------------------- SVD family

double RankFloor::threshold(Eigen::Index rows, Eigen::Index cols, double s_max) const {
  if (kind == Kind::absolute) return value;
  return value * static_cast<double>(std::max(rows, cols)) * s_max;
}

Matrix SvdResult::reconstruct() const {
  return u.columns() * singular_values.asDiagonal() * v.columns().transpose();
}

double soft_threshold(double x, double eps) {
  if (x > eps) return x - eps;
  if (x < -eps) return x + eps;
  return 0.0;
}

Matrix soft_threshold_matrix(const Matrix& m, double eps) {
  return m.unaryExpr([eps](double x) { return soft_threshold(x, eps); });
}

SvdResult svd(const Matrix& m, RankFloor floor) {
  if (m.size() == 0) {
    return {OrthoBasis::empty(m.rows()), Vector(0), OrthoBasis::empty(m.cols())};
  }
  const auto dec = thin_svd(m);
  const Vector& s = dec.singularValues();
  const double cut = floor.threshold(m.rows(), m.cols(), s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return {OrthoBasis::trusted(dec.matrixU().leftCols(rank)), s.head(rank),
          OrthoBasis::trusted(dec.matrixV().leftCols(rank))};
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  require_finite(m, "singular_values input");
  Eigen::BDCSVD<Matrix> dec(m);
  if (dec.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  return dec.singularValues();
}

Matrix svt(const Matrix& m, double tau, Eigen::Index& kept_rank) {
  if (tau < 0) throw ParameterError("svt: tau must be nonnegative");
  kept_rank = 0;
  if (m.size() == 0) return m;
  const auto dec = thin_svd(m);
  const Vector& s = dec.singularValues();
  while (kept_rank < s.size() && s(kept_rank) > tau) ++kept_rank;
  if (kept_rank == 0) return Matrix::Zero(m.rows(), m.cols());
  const Vector shrunk = (s.head(kept_rank).array() - tau).matrix();
  return dec.matrixU().leftCols(kept_rank) * shrunk.asDiagonal() *
         dec.matrixV().leftCols(kept_rank).transpose();
}

Matrix svt(const Matrix& m, double tau) {
  Eigen::Index kept = 0;
  return svt(m, tau, kept);
}

OrthoBasis orthonormalize(const Matrix& a, double tol) {
  if (!(tol > 0)) throw ParameterError("orthonormalize: tol must be positive");
  return svd(a, RankFloor::absolute(tol)).u;
}

// ---------------------------------------------------------------- projections

Matrix project_support(const Matrix& m, const SupportSet& omega) {
  require_same_shape(m, omega);
  return omega.mask().select(m.array(), 0.0).matrix();
}

Matrix project_support_complement(const Matrix& m, const SupportSet& omega) {
  require_same_shape(m, omega);
  return omega.mask().select(0.0, m.array()).matrix();
}

Matrix project_pi_perp(const Matrix& m, const OrthoBasis& left, const OrthoBasis& right) {
  if (left.ambient_dim() != m.rows() || right.ambient_dim() != m.cols()) {
    throw DimensionError("project_pi: bases " + shape_str(left.ambient_dim(), right.ambient_dim()) +
                         " do not match matrix " + shape_str(m.rows(), m.cols()));
  }
  Matrix a = left.project_complement(m);
  if (!right.is_empty()) a -= (a * right.columns()) * right.columns().transpose();
  return a;
}

Matrix project_pi(const Matrix& m, const OrthoBasis& left, const OrthoBasis& right) {
  return m - project_pi_perp(m, left, right);
}

// ---------------------------------------------------------------- norms

double operator_norm(const Matrix& m) {
  const Vector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix sign(const Matrix& m) {
  return m.unaryExpr([](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

Norms norms(const Matrix& m) {
  Norms n;
  const Vector s = singular_values(m);
  n.operator_norm = s.size() ? s(0) : 0.0;
  n.nuclear = s.sum();
  n.frobenius = m.norm();
  n.l1 = m.cwiseAbs().sum();
  n.linf = max_abs(m);
  return n;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + " has non-finite entries");
}

}  // namespace modpcp
