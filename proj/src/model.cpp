#include "modpcp/model.hpp"

#include <string>

#include "modpcp/errors.hpp"

namespace modpcp {

void ProblemInstance::validate() const {
  require_finite(m, "M");
  if (prior.ambient_dim() != m.rows()) {
    throw DimensionError("prior ambient dimension " + std::to_string(prior.ambient_dim()) +
                         " != rows of M " + std::to_string(m.rows()));
  }
  if (truth_l.has_value() != truth_s.has_value()) {
    throw ParameterError("truth_l and truth_s must be given together");
  }
  if (noise_sigma && *noise_sigma < 0) throw ParameterError("noise_sigma must be nonnegative");
  if (truth_l) {
    if (truth_l->rows() != m.rows() || truth_l->cols() != m.cols() ||
        truth_s->rows() != m.rows() || truth_s->cols() != m.cols()) {
      throw DimensionError("ground-truth shapes do not match M");
    }
    const Matrix residual = m - *truth_l - *truth_s;
    if (noise_sigma) {
      // Rounding from forming M and the residual is allowed.
      const double slack = 1e-10 * (1.0 + *noise_sigma + m.norm() * 1e-3);
      if (residual.norm() > *noise_sigma + slack) {
        throw ParameterError("||M - L - S||_F exceeds the noise bound");
      }
    } else if (!(m.array() == (*truth_l + *truth_s).array()).all()) {
      throw ParameterError("M != L + S for a noiseless instance");
    }
  }
  if (truth_support) {
    if (truth_support->rows() != m.rows() || truth_support->cols() != m.cols()) {
      throw DimensionError("support shape does not match M");
    }
  }
}

LNewFactors compute_l_new(const Matrix& l, const OrthoBasis& g, RankFloor floor) {
  if (g.ambient_dim() != l.rows()) throw DimensionError("compute_l_new: G does not match L");
  // The floor is measured against L itself: the residual of a fully explained
  // L is pure rounding and must come out empty.
  const double cut = floor.threshold(l.rows(), l.cols(), l.size() ? operator_norm(l) : 0.0);
  auto dec = svd(g.project_complement(l), RankFloor::absolute(cut));
  return {std::move(dec.u), std::move(dec.singular_values), std::move(dec.v)};
}

SubspaceDecomposition decompose_subspace(const OrthoBasis& u, const OrthoBasis& g, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ParameterError("decompose_subspace: tol must lie in (0, 1)");
  if (u.ambient_dim() != g.ambient_dim()) throw DimensionError("decompose_subspace: ambient mismatch");

  SubspaceDecomposition out;
  const Eigen::Index n = u.ambient_dim();
  const Eigen::Index r = u.rank();
  const Eigen::Index r_g = g.rank();

  // Cosines of the principal angles between span(G) and span(U).
  Eigen::Index r0 = 0;
  Matrix g_rot = g.columns();
  if (r > 0 && r_g > 0) {
    Eigen::JacobiSVD<Matrix> cos(g.columns().transpose() * u.columns(),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& c = cos.singularValues();
    while (r0 < c.size() && c(r0) >= 1.0 - tol) ++r0;
    g_rot = g.columns() * cos.matrixU();
  }
  out.r0 = r0;
  out.r_extra = r_g - r0;
  out.r_new = r - r0;
  out.u0 = OrthoBasis::trusted(g_rot.leftCols(r0));
  out.g_extra = OrthoBasis::trusted(g_rot.rightCols(r_g - r0));

  if (out.r_new > 0) {
    Eigen::BDCSVD<Matrix> dec(g.project_complement(u.columns()),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) throw NumericalError("decompose_subspace: SVD failed");
    out.u_new = OrthoBasis::trusted(dec.matrixU().leftCols(out.r_new));
    out.v_new = OrthoBasis::trusted(dec.matrixV().leftCols(out.r_new));
    out.sigma_new = dec.singularValues().head(out.r_new);
  } else {
    out.u_new = OrthoBasis::empty(n);
    out.v_new = OrthoBasis::empty(r);
    out.sigma_new = Vector(0);
  }
  return out;
}

double reconstruct_identity_check(const SubspaceDecomposition& dec, const OrthoBasis& u,
                                  const OrthoBasis& g) {
  if (u.ambient_dim() != g.ambient_dim() || dec.u0.ambient_dim() != u.ambient_dim()) {
    throw DimensionError("reconstruct_identity_check: ambient mismatch");
  }
  Matrix joined(u.ambient_dim(), dec.u0.rank() + dec.u_new.rank());
  joined << dec.u0.columns(), dec.u_new.columns();
  const Matrix diff = u.projector() - joined * joined.transpose();
  return diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace modpcp
