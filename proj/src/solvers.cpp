#include "modpcp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modpcp/errors.hpp"

namespace modpcp {

void AlmConfig::validate() const {
  if (lambda && !(*lambda > 0)) throw ParameterError("lambda must be positive");
  if (tau0 && !(*tau0 > 0)) throw ParameterError("tau0 must be positive");
  if (!(growth > 1.0)) throw ParameterError("growth must exceed 1");
  if (!(tau_bar_factor >= 1.0)) throw ParameterError("tau_bar_factor must be at least 1");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
  if (max_iters < 0) throw ParameterError("max_iters must be nonnegative");
}

double AlmConfig::resolve_lambda(Eigen::Index n1, Eigen::Index n2) const {
  if (lambda) return *lambda;
  return 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2)));
}

double noise_penalty_mu(double sigma, Eigen::Index n1, Eigen::Index n2,
                        NoiseCalibration calibration) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be nonnegative");
  const double big = static_cast<double>(std::max(n1, n2));
  const double mu = sigma * std::sqrt(2.0 * big);
  if (calibration == NoiseCalibration::frobenius) {
    return mu / std::sqrt(static_cast<double>(n1) * static_cast<double>(n2));
  }
  return mu;
}

double mod_pcp_objective(const Matrix& l_new, const Matrix& s, double lambda) {
  return nuclear_norm(l_new) + lambda * s.cwiseAbs().sum();
}

namespace {

// Inexact ALM for
//   min ||L_new||_* + lambda ||S||_1 + 1/(2 mu) ||Z||_F^2
//   s.t. L_new + G X^T + S + Z = M.
// mu = 0 pins Z to zero and the loop is exactly the modified-PCP iteration.
// The (S, Z) block has a closed form: S = shrink(C, lambda (1 + mu tau) / tau),
// Z = mu tau / (1 + mu tau) * (C - S).
SolveResult run_alm(const Matrix& m, const OrthoBasis& g, double mu, const AlmConfig& cfg) {
  cfg.validate();
  require_finite(m, "M");
  if (g.ambient_dim() != m.rows()) {
    throw DimensionError("prior has ambient dimension " + std::to_string(g.ambient_dim()) +
                         ", M has " + std::to_string(m.rows()) + " rows");
  }
  const Eigen::Index n1 = m.rows();
  const Eigen::Index n2 = m.cols();
  const Eigen::Index r_g = g.rank();
  const Matrix& gc = g.columns();

  SolveResult res;
  res.lambda = cfg.resolve_lambda(n1, n2);
  res.s_hat = Matrix::Zero(n1, n2);
  res.l_new_hat = Matrix::Zero(n1, n2);
  res.x_hat = Matrix::Zero(n2, r_g);

  const double m_fro = m.norm();
  if (m_fro == 0.0) {
    res.l_hat = Matrix::Zero(n1, n2);
    res.converged = true;
    return res;
  }

  const double lambda = res.lambda;
  const double m_op = operator_norm(m);
  Matrix y = m / std::max(m_op, max_abs(m) / lambda);
  double tau = cfg.tau0.value_or(1.25 / m_op);
  const double tau_bar = cfg.tau_bar_factor * tau;

  Matrix& s = res.s_hat;
  Matrix& l_new = res.l_new_hat;
  Matrix gxt = Matrix::Zero(n1, n2);
  Matrix z;
  if (mu > 0) z = Matrix::Zero(n1, n2);

  for (int k = 0; k < cfg.max_iters; ++k) {
    const double inv_tau = 1.0 / tau;
    res.tau_history.push_back(tau);

    Matrix c = m - gxt - l_new + inv_tau * y;
    if (mu > 0) {
      const double scale = 1.0 + mu * tau;
      s = soft_threshold_matrix(c, lambda * scale * inv_tau);
      z = (mu * tau / scale) * (c - s);
    } else {
      s = soft_threshold_matrix(c, lambda * inv_tau);
    }

    Matrix a = m - s + inv_tau * y;
    if (mu > 0) a -= z;
    try {
      if (r_g > 0) {
        const Matrix coeff = gc.transpose() * a;  // r_G x n2, this is X^T
        gxt = gc * coeff;
        l_new = svt(a - gxt, inv_tau);
        res.x_hat = coeff.transpose();
      } else {
        l_new = svt(a, inv_tau);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at ALM iteration " + std::to_string(k));
    }

    Matrix residual = m - s - l_new - gxt;
    if (mu > 0) residual -= z;
    y += tau * residual;
    const double rel = residual.norm() / m_fro;
    res.iterations = k + 1;
    res.final_residual = rel;
    if (!std::isfinite(rel)) {
      throw NumericalError("ALM diverged (non-finite residual) at iteration " + std::to_string(k));
    }
    if (rel < cfg.rel_tol) {
      res.converged = true;
      break;
    }
    tau = std::min(cfg.growth * tau, tau_bar);
  }

  if (mu > 0) {
    res.l_hat = l_new + gxt;
  } else {
    res.l_hat = m - s;
  }
  return res;
}

}  // namespace

SolveResult solve_mod_pcp(const Matrix& m, const OrthoBasis& g, const AlmConfig& cfg) {
  return run_alm(m, g, 0.0, cfg);
}

SolveResult solve_pcp(const Matrix& m, const AlmConfig& cfg) {
  return solve_mod_pcp(m, OrthoBasis::empty(m.rows()), cfg);
}

SolveResult solve_stable_mod_pcp(const Matrix& m, const OrthoBasis& g, double sigma,
                                 const AlmConfig& cfg, NoiseCalibration calibration) {
  const double mu = noise_penalty_mu(sigma, m.rows(), m.cols(), calibration);
  return run_alm(m, g, mu, cfg);
}

}  // namespace modpcp
