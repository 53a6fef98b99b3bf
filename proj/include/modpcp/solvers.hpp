#pragma once

#include <optional>
#include <vector>

#include "modpcp/matrix_core.hpp"

namespace modpcp {

/// Inexact ALM parameters. Defaults follow the usual inexact-ALM schedule:
/// tau0 = 1.25 / ||M||, tau_{k+1} = min(growth * tau_k, tau_bar_factor * tau0),
/// stop when ||M - S - L_new - G X^T||_F / ||M||_F < rel_tol.
struct AlmConfig {
  /// nullopt selects lambda = 1 / sqrt(max(n1, n2)).
  std::optional<double> lambda;
  /// nullopt selects tau0 = 1.25 / ||M||.
  std::optional<double> tau0;
  double growth = 1.5;
  double tau_bar_factor = 1e7;
  double rel_tol = 1e-7;
  int max_iters = 1000;

  void validate() const;
  double resolve_lambda(Eigen::Index n1, Eigen::Index n2) const;
};

struct SolveResult {
  Matrix l_hat;      // low-rank estimate
  Matrix s_hat;
  Matrix l_new_hat;
  Matrix x_hat;      // n2 x r_G coefficients on the prior
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  double lambda = 0.0;
  /// tau_k used at iteration k.
  std::vector<double> tau_history;
};

/// Modified PCP:  min ||L_new||_* + lambda ||S||_1  s.t.  L_new + G X^T + S = M.
/// l_hat = M - s_hat. Throws NumericalError if an SVD fails or the residual
/// stops being finite.
SolveResult solve_mod_pcp(const Matrix& m, const OrthoBasis& g, const AlmConfig& cfg = {});

/// Plain PCP; identical to solve_mod_pcp with an empty prior.
SolveResult solve_pcp(const Matrix& m, const AlmConfig& cfg = {});

/// How the noise bound sigma maps to the quadratic penalty weight mu.
/// The generators and the noisy program bound ||Z||_F by sigma, so frobenius
/// is the default.
enum class NoiseCalibration {
  /// mu = sigma * sqrt(2 * max(n1, n2)); sigma read as a per-entry noise level.
  per_entry,
  /// mu = sigma / sqrt(n1 * n2) * sqrt(2 * max(n1, n2)); sigma read as ||Z||_F.
  frobenius,
};

double noise_penalty_mu(double sigma, Eigen::Index n1, Eigen::Index n2,
                        NoiseCalibration calibration = NoiseCalibration::frobenius);

/// Noisy modified PCP, penalized form:
///   min ||L_new||_* + lambda ||S||_1 + 1/(2 mu) ||M - L_new - G X^T - S||_F^2.
/// Solved with the same ALM by splitting off Z = M - L_new - G X^T - S. With
/// sigma = 0 the iterates are those of solve_mod_pcp. For sigma > 0,
/// l_hat = l_new_hat + G x_hat^T (the fitted noise is excluded) and
/// final_residual also subtracts the noise block.
SolveResult solve_stable_mod_pcp(const Matrix& m, const OrthoBasis& g, double sigma,
                                 const AlmConfig& cfg = {},
                                 NoiseCalibration calibration = NoiseCalibration::frobenius);

/// ||L_new||_* + lambda ||S||_1
double mod_pcp_objective(const Matrix& l_new, const Matrix& s, double lambda);

}  // namespace modpcp
