#pragma once

// Dual certificate for the modified program. Pi is the tangent space spanned
// by the left basis [G U_new] and the right basis V_new. The certificate is
// W = W^L + W^S, with W^L from a golfing recursion over Bernoulli batches
// covering the complement of the support Omega, and W^S from the least-squares
// (Neumann series) correction that makes P_Omega W = lambda sgn(S).

#include <cstdint>
#include <optional>
#include <vector>

#include "modpcp/matrix_core.hpp"

namespace modpcp {

/// ceil(1.3 * ln(max(n1, n2)))
int default_golfing_steps(Eigen::Index n1, Eigen::Index n2);

struct GolfingPlan {
  int j0 = 0;
  double q = 0.0;  // batch probability, 1 - rho_s^(1 / j0)
  double rho_s = 0.0;
  std::vector<SupportSet> batches;
  /// Complement of the union of the batches.
  SupportSet omega;

  /// Checks omega == complement(union(batches)) and matching shapes.
  void validate() const;
};

/// j0 <= 0 selects default_golfing_steps.
GolfingPlan make_golfing_plan(Eigen::Index n1, Eigen::Index n2, double rho_s, std::uint64_t seed,
                              int j0 = 0);

/// Ordered per-step record of the golfing recursion.
struct GolfingTrace {
  /// ||Z_j||_F with Z_j = U_new V_new^T - P_Pi(Y_j), j = 0 .. j0.
  std::vector<double> z_fro;
  /// max |P_Omega(Y_j)|, j = 1 .. j0.
  std::vector<double> y_on_omega;
};

struct WlResult {
  Matrix w_l;
  Matrix y_j0;
};

WlResult construct_wl(const GolfingPlan& plan, const OrthoBasis& g, const OrthoBasis& u_new,
                      const OrthoBasis& v_new, GolfingTrace* trace = nullptr);

struct PowerResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// ||P_Omega P_Pi|| by power iteration on P_Pi P_Omega P_Pi from a random
/// start; returns the square root of the dominant eigenvalue.
PowerResult op_norm_po_ppi(const SupportSet& omega, const OrthoBasis& g, const OrthoBasis& u_new,
                           const OrthoBasis& v_new, double power_tol = 1e-8,
                           int max_iters = 1000, std::uint64_t seed = 0);

/// Same quantity from the explicit (n1 n2) x (n1 n2) matrix of the map.
/// Intended for tiny shapes only.
double op_norm_po_ppi_exact(const SupportSet& omega, const OrthoBasis& g,
                            const OrthoBasis& u_new, const OrthoBasis& v_new);

struct WsResult {
  Matrix w_s;
  /// Sum of the Neumann terms (before lambda and the Pi_perp projection).
  Matrix partial_sum;
  int terms_used = 0;
  /// Frobenius norm of every summed term.
  std::vector<double> term_norms;
  double po_ppi_norm = 0.0;
};

/// W^S = lambda P_Pi_perp sum_k (P_Omega P_Pi P_Omega)^k sgn(S). Entries of
/// sign_s outside omega are ignored. Terms are summed until one drops below
/// tol * ||sgn(S)||_F or max_terms have been used. Throws
/// NonConvergentSeriesError when ||P_Omega P_Pi|| >= 1.
WsResult construct_ws(const Matrix& sign_s, const SupportSet& omega, const OrthoBasis& g,
                      const OrthoBasis& u_new, const OrthoBasis& v_new, double lambda,
                      double tol = 1e-12, int max_terms = 200);

struct CheckValue {
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct CertificateChecks {
  // sufficient conditions for exact recovery
  CheckValue certificate_norm;  // ||W^L + W^S|| < 9/10
  CheckValue omega_residual;    // ||P_Omega(U_new V_new^T + W^L)||_F <= lambda / 4
  CheckValue off_support;       // ||P_Omega_perp(U_new V_new^T + W^L + W^S)||_inf < 9 lambda / 10
  CheckValue po_ppi;            // ||P_Omega P_Pi|| <= 1/4
  CheckValue lambda_bound;      // lambda < 3/10

  // bounds the golfing and least-squares pieces are expected to meet
  CheckValue wl_norm;               // ||W^L|| < 1/16
  CheckValue wl_off_support;        // ||P_Omega_perp(U_new V_new^T + W^L)||_inf < 2 lambda / 5
  CheckValue ws_norm;               // ||W^S|| < 67/80
  CheckValue ws_off_support;        // ||P_Omega_perp(W^S)||_inf < lambda / 2

  bool sufficient_passed() const;
  bool components_passed() const;
  bool all_passed() const { return sufficient_passed() && components_passed(); }
};

/// po_ppi_norm is computed with op_norm_po_ppi when not supplied.
CertificateChecks verify_certificate(const Matrix& w_l, const Matrix& w_s,
                                     const SupportSet& omega, const OrthoBasis& g,
                                     const OrthoBasis& u_new, const OrthoBasis& v_new,
                                     double lambda,
                                     std::optional<double> po_ppi_norm = std::nullopt);

struct DualCertificate {
  Matrix w_l;
  Matrix w_s;
  int neumann_terms_used = 0;
  CertificateChecks checks;
};

/// Golfing plus least squares plus verification for S supported on plan.omega.
DualCertificate build_certificate(const GolfingPlan& plan, const Matrix& sign_s,
                                  const OrthoBasis& g, const OrthoBasis& u_new,
                                  const OrthoBasis& v_new, double lambda);

/// How the low-rank part of a certificate test instance is drawn.
enum class CertificateModel {
  /// L = X Y^T Gaussian with a partial prior, as for the phase-transition family.
  gaussian,
  /// Rank-1 L with flat random-sign singular vectors (entries +-1/sqrt(n)) and no prior.
  flat_signs,
};

/// Instance whose support is exactly the golfing plan's omega with random
/// +-1 signs, so the certificate can be built and the solver run on the same data.
struct CertificateInstance {
  Matrix l;
  Matrix s;  // +-1 on plan.omega
  OrthoBasis g;
  OrthoBasis u_new;
  OrthoBasis v_new;
  GolfingPlan plan;
  double lambda = 0.0;
};

CertificateInstance make_certificate_instance(Eigen::Index n1, Eigen::Index n2, Eigen::Index r,
                                              Eigen::Index r_new, Eigen::Index r_extra,
                                              double rho_s, std::uint64_t seed,
                                              CertificateModel model = CertificateModel::gaussian);

}  // namespace modpcp
