#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "modpcp/matrix_core.hpp"

namespace modpcp {

enum class RhoVariant { mod_pcp, pcp };

/// Smallest rho_r for which each incoherence inequality holds with equality.
/// With n(1) = max(n1, n2), n(2) = min(n1, n2), natural log:
///   rho_pu = max_i ||[G U_new]^T e_i||^2 * n1 log^2 n(1) / n(2)
///   rho_pv = max_i ||V_new^T e_i||^2     * n2 log^2 n(1) / n(2)
///   rho_uv = ||U_new V_new^T||_inf^2     * n(1) log^2 n(1)
struct RhoReport {
  double rho_pu = 0.0;
  double rho_pv = 0.0;
  double rho_uv = 0.0;
  double rho_max = 0.0;
  RhoVariant variant = RhoVariant::mod_pcp;
};

/// Empty G together with empty u_new gives rho_pu = 0.
RhoReport rho_r_modpcp(const OrthoBasis& g, const OrthoBasis& u_new, const OrthoBasis& v_new,
                       Eigen::Index n1, Eigen::Index n2);
RhoReport rho_r_pcp(const OrthoBasis& u, const OrthoBasis& v, Eigen::Index n1, Eigen::Index n2);

struct AssumptionItem {
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Literal evaluation of the six sufficient conditions on (rho_s, rho_r, n1, n2).
/// C01 and C03 are numerical constants with no known closed form; the
/// defaults of 1.0 are placeholders the caller is expected to override.
struct AssumptionReport {
  AssumptionItem a;  // rho_r <= min(1e-4, 7.2483e-5 C03^-4)
  AssumptionItem b;  // rho_s == min(1 - 1.5 b1(rho_r), 0.0156), relative tol 1e-12
  AssumptionItem c;  // n(1) >= max(exp(0.5019 rho_r), exp(253.9618 C01 rho_r), 1024)
  AssumptionItem d;  // n(2) >= 100 log^2 n(1)
  AssumptionItem e;  // (n1+n2)^(1/6) / log(n1+n2) > 10.5 / (rho_s^(1/6) (1 - 5.6561 sqrt(rho_s)))
  AssumptionItem f;  // n(1) n(2) / (500 log n(1)) > 1 / rho_s^2
  std::optional<AssumptionItem> support_size;  // m <= 0.4 rho_s n1 n2, when m is given
  double c01 = 1.0;
  double c03 = 1.0;
  double rho_s = 0.0;
  double rho_r = 0.0;
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;
  std::string note;

  bool all_satisfied() const;
};

/// b1(rho_r) = max(60 sqrt(rho_r), 11 C01 sqrt(rho_r), 0.11)
double assumption_b1(double rho_r, double c01);

AssumptionReport check_assumption1(double rho_s, double rho_r, Eigen::Index n1, Eigen::Index n2,
                                   double c01 = 1.0, double c03 = 1.0,
                                   std::optional<double> m = std::nullopt);

struct SignProbeResult {
  double exceed_fraction = 0.0;
  double max_observed_norm = 0.0;
  double threshold = 0.0;  // 0.5 sqrt(n(1))
  int trials = 0;
};

/// Draws E with i.i.d. entries +1 (prob rho_s/2), -1 (prob rho_s/2), 0
/// otherwise and reports how often ||E|| >= 0.5 sqrt(n(1)). Trial t uses
/// seed mix_seed(seed, 0, t).
SignProbeResult sign_norm_probe(Eigen::Index n1, Eigen::Index n2, double rho_s, int trials,
                                std::uint64_t seed);

}  // namespace modpcp
