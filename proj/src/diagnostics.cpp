#include "modpcp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modpcp/errors.hpp"
#include "modpcp/random.hpp"

namespace modpcp {

namespace {

double max_row_norm_sq(const Matrix& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0.0;
  return a.rowwise().squaredNorm().maxCoeff();
}

double log_sq_n1(Eigen::Index n1, Eigen::Index n2) {
  const double l = std::log(static_cast<double>(std::max(n1, n2)));
  return l * l;
}

RhoReport rho_from(const Matrix& left, const OrthoBasis& u_new, const OrthoBasis& v_new,
                   Eigen::Index n1, Eigen::Index n2, RhoVariant variant) {
  if (left.rows() != n1 || u_new.ambient_dim() != n1 || v_new.ambient_dim() != n2) {
    throw DimensionError("rho_r: bases do not match (n1, n2)");
  }
  if (u_new.rank() != v_new.rank()) throw DimensionError("rho_r: u_new and v_new ranks differ");
  const double big = static_cast<double>(std::max(n1, n2));
  const double small = static_cast<double>(std::min(n1, n2));
  const double l2 = log_sq_n1(n1, n2);

  RhoReport r;
  r.variant = variant;
  r.rho_pu = max_row_norm_sq(left) * static_cast<double>(n1) * l2 / small;
  r.rho_pv = max_row_norm_sq(v_new.columns()) * static_cast<double>(n2) * l2 / small;
  double uv_inf = 0.0;
  if (u_new.rank() > 0) uv_inf = max_abs(u_new.columns() * v_new.columns().transpose());
  r.rho_uv = uv_inf * uv_inf * big * l2;
  r.rho_max = std::max({r.rho_pu, r.rho_pv, r.rho_uv});
  return r;
}

}  // namespace

RhoReport rho_r_modpcp(const OrthoBasis& g, const OrthoBasis& u_new, const OrthoBasis& v_new,
                       Eigen::Index n1, Eigen::Index n2) {
  if (g.ambient_dim() != n1) throw DimensionError("rho_r_modpcp: G does not match n1");
  Matrix left(n1, g.rank() + u_new.rank());
  if (u_new.ambient_dim() != n1) throw DimensionError("rho_r_modpcp: u_new does not match n1");
  left << g.columns(), u_new.columns();
  return rho_from(left, u_new, v_new, n1, n2, RhoVariant::mod_pcp);
}

RhoReport rho_r_pcp(const OrthoBasis& u, const OrthoBasis& v, Eigen::Index n1, Eigen::Index n2) {
  if (u.ambient_dim() != n1) throw DimensionError("rho_r_pcp: U does not match n1");
  return rho_from(u.columns(), u, v, n1, n2, RhoVariant::pcp);
}

double assumption_b1(double rho_r, double c01) {
  const double root = std::sqrt(rho_r);
  return std::max({60.0 * root, 11.0 * c01 * root, 0.11});
}

bool AssumptionReport::all_satisfied() const {
  return a.satisfied && b.satisfied && c.satisfied && d.satisfied && e.satisfied &&
         f.satisfied && (!support_size || support_size->satisfied);
}

AssumptionReport check_assumption1(double rho_s, double rho_r, Eigen::Index n1, Eigen::Index n2,
                                   double c01, double c03, std::optional<double> m) {
  if (!(rho_s > 0) || !(rho_r > 0) || n1 <= 0 || n2 <= 0 || !(c01 > 0) || !(c03 > 0)) {
    throw ParameterError("check_assumption1: all inputs must be positive");
  }
  AssumptionReport rep;
  rep.c01 = c01;
  rep.c03 = c03;
  rep.rho_s = rho_s;
  rep.rho_r = rho_r;
  rep.n1 = n1;
  rep.n2 = n2;
  rep.note = "C01 and C03 are user-configurable placeholders (no closed form is known)";

  const double big = static_cast<double>(std::max(n1, n2));
  const double small = static_cast<double>(std::min(n1, n2));
  const double log_big = std::log(big);

  rep.a.lhs = rho_r;
  rep.a.rhs = std::min(1e-4, 7.2483e-5 / std::pow(c03, 4));
  rep.a.satisfied = rep.a.lhs <= rep.a.rhs;

  rep.b.lhs = rho_s;
  rep.b.rhs = std::min(1.0 - 1.5 * assumption_b1(rho_r, c01), 0.0156);
  rep.b.satisfied = std::abs(rep.b.lhs - rep.b.rhs) <= 1e-12 * std::max(1.0, std::abs(rep.b.rhs));

  rep.c.lhs = big;
  rep.c.rhs = std::max({std::exp(0.5019 * rho_r), std::exp(253.9618 * c01 * rho_r), 1024.0});
  rep.c.satisfied = rep.c.lhs >= rep.c.rhs;

  rep.d.lhs = small;
  rep.d.rhs = 100.0 * log_big * log_big;
  rep.d.satisfied = rep.d.lhs >= rep.d.rhs;

  const double total = static_cast<double>(n1 + n2);
  rep.e.lhs = std::pow(total, 1.0 / 6.0) / std::log(total);
  const double denom = std::pow(rho_s, 1.0 / 6.0) * (1.0 - 5.6561 * std::sqrt(rho_s));
  rep.e.rhs = denom > 0 ? 10.5 / denom : std::numeric_limits<double>::infinity();
  rep.e.satisfied = rep.e.lhs > rep.e.rhs;

  rep.f.lhs = big * small / (500.0 * log_big);
  rep.f.rhs = 1.0 / (rho_s * rho_s);
  rep.f.satisfied = rep.f.lhs > rep.f.rhs;

  if (m) {
    AssumptionItem item;
    item.lhs = *m;
    item.rhs = 0.4 * rho_s * static_cast<double>(n1) * static_cast<double>(n2);
    item.satisfied = item.lhs <= item.rhs;
    rep.support_size = item;
  }
  return rep;
}

SignProbeResult sign_norm_probe(Eigen::Index n1, Eigen::Index n2, double rho_s, int trials,
                                std::uint64_t seed) {
  if (trials < 1) throw ParameterError("sign_norm_probe: trials must be >= 1");
  if (!(rho_s >= 0.0 && rho_s <= 1.0)) throw ParameterError("sign_norm_probe: rho_s outside [0, 1]");
  if (n1 <= 0 || n2 <= 0) throw ParameterError("sign_norm_probe: empty shape");

  SignProbeResult out;
  out.trials = trials;
  out.threshold = 0.5 * std::sqrt(static_cast<double>(std::max(n1, n2)));
  int exceed = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, 0, static_cast<std::uint64_t>(t)));
    Matrix e(n1, n2);
    for (Eigen::Index j = 0; j < n2; ++j) {
      for (Eigen::Index i = 0; i < n1; ++i) {
        const double u = rng.uniform01();
        e(i, j) = u < 0.5 * rho_s ? 1.0 : (u < rho_s ? -1.0 : 0.0);
      }
    }
    const double norm = operator_norm(e);
    out.max_observed_norm = std::max(out.max_observed_norm, norm);
    if (norm >= out.threshold) ++exceed;
  }
  out.exceed_fraction = static_cast<double>(exceed) / trials;
  return out;
}

}  // namespace modpcp
