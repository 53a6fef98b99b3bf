#include "modpcp/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modpcp/datagen.hpp"
#include "modpcp/errors.hpp"
#include "modpcp/model.hpp"
#include "modpcp/random.hpp"

namespace modpcp {

namespace {

struct Tangent {
  OrthoBasis left;   // [G U_new]
  OrthoBasis right;  // V_new
  Matrix uv;         // U_new V_new^T

  Matrix pi(const Matrix& m) const { return project_pi(m, left, right); }
  Matrix pi_perp(const Matrix& m) const { return project_pi_perp(m, left, right); }
};

Tangent make_tangent(const OrthoBasis& g, const OrthoBasis& u_new, const OrthoBasis& v_new,
                     Eigen::Index n1, Eigen::Index n2) {
  if (g.ambient_dim() != n1 || u_new.ambient_dim() != n1 || v_new.ambient_dim() != n2) {
    throw DimensionError("certificate: bases do not match the (" + std::to_string(n1) + ", " +
                         std::to_string(n2) + ") grid");
  }
  if (u_new.rank() != v_new.rank()) throw DimensionError("certificate: u_new and v_new ranks differ");
  Tangent t;
  t.left = OrthoBasis::concat(g, u_new);
  t.right = v_new;
  t.uv = u_new.columns() * v_new.columns().transpose();
  if (u_new.rank() == 0) t.uv = Matrix::Zero(n1, n2);
  return t;
}

CheckValue below(double value, double bound) { return {value, bound, value < bound}; }
CheckValue at_most(double value, double bound) { return {value, bound, value <= bound}; }

}  // namespace

int default_golfing_steps(Eigen::Index n1, Eigen::Index n2) {
  return static_cast<int>(std::ceil(1.3 * std::log(static_cast<double>(std::max(n1, n2)))));
}

void GolfingPlan::validate() const {
  if (j0 < 1) throw ParameterError("golfing plan: j0 must be >= 1");
  if (static_cast<int>(batches.size()) != j0) {
    throw ParameterError("golfing plan: expected " + std::to_string(j0) + " batches");
  }
  SupportSet covered(omega.rows(), omega.cols());
  for (const SupportSet& b : batches) {
    if (b.rows() != omega.rows() || b.cols() != omega.cols()) {
      throw DimensionError("golfing plan: batch shape differs from omega");
    }
    covered = covered.united(b);
  }
  if (!(covered.complement() == omega)) {
    throw ParameterError("golfing plan: omega is not the complement of the batch union");
  }
}

GolfingPlan make_golfing_plan(Eigen::Index n1, Eigen::Index n2, double rho_s, std::uint64_t seed,
                              int j0) {
  if (!(rho_s > 0.0 && rho_s < 1.0)) throw ParameterError("golfing plan: rho_s must lie in (0, 1)");
  if (n1 < 1 || n2 < 1) throw DimensionError("golfing plan: empty grid");
  GolfingPlan plan;
  plan.j0 = j0 > 0 ? j0 : default_golfing_steps(n1, n2);
  plan.rho_s = rho_s;
  plan.q = 1.0 - std::pow(rho_s, 1.0 / plan.j0);

  Rng rng(seed);
  SupportSet covered(n1, n2);
  for (int j = 0; j < plan.j0; ++j) {
    plan.batches.push_back(sample_support(n1, n2, BernoulliSupport{plan.q}, rng));
    covered = covered.united(plan.batches.back());
  }
  plan.omega = covered.complement();
  return plan;
}

WlResult construct_wl(const GolfingPlan& plan, const OrthoBasis& g, const OrthoBasis& u_new,
                      const OrthoBasis& v_new, GolfingTrace* trace) {
  const Eigen::Index n1 = plan.omega.rows();
  const Eigen::Index n2 = plan.omega.cols();
  const Tangent t = make_tangent(g, u_new, v_new, n1, n2);
  if (!(plan.q > 0.0)) throw ParameterError("golfing plan: q must be positive");

  Matrix y = Matrix::Zero(n1, n2);
  if (trace) {
    trace->z_fro.assign(1, t.uv.norm());
    trace->y_on_omega.clear();
  }
  for (const SupportSet& batch : plan.batches) {
    // P_Pi(U V^T - Y) = U V^T - P_Pi(Y) since U V^T lies in Pi.
    const Matrix z = t.uv - t.pi(y);
    y += project_support(z, batch) / plan.q;
    if (trace) {
      trace->z_fro.push_back((t.uv - t.pi(y)).norm());
      trace->y_on_omega.push_back(max_abs(project_support(y, plan.omega)));
    }
  }
  WlResult out;
  out.w_l = t.pi_perp(y);
  out.y_j0 = std::move(y);
  return out;
}

PowerResult op_norm_po_ppi(const SupportSet& omega, const OrthoBasis& g, const OrthoBasis& u_new,
                           const OrthoBasis& v_new, double power_tol, int max_iters,
                           std::uint64_t seed) {
  if (!(power_tol > 0.0) || max_iters < 1) throw ParameterError("power iteration: bad tolerance");
  const Eigen::Index n1 = omega.rows();
  const Eigen::Index n2 = omega.cols();
  const Tangent t = make_tangent(g, u_new, v_new, n1, n2);

  PowerResult res;
  if (omega.empty() || (t.left.is_empty() && t.right.is_empty())) {
    res.converged = true;
    return res;
  }
  Rng rng(seed);
  Matrix x = t.pi(rng.gaussian(n1, n2, 1.0));
  double nx = x.norm();
  if (nx == 0.0) {
    res.converged = true;
    return res;
  }
  x /= nx;
  double prev = -1.0;
  double eig = 0.0;
  for (int k = 0; k < max_iters; ++k) {
    const Matrix y = t.pi(project_support(x, omega));
    eig = (x.array() * y.array()).sum();
    res.iterations = k + 1;
    const double ny = y.norm();
    if (ny == 0.0) {
      eig = 0.0;
      res.converged = true;
      break;
    }
    if (prev >= 0.0 && std::abs(eig - prev) <= power_tol * std::abs(eig)) {
      res.converged = true;
      break;
    }
    prev = eig;
    x = y / ny;
  }
  res.value = std::sqrt(std::max(eig, 0.0));
  return res;
}

double op_norm_po_ppi_exact(const SupportSet& omega, const OrthoBasis& g,
                            const OrthoBasis& u_new, const OrthoBasis& v_new) {
  const Eigen::Index n1 = omega.rows();
  const Eigen::Index n2 = omega.cols();
  const Tangent t = make_tangent(g, u_new, v_new, n1, n2);
  const Eigen::Index dim = n1 * n2;
  if (dim > 2500) throw ParameterError("op_norm_po_ppi_exact: grid too large for the explicit operator");
  Matrix op(dim, dim);
  Matrix e = Matrix::Zero(n1, n2);
  for (Eigen::Index k = 0; k < dim; ++k) {
    e(k) = 1.0;
    const Matrix col = project_support(t.pi(e), omega);
    op.col(k) = Eigen::Map<const Vector>(col.data(), dim);
    e(k) = 0.0;
  }
  const Vector sv = singular_values(op);
  return sv.size() > 0 ? sv(0) : 0.0;
}

WsResult construct_ws(const Matrix& sign_s, const SupportSet& omega, const OrthoBasis& g,
                      const OrthoBasis& u_new, const OrthoBasis& v_new, double lambda,
                      double tol, int max_terms) {
  if (sign_s.rows() != omega.rows() || sign_s.cols() != omega.cols()) {
    throw DimensionError("construct_ws: sgn(S) shape differs from omega");
  }
  if (!(lambda > 0.0)) throw ParameterError("construct_ws: lambda must be positive");
  if (!(tol > 0.0) || max_terms < 1) throw ParameterError("construct_ws: bad truncation settings");
  const Tangent t = make_tangent(g, u_new, v_new, omega.rows(), omega.cols());

  WsResult res;
  const PowerResult pn = op_norm_po_ppi(omega, g, u_new, v_new);
  res.po_ppi_norm = pn.value;
  if (pn.value >= 1.0 - 1e-9) {
    throw NonConvergentSeriesError("construct_ws: ||P_Omega P_Pi|| = " + std::to_string(pn.value) +
                                   " >= 1, the Neumann series does not converge");
  }

  Matrix term = project_support(sign_s, omega);
  const double base = term.norm();
  res.partial_sum = Matrix::Zero(omega.rows(), omega.cols());
  if (base == 0.0) {
    res.w_s = res.partial_sum;
    return res;
  }
  res.partial_sum = term;
  res.term_norms.push_back(base);
  res.terms_used = 1;
  while (res.terms_used < max_terms) {
    term = project_support(t.pi(term), omega);
    const double tn = term.norm();
    if (tn < tol * base) break;
    res.partial_sum += term;
    res.term_norms.push_back(tn);
    ++res.terms_used;
  }
  res.w_s = lambda * t.pi_perp(res.partial_sum);
  return res;
}

bool CertificateChecks::sufficient_passed() const {
  return certificate_norm.passed && omega_residual.passed && off_support.passed && po_ppi.passed &&
         lambda_bound.passed;
}

bool CertificateChecks::components_passed() const {
  return wl_norm.passed && wl_off_support.passed && ws_norm.passed && ws_off_support.passed;
}

CertificateChecks verify_certificate(const Matrix& w_l, const Matrix& w_s,
                                     const SupportSet& omega, const OrthoBasis& g,
                                     const OrthoBasis& u_new, const OrthoBasis& v_new,
                                     double lambda, std::optional<double> po_ppi_norm) {
  const Eigen::Index n1 = omega.rows();
  const Eigen::Index n2 = omega.cols();
  if (w_l.rows() != n1 || w_l.cols() != n2 || w_s.rows() != n1 || w_s.cols() != n2) {
    throw DimensionError("verify_certificate: W^L / W^S shapes differ from omega");
  }
  const Tangent t = make_tangent(g, u_new, v_new, n1, n2);
  const double opn = po_ppi_norm ? *po_ppi_norm : op_norm_po_ppi(omega, g, u_new, v_new).value;

  const Matrix uv_wl = t.uv + w_l;
  CertificateChecks c;
  c.certificate_norm = below(operator_norm(w_l + w_s), 0.9);
  c.omega_residual = at_most(project_support(uv_wl, omega).norm(), lambda / 4.0);
  c.off_support = below(max_abs(project_support_complement(uv_wl + w_s, omega)), 0.9 * lambda);
  c.po_ppi = at_most(opn, 0.25);
  c.lambda_bound = below(lambda, 0.3);
  c.wl_norm = below(operator_norm(w_l), 1.0 / 16.0);
  c.wl_off_support = below(max_abs(project_support_complement(uv_wl, omega)), 0.4 * lambda);
  c.ws_norm = below(operator_norm(w_s), 67.0 / 80.0);
  c.ws_off_support = below(max_abs(project_support_complement(w_s, omega)), 0.5 * lambda);
  return c;
}

DualCertificate build_certificate(const GolfingPlan& plan, const Matrix& sign_s,
                                  const OrthoBasis& g, const OrthoBasis& u_new,
                                  const OrthoBasis& v_new, double lambda) {
  plan.validate();
  DualCertificate cert;
  WlResult wl = construct_wl(plan, g, u_new, v_new);
  WsResult ws = construct_ws(sign_s, plan.omega, g, u_new, v_new, lambda);
  cert.checks = verify_certificate(wl.w_l, ws.w_s, plan.omega, g, u_new, v_new, lambda,
                                   ws.po_ppi_norm);
  cert.w_l = std::move(wl.w_l);
  cert.w_s = std::move(ws.w_s);
  cert.neumann_terms_used = ws.terms_used;
  return cert;
}

CertificateInstance make_certificate_instance(Eigen::Index n1, Eigen::Index n2, Eigen::Index r,
                                              Eigen::Index r_new, Eigen::Index r_extra,
                                              double rho_s, std::uint64_t seed,
                                              CertificateModel model) {
  CertificateInstance inst;
  Rng rng(seed);
  if (model == CertificateModel::gaussian) {
    if (r < 1) throw ParameterError("certificate instance: r must be >= 1");
    PhaseGenParams p;
    p.n1 = n1;
    p.n2 = n2;
    p.r = r;
    p.m = 0;
    p.r_new_frac = static_cast<double>(r_new) / static_cast<double>(r);
    p.r_extra_frac = static_cast<double>(r_extra) / static_cast<double>(r);
    p.seed = rng.next();
    ProblemInstance base = gen_phase_instance(p);
    inst.l = *base.truth_l;
    inst.g = std::move(base.prior);
  } else {
    Vector u(n1);
    Vector v(n2);
    for (Eigen::Index i = 0; i < n1; ++i) u(i) = rng.sign() / std::sqrt(static_cast<double>(n1));
    for (Eigen::Index j = 0; j < n2; ++j) v(j) = rng.sign() / std::sqrt(static_cast<double>(n2));
    inst.l = u * v.transpose();
    inst.g = OrthoBasis::empty(n1);
  }
  const LNewFactors f = compute_l_new(inst.l, inst.g);
  inst.u_new = f.u_new;
  inst.v_new = f.v_new;
  inst.plan = make_golfing_plan(n1, n2, rho_s, rng.next());
  inst.s = random_signs_on(inst.plan.omega, rng);
  inst.lambda = 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2)));
  return inst;
}

}  // namespace modpcp
