// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.
//   acceptance                 all criteria
//   acceptance --criterion N   only criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "modpcp/certificate.hpp"
#include "modpcp/datagen.hpp"
#include "modpcp/diagnostics.hpp"
#include "modpcp/harness.hpp"
#include "modpcp/model.hpp"
#include "modpcp/online_pipeline.hpp"
#include "modpcp/random.hpp"
#include "modpcp/solvers.hpp"

using namespace modpcp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentSpec base_spec(ExperimentKind kind, int trials, std::uint64_t seed) {
  ExperimentSpec s;
  s.kind = kind;
  s.trials = trials;
  s.base_seed = seed;
  s.threads = 1;
  s.solvers = {"pcp", "mod_pcp"};
  return s;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? NAN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// rows grouped by (point, solver)
std::map<std::pair<std::size_t, std::string>, std::vector<MetricRow>> by_point(const std::vector<MetricRow>& rows) {
  std::map<std::pair<std::size_t, std::string>, std::vector<MetricRow>> out;
  for (const MetricRow& r : rows) out[{r.point, r.solver}].push_back(r);
  return out;
}

double sparse_error_or_one(const MetricRow& r) { return r.sparse_error ? *r.sparse_error : 1.0; }

// ------------------------------------------------------------------ 1
Outcome criterion_exact_recovery() {
  ExperimentSpec s = base_spec(ExperimentKind::solve_single, 10, 101);
  s.solvers = {"mod_pcp"};
  s.values = {10};
  int ok = 0;
  double worst = 0.0;
  for (const MetricRow& r : run_experiment_rows(s)) {
    const double e = sparse_error_or_one(r);
    worst = std::max(worst, e);
    if (e < 1e-6) ++ok;
  }
  return {ok >= 9, std::to_string(ok) + "/10 trials with sparse error < 1e-6 (worst " + fmt("%.3g", worst) + ")"};
}

// ------------------------------------------------------------------ 2
Outcome criterion_rextra_ordering() {
  ExperimentSpec s = base_spec(ExperimentKind::rextra_sweep, 10, 202);
  s.values = {0, 10, 20, 30, 40, 50};
  const auto groups = by_point(run_experiment_rows(s));
  bool pass = true;
  std::ostringstream d;
  for (std::size_t p = 0; p < s.values.size(); ++p) {
    std::vector<double> mod, pcp;
    for (const auto& r : groups.at({p, "mod_pcp"})) mod.push_back(sparse_error_or_one(r));
    for (const auto& r : groups.at({p, "pcp"})) pcp.push_back(sparse_error_or_one(r));
    const bool ok = mean(mod) < mean(pcp);
    pass = pass && ok;
    d << " r_extra=" << s.values[p] << ":" << fmt("%.2e", mean(mod)) << "<" << fmt("%.2e", mean(pcp))
      << (ok ? "" : "(no)");
  }
  return {pass, "mean sparse error mod<pcp at every point;" + d.str()};
}

// ------------------------------------------------------------------ 3
Outcome criterion_n2_sweep() {
  ExperimentSpec s = base_spec(ExperimentKind::n2_sweep, 10, 303);
  s.d = 60;
  s.r = 20;
  s.r_new = 2;
  s.r_extra = 0;
  s.values = {40, 60, 80, 100, 120, 140, 160, 180, 200};
  const auto groups = by_point(run_experiment_rows(s));
  auto first_success = [&](const std::string& solver) -> std::int64_t {
    for (std::size_t p = 0; p < s.values.size(); ++p) {
      int ok = 0;
      for (const auto& r : groups.at({p, solver})) ok += sparse_error_or_one(r) < 1e-6;
      if (2 * ok > s.trials) return s.values[p];
    }
    return -1;
  };
  const std::int64_t mod = first_success("mod_pcp");
  const std::int64_t pcp = first_success("pcp");
  const bool pass = mod > 0 && (pcp < 0 || mod < pcp);
  return {pass, "first majority-success n2: mod_pcp=" + (mod > 0 ? std::to_string(mod) : "none") +
                    " pcp=" + (pcp > 0 ? std::to_string(pcp) : "none (beyond 200)")};
}

// ------------------------------------------------------------------ 4
Outcome criterion_phase_containment() {
  ExperimentSpec s = base_spec(ExperimentKind::phase_grid, 5, 404);
  s.n1 = 100;
  s.n2 = 100;
  s.r_values = {5, 10, 15, 20, 25, 30, 35, 40};
  s.rho_values = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35};
  const auto groups = by_point(run_experiment_rows(s));
  const std::size_t cells = s.num_points();
  std::size_t good = 0;
  int mod_total = 0, pcp_total = 0;
  for (std::size_t p = 0; p < cells; ++p) {
    int mod = 0, pcp = 0;
    for (const auto& r : groups.at({p, "mod_pcp"})) mod += r.success_1e3;
    for (const auto& r : groups.at({p, "pcp"})) pcp += r.success_1e3;
    mod_total += mod;
    pcp_total += pcp;
    if (mod >= pcp) ++good;
  }
  const bool pass = static_cast<double>(good) >= 0.95 * static_cast<double>(cells);
  return {pass, std::to_string(good) + "/" + std::to_string(cells) +
                    " cells with mod_pcp success fraction >= pcp (successes mod_pcp " +
                    std::to_string(mod_total) + ", pcp " + std::to_string(pcp_total) + ")"};
}

// ------------------------------------------------------------------ 5
Outcome criterion_rho_diagnostics() {
  int smaller = 0, uv_max = 0;
  const int seeds = 10;
  for (int t = 0; t < seeds; ++t) {
    StaticGenParams p;
    p.seed = mix_seed(505, 0, static_cast<std::uint64_t>(t));
    const StaticInstance inst = gen_static_instance(p);
    const Matrix& l = *inst.problem.truth_l;
    const LNewFactors f = compute_l_new(l, inst.problem.prior);
    const SvdResult full = svd(l);
    const RhoReport mod = rho_r_modpcp(inst.problem.prior, f.u_new, f.v_new, l.rows(), l.cols());
    const RhoReport pcp = rho_r_pcp(full.u, full.v, l.rows(), l.cols());
    smaller += mod.rho_max < pcp.rho_max;
    uv_max += pcp.rho_uv >= pcp.rho_pu && pcp.rho_uv >= pcp.rho_pv;
  }
  return {smaller >= 9 && uv_max >= 9, "rho_max(mod)<rho_max(pcp) in " + std::to_string(smaller) +
                                           "/10, rho_uv largest for pcp in " + std::to_string(uv_max) + "/10"};
}

// ------------------------------------------------------------------ 6
Outcome criterion_certificate() {
  const int seeds = 20;
  int identity_ok = 0, suite_ok = 0, wl_ok = 0;
  double worst_identity = 0.0;
  for (int t = 0; t < seeds; ++t) {
    const CertificateInstance inst =
        make_certificate_instance(120, 120, 2, 1, 0, 0.05, mix_seed(606, 0, static_cast<std::uint64_t>(t)));
    const Matrix sgn = sign(inst.s);
    const WsResult ws = construct_ws(sgn, inst.plan.omega, inst.g, inst.u_new, inst.v_new, inst.lambda);
    const double id = (project_support(ws.w_s, inst.plan.omega) - inst.lambda * sgn).cwiseAbs().maxCoeff();
    worst_identity = std::max(worst_identity, id);
    identity_ok += id <= 1e-8;
    const DualCertificate cert = build_certificate(inst.plan, sgn, inst.g, inst.u_new, inst.v_new, inst.lambda);
    suite_ok += cert.checks.all_passed();
    wl_ok += cert.checks.wl_norm.passed;
  }
  const bool pass = identity_ok == seeds && suite_ok * 10 >= seeds * 8;
  return {pass, "identity within 1e-8 on " + std::to_string(identity_ok) + "/20 (worst " +
                    fmt("%.2e", worst_identity) + "); full condition suite on " + std::to_string(suite_ok) +
                    "/20 (need 16); ||W^L||<1/16 on " + std::to_string(wl_ok) + "/20"};
}

// ------------------------------------------------------------------ 7
Outcome criterion_sign_probe() {
  const SignProbeResult r = sign_norm_probe(400, 400, 0.02, 100, 707);
  return {r.exceed_fraction == 0.0, "exceed fraction " + fmt("%.3g", r.exceed_fraction) + ", max norm " +
                                        fmt("%.4g", r.max_observed_norm) + " vs threshold " +
                                        fmt("%.4g", r.threshold)};
}

// ------------------------------------------------------------------ 8
Outcome criterion_online() {
  ExperimentSpec s = base_spec(ExperimentKind::online_abc, 5, 808);
  s.solvers = {"mod_pcp"};
  s.cases = "a,c";
  const auto rows = run_experiment_rows(s);
  std::map<int, std::vector<double>> seg_a;
  std::vector<double> all_c;
  int failures = 0;
  for (const MetricRow& r : rows) {
    if (!r.nrmse) {
      ++failures;
      continue;
    }
    if (r.label == "a") seg_a[r.segment].push_back(*r.nrmse);
    if (r.label == "c") all_c.push_back(*r.nrmse);
  }
  bool a_ok = failures == 0 && seg_a.size() == 4;
  std::ostringstream d;
  d << "case a per-segment mean NRMSE:";
  for (const auto& [seg, v] : seg_a) {
    const double m = mean(v);
    a_ok = a_ok && m < 1e-5;
    d << " " << fmt("%.2e", m);
  }
  const double c = mean(all_c);
  const bool c_ok = c > 1e-2;
  d << "; case c mean NRMSE " << fmt("%.3g", c) << " (expected > 1e-2)";
  if (failures) d << "; " << failures << " failed rows";
  return {a_ok && c_ok, d.str()};
}

// ------------------------------------------------------------------ 9
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

Outcome criterion_stable() {
  ExperimentSpec s = base_spec(ExperimentKind::noisy_sigma_sweep, 20, 909);
  s.solvers = {"stable_mod_pcp"};
  s.n1 = 200;
  s.n2 = 200;
  s.r = 10;
  s.r_new = 2;
  s.r_extra = 0;
  for (int k = 1; k <= 10; ++k) s.sigma_values.push_back(0.1 * k);
  const auto groups = by_point(run_experiment_rows(s));
  std::vector<double> sig, ml, ms;
  bool finite = true, below = true;
  for (std::size_t p = 0; p < s.sigma_values.size(); ++p) {
    std::vector<double> l, sp, bl, bs;
    for (const auto& r : groups.at({p, "stable_mod_pcp"})) {
      if (!r.rms_l || !r.rms_s) {
        finite = false;
        continue;
      }
      finite = finite && std::isfinite(*r.rms_l) && std::isfinite(*r.rms_s);
      l.push_back(*r.rms_l);
      sp.push_back(*r.rms_s);
      bl.push_back(*r.baseline_rms_l);
      bs.push_back(*r.baseline_rms_s);
    }
    below = below && mean(l) < mean(bl) && mean(sp) < mean(bs);
    sig.push_back(s.sigma_values[p]);
    ml.push_back(mean(l));
    ms.push_back(mean(sp));
  }
  const double slope_l = ls_slope(sig, ml);
  const double slope_s = ls_slope(sig, ms);
  const bool pass = finite && below && slope_l >= 0.0 && slope_s >= 0.0;
  return {pass, std::string("finite=") + (finite ? "yes" : "no") + " below_baseline=" + (below ? "yes" : "no") +
                    " rms_L " + fmt("%.3g", ml.front()) + ".." + fmt("%.3g", ml.back()) + " slope " +
                    fmt("%.3g", slope_l) + "; rms_S " + fmt("%.3g", ms.front()) + ".." + fmt("%.3g", ms.back()) +
                    " slope " + fmt("%.3g", slope_s)};
}

// ------------------------------------------------------------------ 10
bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

Outcome criterion_pcp_identity() {
  int ok = 0;
  for (int t = 0; t < 10; ++t) {
    PhaseGenParams p;
    p.n1 = 80 + 5 * t;
    p.n2 = 60;
    p.r = 3 + t % 4;
    p.m = 200;
    p.seed = mix_seed(1010, 0, static_cast<std::uint64_t>(t));
    const ProblemInstance inst = gen_phase_instance(p);
    const SolveResult a = solve_pcp(inst.m);
    const SolveResult b = solve_mod_pcp(inst.m, OrthoBasis::empty(inst.m.rows()));
    ok += same_bits(a.l_hat, b.l_hat) && same_bits(a.s_hat, b.s_hat) && a.iterations == b.iterations &&
          a.final_residual == b.final_residual;
  }
  return {ok == 10, std::to_string(ok) + "/10 instances bit-identical"};
}

// ------------------------------------------------------------------ 11
Matrix gaussian(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian(r, c, 1.0);
}

Outcome criterion_properties() {
  std::vector<std::pair<std::string, std::function<bool()>>> props;

  props.emplace_back("tangent projector idempotent and complementary", [] {
    const OrthoBasis l = orthonormalize(gaussian(30, 4, 1));
    const OrthoBasis r = orthonormalize(gaussian(20, 3, 2));
    const Matrix x = gaussian(30, 20, 3);
    const Matrix p = project_pi(x, l, r);
    return (project_pi(p, l, r) - p).norm() <= 1e-10 * x.norm() &&
           (p + project_pi_perp(x, l, r) - x).norm() <= 1e-12 * x.norm() &&
           project_pi(project_pi_perp(x, l, r), l, r).norm() <= 1e-10 * x.norm();
  });
  props.emplace_back("subspace projector idempotent", [] {
    const OrthoBasis b = orthonormalize(gaussian(25, 5, 4));
    const Matrix x = gaussian(25, 7, 5);
    return (b.project(b.project(x)) - b.project(x)).norm() <= 1e-12 * x.norm() &&
           (b.project(x) + b.project_complement(x) - x).norm() <= 1e-12 * x.norm();
  });
  props.emplace_back("support arithmetic", [] {
    const SupportSet a = sample_support(15, 12, BernoulliSupport{0.3}, 6);
    const SupportSet b = sample_support(15, 12, BernoulliSupport{0.3}, 7);
    const Matrix x = gaussian(15, 12, 8);
    return a.complement().complement() == a && a.united(a.complement()) == SupportSet::full(15, 12) &&
           a.united(b) == b.united(a) && project_support(x, a) + project_support_complement(x, a) == x;
  });
  props.emplace_back("singular value thresholding is the nuclear prox", [] {
    const Matrix m = gaussian(8, 6, 9);
    const double tau = 0.7;
    auto f = [&](const Matrix& x) { return 0.5 * (x - m).squaredNorm() + tau * nuclear_norm(x); };
    const Matrix x = svt(m, tau);
    Rng rng(10);
    for (int k = 0; k < 200; ++k) {
      if (f(x + 1e-3 * rng.gaussian(8, 6, 1.0)) < f(x) - 1e-10) return false;
    }
    return true;
  });
  props.emplace_back("static generator identities", [] {
    StaticGenParams p;
    p.n1 = 80;
    p.d = 80;
    p.n2 = 60;
    p.m = 300;
    p.r = 8;
    p.r0 = 6;
    p.r_new = 2;
    p.r_extra = 3;
    p.seed = 11;
    const StaticInstance inst = gen_static_instance(p);
    const SubspaceDecomposition dec = decompose_subspace(svd(*inst.problem.truth_l).u, inst.problem.prior);
    return same_bits(inst.problem.m, *inst.problem.truth_l + *inst.problem.truth_s) && dec.r0 == 6 &&
           dec.r_new == 2 && dec.r_extra == 3 && same_bits(gen_static_instance(p).problem.m, inst.problem.m);
  });
  props.emplace_back("noisy generator hits the noise bound", [] {
    NoisyGenParams p;
    p.n1 = 50;
    p.n2 = 40;
    p.sigma = 0.3;
    p.seed = 12;
    const ProblemInstance inst = gen_noisy_instance(p);
    return std::abs((inst.m - *inst.truth_l - *inst.truth_s).norm() - 0.3) <= 1e-12;
  });
  props.emplace_back("online generator new directions are orthogonal", [] {
    const SequenceData d = gen_online_sequence(online_case_params('b', 13));
    for (std::size_t j = 1; j < d.bases.size(); ++j) {
      if ((d.new_bases[j].columns().transpose() * d.bases[j - 1].columns()).cwiseAbs().maxCoeff() > 1e-10) {
        return false;
      }
    }
    return same_bits(d.m_test, d.l_test + d.s_test);
  });
  props.emplace_back("golfing iterates vanish on the support", [] {
    const CertificateInstance inst = make_certificate_instance(40, 40, 3, 1, 1, 0.1, 14);
    GolfingTrace trace;
    inst.plan.validate();
    const WlResult wl = construct_wl(inst.plan, inst.g, inst.u_new, inst.v_new, &trace);
    const OrthoBasis left = OrthoBasis::concat(inst.g, inst.u_new);
    for (double v : trace.y_on_omega) {
      if (v != 0.0) return false;
    }
    return project_pi(wl.w_l, left, inst.v_new).norm() <= 1e-10 * std::max(1.0, wl.w_l.norm());
  });
  props.emplace_back("rho report is permutation invariant", [] {
    const OrthoBasis u = orthonormalize(gaussian(30, 3, 15));
    const OrthoBasis v = orthonormalize(gaussian(20, 3, 16));
    Matrix pu = u.columns().colwise().reverse();
    Matrix pv = v.columns().colwise().reverse();
    const RhoReport a = rho_r_pcp(u, v, 30, 20);
    const RhoReport b = rho_r_pcp(OrthoBasis::trusted(pu), OrthoBasis::trusted(pv), 30, 20);
    return std::abs(a.rho_max - b.rho_max) <= 1e-12 * a.rho_max;
  });
  props.emplace_back("pipeline equals independent solves", [] {
    OnlineGenParams p;
    p.n = 60;
    p.r0 = 3;
    p.t0 = 20;
    p.test_length = 120;
    p.change_times = {80};
    p.c_new = {1};
    p.c_old = {1};
    p.support = OnlineBernoulliSupport{0.03, 20.0, 60.0};
    p.seed = 17;
    const SequenceData d = gen_online_sequence(p);
    PipelineConfig cfg;
    const auto res = run_piecewise(d, cfg, SubspaceRule::all_nonzero());
    for (const SegmentResult& seg : res) {
      const Matrix block = d.m_test.middleCols(seg.first_col, seg.end_col - seg.first_col);
      if (!seg.solve || !same_bits(solve_mod_pcp(block, seg.g_used).s_hat, seg.solve->s_hat)) return false;
    }
    return true;
  });
  props.emplace_back("experiment output independent of thread count", [] {
    ExperimentSpec s = base_spec(ExperimentKind::rextra_sweep, 2, 18);
    s.n1 = 50;
    s.n2 = 40;
    s.d = 50;
    s.r = 4;
    s.r_new = 1;
    s.values = {0, 1};
    std::ostringstream a, b;
    run_experiment(s, a);
    s.threads = 3;
    run_experiment(s, b);
    return a.str() == b.str();
  });

  int ok = 0;
  std::string failed;
  for (const auto& [name, fn] : props) {
    bool pass = false;
    try {
      pass = fn();
    } catch (const std::exception& e) {
      failed += " [" + name + ": " + e.what() + "]";
      continue;
    }
    if (pass) {
      ++ok;
    } else {
      failed += " [" + name + "]";
    }
  }
  return {ok == static_cast<int>(props.size()),
          std::to_string(ok) + "/" + std::to_string(props.size()) + " properties hold" +
              (failed.empty() ? "" : "; failed:" + failed)};
}

const std::vector<std::pair<std::string, Outcome (*)()>>& criteria() {
  static const std::vector<std::pair<std::string, Outcome (*)()>> list{
      {"exact recovery at the r_extra = 10 static setting", criterion_exact_recovery},
      {"mod-PCP beats PCP across r_extra 0..50", criterion_rextra_ordering},
      {"mod-PCP needs fewer columns in the n2 sweep", criterion_n2_sweep},
      {"phase-transition containment at n = 100", criterion_phase_containment},
      {"incoherence diagnostics", criterion_rho_diagnostics},
      {"dual certificate", criterion_certificate},
      {"random-sign spectral norm probe", criterion_sign_probe},
      {"online pipeline cases a and c", criterion_online},
      {"noisy variant error curves", criterion_stable},
      {"pcp equals mod-pcp with an empty prior", criterion_pcp_identity},
      {"property battery", criterion_properties},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 1;
    }
  }
  const auto& list = criteria();
  if (only < 0 || only > static_cast<int>(list.size())) {
    std::fprintf(stderr, "criterion must be between 1 and %zu\n", list.size());
    return 1;
  }
  bool all = true;
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (only != 0 && static_cast<int>(k + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = list[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s: %s [%.1fs]\n", k + 1, o.pass ? "PASS" : "FAIL", list[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
