// Command-line front end. Exit codes: 0 success, 1 usage or parameter error,
// 2 numerical failure, 3 I/O or parse error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "modpcp/certificate.hpp"
#include "modpcp/datagen.hpp"
#include "modpcp/diagnostics.hpp"
#include "modpcp/errors.hpp"
#include "modpcp/harness.hpp"
#include "modpcp/io.hpp"
#include "modpcp/model.hpp"
#include "modpcp/online_pipeline.hpp"
#include "modpcp/random.hpp"
#include "modpcp/solvers.hpp"

namespace fs = std::filesystem;
using namespace modpcp;
using io::format_double;

namespace {

OrthoBasis read_basis(const std::string& path, Eigen::Index rows) {
  Matrix b = io::read_matrix_csv(path);
  if (b.rows() == 0 && b.cols() == 0) return OrthoBasis::empty(rows);
  if (b.rows() != rows) {
    throw DimensionError("basis '" + path + "' has " + std::to_string(b.rows()) + " rows, expected " +
                         std::to_string(rows));
  }
  return OrthoBasis(std::move(b), 1e-8);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

SubspaceRule parse_rule(const std::string& text) {
  if (text == "all_nonzero") return SubspaceRule::all_nonzero();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string name = text.substr(0, colon);
    const double v = io::parse_double(text.substr(colon + 1), 0);
    if (name == "energy") return SubspaceRule::energy(v);
    if (name == "threshold") return SubspaceRule::threshold(v);
  }
  throw ParameterError("subspace rule must be all_nonzero, energy:F or threshold:T, got '" + text + "'");
}

std::string rule_text(const SubspaceRule& r) {
  switch (r.kind) {
    case SubspaceRule::Kind::energy_fraction:
      return "energy:" + format_double(r.value);
    case SubspaceRule::Kind::absolute_threshold:
      return "threshold:" + format_double(r.value);
    default:
      return "all_nonzero";
  }
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string matrix, prior, lambda = "auto", out_prefix;
  double tol = 1e-7;
  int max_iters = 1000;
  std::optional<double> sigma;
};

int cmd_solve(const SolveArgs& a) {
  const Matrix m = io::read_matrix_csv(a.matrix);
  const OrthoBasis g = a.prior.empty() ? OrthoBasis::empty(m.rows()) : read_basis(a.prior, m.rows());
  AlmConfig cfg;
  if (a.lambda != "auto") cfg.lambda = io::parse_double(a.lambda, 0);
  cfg.rel_tol = a.tol;
  cfg.max_iters = a.max_iters;
  const SolveResult res = a.sigma ? solve_stable_mod_pcp(m, g, *a.sigma, cfg) : solve_mod_pcp(m, g, cfg);
  if (!a.out_prefix.empty()) {
    io::write_matrix_csv(a.out_prefix + "L.csv", res.l_hat);
    io::write_matrix_csv(a.out_prefix + "S.csv", res.s_hat);
    io::write_matrix_csv(a.out_prefix + "L_new.csv", res.l_new_hat);
    io::write_matrix_csv(a.out_prefix + "X.csv", res.x_hat);
  }
  std::cout << "iterations,converged,final_residual,lambda\n"
            << res.iterations << ',' << (res.converged ? 1 : 0) << ','
            << format_double(res.final_residual) << ',' << format_double(res.lambda) << '\n';
  return 0;
}

// ------------------------------------------------------------------ rho-r

struct RhoArgs {
  std::string low_rank, prior, variant = "mod_pcp";
  std::optional<double> rho_s;
  double c01 = 1.0, c03 = 1.0;
};

int cmd_rho(const RhoArgs& a) {
  const Matrix l = io::read_matrix_csv(a.low_rank);
  const Eigen::Index n1 = l.rows();
  const Eigen::Index n2 = l.cols();
  RhoReport rep;
  if (a.variant == "pcp") {
    const SvdResult f = svd(l);
    rep = rho_r_pcp(f.u, f.v, n1, n2);
  } else if (a.variant == "mod_pcp") {
    const OrthoBasis g = a.prior.empty() ? OrthoBasis::empty(n1) : read_basis(a.prior, n1);
    const LNewFactors f = compute_l_new(l, g);
    rep = rho_r_modpcp(g, f.u_new, f.v_new, n1, n2);
  } else {
    throw ParameterError("--variant must be mod_pcp or pcp");
  }
  std::cout << a.variant << ',' << format_double(rep.rho_pu) << ',' << format_double(rep.rho_pv)
            << ',' << format_double(rep.rho_uv) << ',' << format_double(rep.rho_max);
  if (a.rho_s) {
    const AssumptionReport ar = check_assumption1(*a.rho_s, rep.rho_max, n1, n2, a.c01, a.c03);
    for (const AssumptionItem* it : {&ar.a, &ar.b, &ar.c, &ar.d, &ar.e, &ar.f}) {
      std::cout << ',' << (it->satisfied ? 1 : 0);
    }
  }
  std::cout << '\n';
  return 0;
}

// ------------------------------------------------------------------ phase

struct PhaseArgs {
  std::int64_t n1 = 100, n2 = 100;
  std::vector<std::int64_t> r_values{5, 10, 15, 20, 25, 30, 35, 40};
  std::vector<double> rho_values{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35};
  int trials = 5, threads = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_phase(const PhaseArgs& a) {
  ExperimentSpec s;
  s.kind = ExperimentKind::phase_grid;
  s.n1 = a.n1;
  s.n2 = a.n2;
  s.r_values = a.r_values;
  s.rho_values = a.rho_values;
  s.trials = a.trials;
  s.threads = a.threads;
  s.base_seed = a.seed;
  s.solvers = {"mod_pcp", "pcp"};
  if (a.out.empty()) {
    run_experiment(s, std::cout);
  } else {
    std::ofstream out = open_out(a.out);
    run_experiment(s, out);
  }
  return 0;
}

// ------------------------------------------------------------------ online

struct OnlineArgs {
  std::string manifest, out;
};

int cmd_online(const OnlineArgs& a) {
  const io::Manifest m = io::Manifest::read(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  auto path_of = [&](const std::string& key) { return (base / m.get(key)).string(); };
  const Matrix test = io::read_matrix_csv(path_of("test"));
  std::optional<Matrix> truth;
  if (m.has("truth_s")) truth = io::read_matrix_csv(path_of("truth_s"));

  OrthoBasis g0 = OrthoBasis::empty(test.rows());
  if (m.has("prior")) {
    g0 = read_basis(path_of("prior"), test.rows());
  } else if (m.has("train")) {
    g0 = estimate_initial_subspace(io::read_matrix_csv(path_of("train")),
                                   parse_rule(m.get_or("initial_rule", "all_nonzero")));
  }
  PipelineConfig cfg;
  for (auto t : m.has("change_times") ? m.get_ints("change_times") : std::vector<std::int64_t>{}) {
    cfg.change_times.push_back(t);
  }
  cfg.subspace_update = parse_rule(m.get_or("update_rule", "all_nonzero"));
  cfg.use_prior = m.get_or("use_prior", "true") != "false";
  cfg.batch_length = m.get_int_or("batch_length", 0);
  cfg.solver.rel_tol = m.get_double_or("tol", cfg.solver.rel_tol);
  cfg.solver.max_iters = static_cast<int>(m.get_int_or("max_iters", cfg.solver.max_iters));

  const std::vector<SegmentResult> segs = run_piecewise(test, g0, cfg, truth ? &*truth : nullptr);
  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << "t,segment,nrmse,converged\n";
  for (const SegmentResult& seg : segs) {
    const bool conv = seg.solve && seg.solve->converged;
    for (Eigen::Index t = seg.first_col; t < seg.end_col; ++t) {
      out << t << ',' << seg.j << ',';
      if (!seg.nrmse_series.empty()) out << format_double(seg.nrmse_series[t - seg.first_col]);
      out << ',' << (conv ? 1 : 0) << '\n';
    }
    if (!seg.error.empty()) std::cerr << "segment " << seg.j << " failed: " << seg.error << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ certificate

struct CertArgs {
  std::int64_t n1 = 120, n2 = 120, r = 2, r_new = 1, r_extra = 0;
  double rho_s = 0.05;
  int seeds = 20;
  std::uint64_t seed = 1;
  std::string model = "gaussian", out;
};

int cmd_certificate(const CertArgs& a) {
  CertificateModel model = CertificateModel::gaussian;
  if (a.model == "flat") {
    model = CertificateModel::flat_signs;
  } else if (a.model != "gaussian") {
    throw ParameterError("--model must be gaussian or flat");
  }
  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << "seed,j0,q,omega_size,neumann_terms,identity_error,po_ppi,certificate_norm,"
         "omega_residual,off_support,wl_norm,wl_off_support,ws_norm,ws_off_support,lambda,"
         "sufficient_passed,components_passed\n";
  for (int k = 0; k < a.seeds; ++k) {
    const std::uint64_t s = mix_seed(a.seed, 0, static_cast<std::uint64_t>(k));
    const CertificateInstance inst =
        make_certificate_instance(a.n1, a.n2, a.r, a.r_new, a.r_extra, a.rho_s, s, model);
    const DualCertificate c = build_certificate(inst.plan, inst.s, inst.g, inst.u_new, inst.v_new, inst.lambda);
    const double ident =
        max_abs(project_support(c.w_s, inst.plan.omega) - inst.lambda * inst.s);
    const CertificateChecks& ch = c.checks;
    out << s << ',' << inst.plan.j0 << ',' << format_double(inst.plan.q) << ','
        << inst.plan.omega.size() << ',' << c.neumann_terms_used << ',' << format_double(ident)
        << ',' << format_double(ch.po_ppi.value) << ',' << format_double(ch.certificate_norm.value)
        << ',' << format_double(ch.omega_residual.value) << ',' << format_double(ch.off_support.value)
        << ',' << format_double(ch.wl_norm.value) << ',' << format_double(ch.wl_off_support.value)
        << ',' << format_double(ch.ws_norm.value) << ',' << format_double(ch.ws_off_support.value)
        << ',' << format_double(inst.lambda) << ',' << (ch.sufficient_passed() ? 1 : 0) << ','
        << (ch.components_passed() ? 1 : 0) << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind = "static", out_dir = ".", online_case = "a";
  std::int64_t n1 = 200, n2 = 120, d = 200, r = 20, r0 = 18, r_new = 2, r_extra = 10;
  std::int64_t m = -1;
  double m_frac = 0.075, rho_s = 0.2, sigma = 0.0;
  std::uint64_t seed = 1;
};

void write_problem(const fs::path& dir, const ProblemInstance& p) {
  io::write_matrix_csv(dir / "M.csv", p.m);
  io::write_matrix_csv(dir / "prior.csv", p.prior.columns());
  if (p.truth_l) io::write_matrix_csv(dir / "L.csv", *p.truth_l);
  if (p.truth_s) io::write_matrix_csv(dir / "S.csv", *p.truth_s);
}

int cmd_gen(const GenArgs& a) {
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  io::Manifest man;
  man.add_comment("generated instance");
  man.set("kind", a.kind);
  man.set("seed", std::to_string(a.seed));
  const std::int64_t m = a.m >= 0 ? a.m : static_cast<std::int64_t>(std::llround(a.m_frac * a.n1 * a.n2));
  if (a.kind == "static") {
    StaticGenParams p;
    p.n1 = a.n1;
    p.d = a.d;
    p.n2 = a.n2;
    p.m = static_cast<std::uint64_t>(m);
    p.r = a.r;
    p.r0 = a.r0;
    p.r_new = a.r_new;
    p.r_extra = a.r_extra;
    p.seed = a.seed;
    const StaticInstance inst = gen_static_instance(p);
    write_problem(dir, inst.problem);
    io::write_matrix_csv(dir / "M_train.csv", inst.m_train);
    man.set("n1", a.n1);
    man.set("d", a.d);
    man.set("n2", a.n2);
    man.set("m", m);
    man.set("r", a.r);
    man.set("r0", a.r0);
    man.set("r_new", a.r_new);
    man.set("r_extra", a.r_extra);
  } else if (a.kind == "phase") {
    PhaseGenParams p;
    p.n1 = a.n1;
    p.n2 = a.n2;
    p.r = a.r;
    p.m = static_cast<std::uint64_t>(m);
    p.seed = a.seed;
    write_problem(dir, gen_phase_instance(p));
    man.set("n1", a.n1);
    man.set("n2", a.n2);
    man.set("m", m);
    man.set("r", a.r);
    man.set("r_new_frac", p.r_new_frac);
    man.set("r_extra_frac", p.r_extra_frac);
  } else if (a.kind == "noisy") {
    NoisyGenParams p;
    p.n1 = a.n1;
    p.n2 = a.n2;
    p.r = a.r;
    p.r_new = a.r_new;
    p.r_extra = a.r_extra;
    p.rho_s = a.rho_s;
    p.sigma = a.sigma;
    p.seed = a.seed;
    write_problem(dir, gen_noisy_instance(p));
    man.set("n1", a.n1);
    man.set("n2", a.n2);
    man.set("r", a.r);
    man.set("r_new", a.r_new);
    man.set("r_extra", a.r_extra);
    man.set("rho_s", a.rho_s);
    man.set("sigma", a.sigma);
  } else if (a.kind == "online") {
    if (a.online_case.size() != 1) throw ParameterError("--case must be a, b or c");
    const OnlineGenParams p = online_case_params(a.online_case[0], a.seed);
    const SequenceData seq = gen_online_sequence(p);
    io::write_matrix_csv(dir / "train.csv", seq.m_train);
    io::write_matrix_csv(dir / "test.csv", seq.m_test);
    io::write_matrix_csv(dir / "L_test.csv", seq.l_test);
    io::write_matrix_csv(dir / "S_test.csv", seq.s_test);
    man.set("case", a.online_case);
    man.set("train", std::string("train.csv"));
    man.set("test", std::string("test.csv"));
    man.set("truth_s", std::string("S_test.csv"));
    std::vector<std::int64_t> ct(seq.segment_starts.begin() + 1, seq.segment_starts.end());
    man.set("change_times", ct);
    const std::string rule = rule_text(SubspaceRule::threshold(p.gamma_new * p.gamma_new / 27.0));
    man.set("initial_rule", rule);
    man.set("update_rule", rule);
    man.set("batch_length", static_cast<std::int64_t>(200));
    man.set("n", static_cast<std::int64_t>(p.n));
    man.set("r0", static_cast<std::int64_t>(p.r0));
    man.set("t0", static_cast<std::int64_t>(p.t0));
    man.set("gamma", p.gamma);
    man.set("gamma_new", p.gamma_new);
    man.set("ramp_length", static_cast<std::int64_t>(p.ramp_length));
  } else {
    throw ParameterError("--kind must be static, phase, noisy or online");
  }
  man.write(dir / "manifest.txt");
  std::cout << (dir / "manifest.txt").string() << '\n';
  return 0;
}

// ------------------------------------------------------------------ experiment / summarize

struct ExperimentArgs {
  std::string spec, out;
  int threads = -1;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentSpec s = ExperimentSpec::from_manifest(io::Manifest::read(a.spec));
  if (a.threads >= 0) s.threads = a.threads;
  if (!a.out.empty()) s.output_path = a.out;
  if (s.output_path.empty()) {
    run_experiment(s, std::cout);
  } else {
    run_experiment(s);
  }
  return 0;
}

struct SummarizeArgs {
  std::string in, out;
};

int cmd_summarize(const SummarizeArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw IoError("cannot open '" + a.in + "'");
  if (a.out.empty()) {
    summarize(in, std::cout);
  } else {
    std::ofstream out = open_out(a.out);
    summarize(in, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust PCA with partial subspace knowledge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "decompose a CSV matrix into low-rank plus sparse parts");
  sc->add_option("--matrix", solve.matrix, "CSV matrix M")->required();
  sc->add_option("--prior", solve.prior, "CSV orthonormal basis G (omit for plain PCP)");
  sc->add_option("--lambda", solve.lambda, "sparsity weight or 'auto'");
  sc->add_option("--tol", solve.tol, "relative residual tolerance");
  sc->add_option("--max-iters", solve.max_iters, "iteration cap");
  sc->add_option("--sigma", solve.sigma, "bound on ||Z||_F; selects the noisy variant");
  sc->add_option("--out-prefix", solve.out_prefix, "write PREFIX{L,S,L_new,X}.csv");

  RhoArgs rho;
  auto* rc = app.add_subcommand("rho-r", "incoherence report: variant,rho_pu,rho_pv,rho_uv,rho_max");
  rc->add_option("--low-rank", rho.low_rank, "CSV low-rank matrix L")->required();
  rc->add_option("--prior", rho.prior, "CSV prior basis G");
  rc->add_option("--variant", rho.variant, "mod_pcp or pcp");
  rc->add_option("--rho-s", rho.rho_s, "append the six assumption flags for this support density");
  rc->add_option("--c01", rho.c01, "placeholder constant C01");
  rc->add_option("--c03", rho.c03, "placeholder constant C03");

  PhaseArgs phase;
  auto* pc = app.add_subcommand("phase", "phase-transition grid, mod-PCP versus PCP");
  pc->add_option("--n1", phase.n1);
  pc->add_option("--n2", phase.n2);
  pc->add_option("--r-values", phase.r_values)->delimiter(',');
  pc->add_option("--rho-values", phase.rho_values)->delimiter(',');
  pc->add_option("--trials", phase.trials);
  pc->add_option("--threads", phase.threads);
  pc->add_option("--seed", phase.seed);
  pc->add_option("--out", phase.out);

  OnlineArgs online;
  auto* oc = app.add_subcommand("online", "piecewise solve of a sequence; per-column NRMSE CSV");
  oc->add_option("--manifest", online.manifest, "manifest naming test/train/truth_s CSVs")->required();
  oc->add_option("--out", online.out);

  CertArgs cert;
  auto* cc = app.add_subcommand("certificate", "build and check dual certificates per seed");
  cc->add_option("--n1", cert.n1);
  cc->add_option("--n2", cert.n2);
  cc->add_option("--r", cert.r);
  cc->add_option("--r-new", cert.r_new);
  cc->add_option("--r-extra", cert.r_extra);
  cc->add_option("--rho-s", cert.rho_s);
  cc->add_option("--seeds", cert.seeds);
  cc->add_option("--seed", cert.seed);
  cc->add_option("--model", cert.model, "gaussian or flat");
  cc->add_option("--out", cert.out);

  GenArgs gen;
  auto* gc = app.add_subcommand("gen", "write a synthetic instance as CSV files plus manifest");
  gc->add_option("--kind", gen.kind, "static, phase, noisy or online");
  gc->add_option("--out-dir", gen.out_dir);
  gc->add_option("--case", gen.online_case, "online case a, b or c");
  gc->add_option("--n1", gen.n1);
  gc->add_option("--n2", gen.n2);
  gc->add_option("--d", gen.d);
  gc->add_option("--r", gen.r);
  gc->add_option("--r0", gen.r0);
  gc->add_option("--r-new", gen.r_new);
  gc->add_option("--r-extra", gen.r_extra);
  gc->add_option("--m", gen.m, "support size (default m-frac * n1 * n2)");
  gc->add_option("--m-frac", gen.m_frac);
  gc->add_option("--rho-s", gen.rho_s);
  gc->add_option("--sigma", gen.sigma);
  gc->add_option("--seed", gen.seed);

  ExperimentArgs exp;
  auto* ec = app.add_subcommand("experiment", "run a Monte Carlo experiment spec");
  ec->add_option("--spec", exp.spec, "key = value spec file")->required();
  ec->add_option("--out", exp.out, "override the spec's output path");
  ec->add_option("--threads", exp.threads);

  SummarizeArgs sum;
  auto* uc = app.add_subcommand("summarize", "per-point means and standard errors of a metric CSV");
  uc->add_option("--in", sum.in)->required();
  uc->add_option("--out", sum.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sc) return cmd_solve(solve);
    if (*rc) return cmd_rho(rho);
    if (*pc) return cmd_phase(phase);
    if (*oc) return cmd_online(online);
    if (*cc) return cmd_certificate(cert);
    if (*gc) return cmd_gen(gen);
    if (*ec) return cmd_experiment(exp);
    if (*uc) return cmd_summarize(sum);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
