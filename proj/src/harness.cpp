#include "modpcp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "modpcp/datagen.hpp"
#include "modpcp/errors.hpp"
#include "modpcp/online_pipeline.hpp"
#include "modpcp/random.hpp"

namespace modpcp {

namespace {

const std::vector<std::pair<std::string, ExperimentKind>>& kind_names() {
  static const std::vector<std::pair<std::string, ExperimentKind>> names{
      {"rextra_sweep", ExperimentKind::rextra_sweep},
      {"rnew_sweep", ExperimentKind::rnew_sweep},
      {"n2_sweep", ExperimentKind::n2_sweep},
      {"phase_grid", ExperimentKind::phase_grid},
      {"online_abc", ExperimentKind::online_abc},
      {"noisy_sigma_sweep", ExperimentKind::noisy_sigma_sweep},
      {"solve_single", ExperimentKind::solve_single},
  };
  return names;
}

const std::vector<std::string> kKnownSolvers{"mod_pcp", "pcp", "stable_mod_pcp", "stable_pcp"};

std::vector<std::string> default_solvers(ExperimentKind kind) {
  if (kind == ExperimentKind::noisy_sigma_sweep) return {"stable_mod_pcp", "stable_pcp"};
  return {"mod_pcp", "pcp"};
}

std::int64_t round_count(double frac, std::int64_t n1, std::int64_t n2) {
  return static_cast<std::int64_t>(std::llround(frac * static_cast<double>(n1) * static_cast<double>(n2)));
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Fills the accuracy columns of a row from a finished solve.
void fill_metrics(MetricRow& row, const SolveResult& res, const Matrix& l, const Matrix& s) {
  const double n = std::sqrt(static_cast<double>(l.rows()) * static_cast<double>(l.cols()));
  const double s_norm2 = s.squaredNorm();
  const double ds = (res.s_hat - s).squaredNorm();
  row.sparse_error = s_norm2 > 0 ? ds / s_norm2 : ds;
  const double l_norm = l.norm();
  const double dl = (res.l_hat - l).norm();
  row.lowrank_rel_error = l_norm > 0 ? dl / l_norm : dl;
  row.rms_l = dl / n;
  row.rms_s = std::sqrt(ds) / n;
  row.baseline_rms_l = l_norm / n;
  row.baseline_rms_s = std::sqrt(s_norm2) / n;
  row.success_1e6 = *row.sparse_error < 1e-6;
  row.success_1e3 = *row.lowrank_rel_error <= 1e-3;
  row.iterations = res.iterations;
  row.converged = res.converged;
}

struct PointInfo {
  std::int64_t n1 = 0, n2 = 0, r = 0, r_new = 0, r_extra = 0, m = 0;
  double sigma = 0.0;
  std::string label;
};

PointInfo point_info(const ExperimentSpec& spec, std::size_t point) {
  PointInfo p;
  p.n1 = spec.n1;
  p.n2 = spec.n2;
  p.r = spec.r;
  p.r_new = spec.r_new;
  p.r_extra = spec.r_extra;
  switch (spec.kind) {
    case ExperimentKind::rextra_sweep:
      p.r_extra = spec.values[point];
      break;
    case ExperimentKind::rnew_sweep:
      p.r_new = spec.values[point];
      break;
    case ExperimentKind::n2_sweep:
      p.n2 = spec.values[point];
      break;
    case ExperimentKind::phase_grid: {
      const std::size_t nr = spec.r_values.size();
      p.r = spec.r_values[point % nr];
      p.m = round_count(spec.rho_values[point / nr], p.n1, p.n2);
      p.r_new = fraction_of_rank(spec.r_new_frac, p.r);
      p.r_extra = fraction_of_rank(spec.r_extra_frac, p.r);
      return p;
    }
    case ExperimentKind::noisy_sigma_sweep:
      p.sigma = spec.sigma_values[point];
      p.m = 0;
      return p;
    case ExperimentKind::online_abc: {
      const auto cases = io::split(spec.cases, ',');
      p.label = std::string(io::trim(cases[point]));
      return p;
    }
    case ExperimentKind::solve_single:
      break;
  }
  p.m = round_count(spec.m_frac, p.n1, p.n2);
  return p;
}

MetricRow base_row(const PointInfo& p, std::size_t point, int trial, std::uint64_t seed,
                   const std::string& solver) {
  MetricRow row;
  row.point = point;
  row.trial = trial;
  row.seed = seed;
  row.solver = solver;
  row.label = p.label;
  row.n1 = p.n1;
  row.n2 = p.n2;
  row.r = p.r;
  row.r_new = p.r_new;
  row.r_extra = p.r_extra;
  row.m = p.m;
  row.sigma = p.sigma;
  return row;
}

SolveResult run_solver(const std::string& solver, const ExperimentSpec& spec,
                       const ProblemInstance& inst, double sigma) {
  if (solver == "mod_pcp") return solve_mod_pcp(inst.m, inst.prior, spec.solver);
  if (solver == "pcp") return solve_pcp(inst.m, spec.solver);
  if (solver == "stable_mod_pcp") {
    return solve_stable_mod_pcp(inst.m, inst.prior, sigma, spec.solver, spec.calibration);
  }
  return solve_stable_mod_pcp(inst.m, OrthoBasis::empty(inst.m.rows()), sigma, spec.solver,
                              spec.calibration);
}

ProblemInstance make_instance(const ExperimentSpec& spec, const PointInfo& p, std::uint64_t seed) {
  switch (spec.kind) {
    case ExperimentKind::phase_grid: {
      PhaseGenParams g;
      g.n1 = p.n1;
      g.n2 = p.n2;
      g.r = p.r;
      g.m = static_cast<std::uint64_t>(p.m);
      g.r_new_frac = spec.r_new_frac;
      g.r_extra_frac = spec.r_extra_frac;
      g.seed = seed;
      return gen_phase_instance(g);
    }
    case ExperimentKind::noisy_sigma_sweep: {
      NoisyGenParams g;
      g.n1 = p.n1;
      g.n2 = p.n2;
      g.r = p.r;
      g.r_new = p.r_new;
      g.r_extra = p.r_extra;
      g.rho_s = spec.rho_s;
      g.amplitude = spec.amplitude;
      g.sigma = p.sigma;
      g.seed = seed;
      return gen_noisy_instance(g);
    }
    default: {
      StaticGenParams g;
      g.n1 = p.n1;
      g.d = spec.d;
      g.n2 = p.n2;
      g.m = static_cast<std::uint64_t>(p.m);
      g.r = p.r;
      g.r0 = p.r - p.r_new;
      g.r_new = p.r_new;
      g.r_extra = p.r_extra;
      g.seed = seed;
      return gen_static_instance(g).problem;
    }
  }
}

std::vector<MetricRow> run_online_job(const ExperimentSpec& spec, const PointInfo& p,
                                      std::size_t point, int trial, std::uint64_t seed) {
  std::vector<MetricRow> rows;
  SequenceData seq;
  OnlineGenParams gp;
  try {
    if (p.label.size() != 1) throw ParameterError("online case must be a single letter");
    gp = online_case_params(p.label[0], seed);
    gp.ramp_length = spec.ramp_length;
    seq = gen_online_sequence(gp);
  } catch (const Error& e) {
    for (const auto& solver : spec.solvers) {
      MetricRow row = base_row(p, point, trial, seed, solver);
      row.error = sanitize(e.what());
      rows.push_back(std::move(row));
    }
    return rows;
  }
  const SubspaceRule initial = SubspaceRule::threshold(gp.gamma_new * gp.gamma_new / 27.0);
  for (const auto& solver : spec.solvers) {
    PipelineConfig cfg;
    cfg.use_prior = solver == "mod_pcp";
    cfg.subspace_update = initial;
    cfg.batch_length = spec.batch_length;
    cfg.solver = spec.solver;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SegmentResult> segs;
    try {
      segs = run_piecewise(seq, cfg, initial);
    } catch (const Error& e) {
      MetricRow row = base_row(p, point, trial, seed, solver);
      row.error = sanitize(e.what());
      rows.push_back(std::move(row));
      continue;
    }
    const double wall = elapsed_since(t0);
    // one row per subspace segment, its blocks stitched back together
    for (std::size_t j = 0; j < seq.bases.size(); ++j) {
      MetricRow row = base_row(p, point, trial, seed, solver);
      row.segment = static_cast<int>(j);
      const Eigen::Index first = seq.segment_starts[j];
      const Eigen::Index end = j + 1 < seq.bases.size() ? seq.segment_starts[j + 1] : seq.m_test.cols();
      row.n1 = seq.m_test.rows();
      row.n2 = end - first;
      row.r = seq.bases[j].rank();
      row.r_new = seq.new_bases[j].rank();
      const Matrix l = seq.l_test.middleCols(first, row.n2);
      const Matrix s = seq.s_test.middleCols(first, row.n2);
      row.m = static_cast<std::int64_t>((s.array() != 0.0).count());
      SolveResult joined;
      joined.s_hat = Matrix::Zero(row.n1, row.n2);
      joined.l_hat = Matrix::Zero(row.n1, row.n2);
      joined.converged = true;
      double sum = 0.0;
      std::size_t count = 0;
      for (const SegmentResult& seg : segs) {
        if (seg.j != static_cast<int>(j)) continue;
        for (double v : seg.nrmse_series) sum += v;
        count += seg.nrmse_series.size();
        if (!seg.solve) {
          if (row.error.empty()) row.error = sanitize(seg.error);
          continue;
        }
        joined.s_hat.middleCols(seg.first_col - first, seg.end_col - seg.first_col) = seg.solve->s_hat;
        joined.l_hat.middleCols(seg.first_col - first, seg.end_col - seg.first_col) = seg.solve->l_hat;
        joined.iterations = std::max(joined.iterations, seg.solve->iterations);
        joined.converged = joined.converged && seg.solve->converged;
      }
      if (row.error.empty()) {
        fill_metrics(row, joined, l, s);
        row.nrmse = count ? sum / static_cast<double>(count) : 0.0;
      }
      if (spec.record_wall_time) row.wall_time = wall;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<MetricRow> run_job(const ExperimentSpec& spec, std::size_t point, int trial) {
  const std::uint64_t seed = mix_seed(spec.base_seed, point, static_cast<std::uint64_t>(trial));
  const PointInfo p = point_info(spec, point);
  if (spec.kind == ExperimentKind::online_abc) return run_online_job(spec, p, point, trial, seed);

  std::vector<MetricRow> rows;
  ProblemInstance inst;
  try {
    inst = make_instance(spec, p, seed);
  } catch (const Error& e) {
    for (const auto& solver : spec.solvers) {
      MetricRow row = base_row(p, point, trial, seed, solver);
      row.error = sanitize(e.what());
      rows.push_back(std::move(row));
    }
    return rows;
  }
  for (const auto& solver : spec.solvers) {
    MetricRow row = base_row(p, point, trial, seed, solver);
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult res = run_solver(solver, spec, inst, p.sigma);
      if (spec.record_wall_time) row.wall_time = elapsed_since(t0);
      fill_metrics(row, res, *inst.truth_l, *inst.truth_s);
    } catch (const Error& e) {
      row.error = sanitize(e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> list_of(const io::Manifest& m, const std::string& key) {
  std::vector<std::string> out;
  for (const auto& f : io::split(m.get(key), ',')) {
    const auto t = io::trim(f);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [n, k] : kind_names()) {
    if (n == name) return k;
  }
  throw ParameterError("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  for (const auto& [n, k] : kind_names()) {
    if (k == kind) return n;
  }
  return "unknown";
}

ExperimentSpec ExperimentSpec::from_manifest(const io::Manifest& m) {
  ExperimentSpec s;
  s.kind = parse_experiment_kind(m.get("kind"));
  s.trials = static_cast<int>(m.get_int_or("trials", s.trials));
  s.base_seed = static_cast<std::uint64_t>(m.get_int_or("base_seed", 1));
  s.output_path = m.get_or("output", "");
  s.threads = static_cast<int>(m.get_int_or("threads", 0));
  const std::string wall = m.get_or("record_wall_time", "false");
  if (wall != "true" && wall != "false") throw ParameterError("record_wall_time must be true or false");
  s.record_wall_time = wall == "true";
  s.solvers = m.has("solvers") ? list_of(m, "solvers") : default_solvers(s.kind);

  if (s.kind == ExperimentKind::phase_grid || s.kind == ExperimentKind::noisy_sigma_sweep) {
    s.n1 = 200;
    s.n2 = 200;
    s.r = 10;
    s.r_extra = s.kind == ExperimentKind::noisy_sigma_sweep ? 0 : s.r_extra;
  }
  s.n1 = m.get_int_or("n1", s.n1);
  s.n2 = m.get_int_or("n2", s.n2);
  s.d = m.get_int_or("d", s.d);
  s.r = m.get_int_or("r", s.r);
  s.r_new = m.get_int_or("r_new", s.r_new);
  s.r_extra = m.get_int_or("r_extra", s.r_extra);
  s.m_frac = m.get_double_or("m_frac", s.m_frac);
  s.r_new_frac = m.get_double_or("r_new_frac", s.r_new_frac);
  s.r_extra_frac = m.get_double_or("r_extra_frac", s.r_extra_frac);
  if (m.has("values")) s.values = m.get_ints("values");
  if (m.has("r_values")) s.r_values = m.get_ints("r_values");
  if (m.has("rho_values")) s.rho_values = m.get_doubles("rho_values");
  if (m.has("sigma_values")) s.sigma_values = m.get_doubles("sigma_values");
  s.rho_s = m.get_double_or("rho_s", s.rho_s);
  s.amplitude = m.get_double_or("amplitude", s.amplitude);
  const std::string cal = m.get_or("noise_calibration", "frobenius");
  if (cal == "per_entry") {
    s.calibration = NoiseCalibration::per_entry;
  } else if (cal == "frobenius") {
    s.calibration = NoiseCalibration::frobenius;
  } else {
    throw ParameterError("noise_calibration must be per_entry or frobenius");
  }
  s.cases = m.get_or("cases", s.cases);
  s.ramp_length = m.get_int_or("ramp_length", s.ramp_length);
  s.batch_length = m.get_int_or("batch_length", s.batch_length);

  if (m.has("lambda") && m.get("lambda") != "auto") s.solver.lambda = m.get_double("lambda");
  s.solver.rel_tol = m.get_double_or("tol", s.solver.rel_tol);
  s.solver.max_iters = static_cast<int>(m.get_int_or("max_iters", s.solver.max_iters));
  s.solver.growth = m.get_double_or("growth", s.solver.growth);
  if (s.kind == ExperimentKind::solve_single && s.values.empty()) s.values = {s.r_extra};
  s.validate();
  return s;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (threads < 0) throw ParameterError("threads must be >= 0");
  if (solvers.empty()) throw ParameterError("solver list is empty");
  for (const auto& s : solvers) {
    if (std::find(kKnownSolvers.begin(), kKnownSolvers.end(), s) == kKnownSolvers.end()) {
      throw ParameterError("unknown solver '" + s + "'");
    }
    if (kind == ExperimentKind::online_abc && s != "mod_pcp" && s != "pcp") {
      throw ParameterError("online experiments support mod_pcp and pcp only");
    }
  }
  solver.validate();
  switch (kind) {
    case ExperimentKind::rextra_sweep:
    case ExperimentKind::rnew_sweep:
    case ExperimentKind::n2_sweep:
      if (values.empty()) throw ParameterError("'values' must list at least one point");
      break;
    case ExperimentKind::phase_grid:
      if (r_values.empty() || rho_values.empty()) {
        throw ParameterError("phase_grid needs nonempty r_values and rho_values");
      }
      break;
    case ExperimentKind::noisy_sigma_sweep:
      if (sigma_values.empty()) throw ParameterError("'sigma_values' must list at least one point");
      break;
    case ExperimentKind::online_abc:
      if (batch_length < 0) throw ParameterError("batch_length must be >= 0");
      for (const auto& c : io::split(cases, ',')) {
        const auto t = io::trim(c);
        if (t != "a" && t != "b" && t != "c") throw ParameterError("online cases are a, b or c");
      }
      break;
    case ExperimentKind::solve_single:
      break;
  }
}

std::size_t ExperimentSpec::num_points() const {
  switch (kind) {
    case ExperimentKind::phase_grid:
      return r_values.size() * rho_values.size();
    case ExperimentKind::noisy_sigma_sweep:
      return sigma_values.size();
    case ExperimentKind::online_abc:
      return io::split(cases, ',').size();
    case ExperimentKind::solve_single:
      return 1;
    default:
      return values.size();
  }
}

std::string metric_header(bool wall_time) {
  std::string h =
      "point,trial,seed,solver,label,n1,n2,r,r_new,r_extra,m,sigma,segment,sparse_error,"
      "lowrank_rel_error,rms_l,rms_s,baseline_rms_l,baseline_rms_s,nrmse,success_1e6,success_1e3,"
      "iterations,converged";
  if (wall_time) h += ",wall_time";
  h += ",error";
  return h;
}

void write_metric_rows(std::ostream& out, const std::vector<MetricRow>& rows, bool wall_time) {
  out << metric_header(wall_time) << '\n';
  for (const MetricRow& r : rows) {
    out << r.point << ',' << r.trial << ',' << r.seed << ',' << r.solver << ',' << r.label << ','
        << r.n1 << ',' << r.n2 << ',' << r.r << ',' << r.r_new << ',' << r.r_extra << ',' << r.m
        << ',' << io::format_double(r.sigma) << ',' << r.segment << ',' << opt(r.sparse_error)
        << ',' << opt(r.lowrank_rel_error) << ',' << opt(r.rms_l) << ',' << opt(r.rms_s) << ','
        << opt(r.baseline_rms_l) << ',' << opt(r.baseline_rms_s) << ',' << opt(r.nrmse) << ','
        << (r.success_1e6 ? 1 : 0) << ',' << (r.success_1e3 ? 1 : 0) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0);
    if (wall_time) out << ',' << opt(r.wall_time);
    out << ',' << r.error << '\n';
  }
}

std::vector<MetricRow> run_experiment_rows(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t points = spec.num_points();
  const std::size_t jobs = points * static_cast<std::size_t>(spec.trials);
  std::vector<std::vector<MetricRow>> results(jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs; k = next++) {
      const std::size_t point = k / static_cast<std::size_t>(spec.trials);
      const int trial = static_cast<int>(k % static_cast<std::size_t>(spec.trials));
      results[k] = run_job(spec, point, trial);
    }
  };
  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<MetricRow> rows;
  for (auto& r : results) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  return rows;
}

void run_experiment(const ExperimentSpec& spec, std::ostream& out) {
  write_metric_rows(out, run_experiment_rows(spec), spec.record_wall_time);
}

void run_experiment(const ExperimentSpec& spec) {
  if (spec.output_path.empty()) throw ParameterError("spec has no output path");
  std::ofstream out(spec.output_path);
  if (!out) throw IoError("cannot open '" + spec.output_path + "' for writing");
  run_experiment(spec, out);
  if (!out) throw IoError("failed writing '" + spec.output_path + "'");
}

// ------------------------------------------------------------------ summarize

namespace {

const std::vector<std::string> kKeyColumns{"point", "solver", "segment"};
const std::vector<std::string> kCarryColumns{"label", "n1", "n2", "r", "r_new", "r_extra", "m", "sigma"};
const std::vector<std::string> kMetricColumns{
    "sparse_error", "lowrank_rel_error", "rms_l",       "rms_s",      "baseline_rms_l",
    "baseline_rms_s", "nrmse",           "success_1e6", "success_1e3", "iterations",
    "converged",      "wall_time"};

struct Group {
  std::vector<std::string> key;
  std::vector<std::string> carry;
  std::size_t count = 0;
  std::size_t errors = 0;
  std::vector<std::vector<double>> values;
};

}  // namespace

void summarize(std::istream& in, std::ostream& out) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty metric file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = io::split(line, ',');
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  auto require = [&](const std::string& name) {
    if (!col.count(name)) throw ParseError("missing column '" + name + "'", 1);
    return col[name];
  };
  std::vector<std::size_t> key_idx, carry_idx;
  for (const auto& k : kKeyColumns) key_idx.push_back(require(k));
  for (const auto& k : kCarryColumns) carry_idx.push_back(require(k));
  std::vector<std::string> metrics;
  std::vector<std::size_t> metric_idx;
  for (const auto& k : kMetricColumns) {
    if (col.count(k)) {
      metrics.push_back(k);
      metric_idx.push_back(col[k]);
    }
  }
  const bool has_error = col.count("error") != 0;
  const std::size_t error_idx = has_error ? col["error"] : 0;

  std::vector<Group> groups;
  std::map<std::vector<std::string>, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (io::trim(line).empty()) continue;
    const std::vector<std::string> f = io::split(line, ',');
    if (f.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(f.size()),
                       line_no);
    }
    std::vector<std::string> key;
    for (std::size_t i : key_idx) key.push_back(f[i]);
    if (key[0].empty() || key[1].empty()) throw ParseError("empty point or solver", line_no);
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) {
      Group g;
      g.key = key;
      for (std::size_t i : carry_idx) g.carry.push_back(f[i]);
      g.values.resize(metrics.size());
      groups.push_back(std::move(g));
    }
    Group& g = groups[it->second];
    ++g.count;
    if (has_error && !io::trim(f[error_idx]).empty()) ++g.errors;
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      const std::string_view v = io::trim(f[metric_idx[k]]);
      if (v.empty()) continue;
      g.values[k].push_back(io::parse_double(v, line_no));
    }
  }

  out << "point,solver,segment";
  for (const auto& c : kCarryColumns) out << ',' << c;
  out << ",count,errors";
  for (const auto& mname : metrics) out << ",mean_" << mname << ",se_" << mname;
  out << '\n';
  for (const Group& g : groups) {
    out << g.key[0] << ',' << g.key[1] << ',' << g.key[2];
    for (const auto& c : g.carry) out << ',' << c;
    out << ',' << g.count << ',' << g.errors;
    for (const auto& vals : g.values) {
      if (vals.empty()) {
        out << ",,";
        continue;
      }
      const double k = static_cast<double>(vals.size());
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= k;
      double se = 0.0;
      if (vals.size() > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
      }
      out << ',' << io::format_double(mean) << ',' << io::format_double(se);
    }
    out << '\n';
  }
}

void summarize(const std::filesystem::path& in, const std::filesystem::path& out) {
  std::ifstream is(in);
  if (!is) throw IoError("cannot open '" + in.string() + "'");
  std::ofstream os(out);
  if (!os) throw IoError("cannot open '" + out.string() + "' for writing");
  summarize(is, os);
  if (!os) throw IoError("failed writing '" + out.string() + "'");
}

}  // namespace modpcp
