#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "modpcp/errors.hpp"
#include "modpcp/harness.hpp"
#include "modpcp/io.hpp"
#include "support.hpp"

using namespace modpcp;

namespace {

ExperimentSpec spec_from(const std::string& text) {
  std::istringstream in(text);
  return ExperimentSpec::from_manifest(io::Manifest::parse(in));
}

const char* kSmallSweep =
    "kind = rextra_sweep\n"
    "trials = 3\n"
    "base_seed = 12\n"
    "n1 = 60\nn2 = 40\nd = 60\nr = 4\nr_new = 1\n"
    "values = 0, 2\n"
    "m_frac = 0.05\n";

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(io::split(line, ','));
  return out;
}

}  // namespace

TEST_CASE("spec parsing") {
  const ExperimentSpec s = spec_from(kSmallSweep);
  CHECK(s.kind == ExperimentKind::rextra_sweep);
  CHECK(s.trials == 3);
  CHECK(s.base_seed == 12);
  CHECK(s.values == std::vector<std::int64_t>{0, 2});
  CHECK(s.solvers == std::vector<std::string>{"mod_pcp", "pcp"});
  CHECK(s.num_points() == 2);
  CHECK_FALSE(s.record_wall_time);
  s.validate();

  for (ExperimentKind k : {ExperimentKind::rextra_sweep, ExperimentKind::rnew_sweep, ExperimentKind::n2_sweep,
                           ExperimentKind::phase_grid, ExperimentKind::online_abc,
                           ExperimentKind::noisy_sigma_sweep, ExperimentKind::solve_single}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_experiment_kind("nope"), ParameterError);
  CHECK_THROWS_AS(spec_from("kind = rextra_sweep\ntrials = 0\nvalues = 1\n").validate(), ParameterError);
  CHECK_THROWS_AS(spec_from("kind = rextra_sweep\n").validate(), ParameterError);
  CHECK_THROWS_AS(spec_from("kind = solve_single\nsolvers = magic\n").validate(), ParameterError);
  CHECK_THROWS_AS(spec_from("kind = phase_grid\nr_values = 5\n").validate(), ParameterError);
  CHECK_THROWS_AS(spec_from("kind = solve_single\nrecord_wall_time = yes\n"), ParameterError);

  const ExperimentSpec grid = spec_from("kind = phase_grid\nr_values = 5, 10\nrho_values = 0.05, 0.1, 0.2\n");
  CHECK(grid.num_points() == 6);
  const ExperimentSpec noisy = spec_from("kind = noisy_sigma_sweep\nsigma_values = 0.1, 0.2\n");
  CHECK(noisy.solvers == std::vector<std::string>{"stable_mod_pcp", "stable_pcp"});
}

TEST_CASE("single solve gives one row per solver") {
  ExperimentSpec s = spec_from("kind = solve_single\ntrials = 1\nn1 = 60\nn2 = 40\nd = 60\nr = 4\nr_new = 1\nr_extra = 1\nm_frac = 0.05\n");
  const auto rows = run_experiment_rows(s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].solver == "mod_pcp");
  CHECK(rows[1].solver == "pcp");
  CHECK(rows[0].seed == rows[1].seed);
  CHECK(rows[0].seed == mix_seed(1, 0, 0));
  CHECK(rows[0].m == 120);
  for (const MetricRow& r : rows) {
    REQUIRE(r.sparse_error.has_value());
    CHECK(*r.sparse_error >= 0);
    CHECK(r.error.empty());
    CHECK(r.success_1e6 == (*r.sparse_error < 1e-6));
    CHECK(r.success_1e3 == (*r.lowrank_rel_error <= 1e-3));
    CHECK_FALSE(r.wall_time.has_value());
  }
}

TEST_CASE("output is byte-identical across thread counts") {
  ExperimentSpec s = spec_from(kSmallSweep);
  s.threads = 1;
  std::ostringstream one;
  run_experiment(s, one);
  s.threads = 4;
  std::ostringstream four;
  run_experiment(s, four);
  CHECK(one.str() == four.str());

  const auto rows = csv_rows(one.str());
  REQUIRE(rows.size() == 1 + 2 * 3 * 2);
  CHECK(io::split(metric_header(false), ',') == rows[0]);
  std::size_t k = 1;
  for (int point = 0; point < 2; ++point) {
    for (int trial = 0; trial < 3; ++trial) {
      for (const char* solver : {"mod_pcp", "pcp"}) {
        CHECK(rows[k][0] == std::to_string(point));
        CHECK(rows[k][1] == std::to_string(trial));
        CHECK(rows[k][3] == solver);
        CHECK(rows[k][9] == std::to_string(point * 2));
        ++k;
      }
    }
  }
  CHECK(metric_header(true).find(",wall_time,error") != std::string::npos);
}

TEST_CASE("wall time appears only on request") {
  ExperimentSpec s = spec_from("kind = solve_single\ntrials = 1\nn1 = 30\nn2 = 30\nd = 30\nr = 2\nr_new = 1\nr_extra = 0\nrecord_wall_time = true\n");
  std::ostringstream out;
  run_experiment(s, out);
  const auto rows = csv_rows(out.str());
  CHECK(rows[0][rows[0].size() - 2] == "wall_time");
  CHECK_FALSE(rows[1][rows[0].size() - 2].empty());
}

TEST_CASE("summarize") {
  const std::string header = metric_header(false);
  auto row = [](int point, const std::string& solver, double err) {
    MetricRow r;
    r.point = static_cast<std::size_t>(point);
    r.solver = solver;
    r.n1 = 10;
    r.n2 = 10;
    r.sparse_error = err;
    r.lowrank_rel_error = err;
    r.iterations = 3;
    return r;
  };

  std::ostringstream single_csv;
  write_metric_rows(single_csv, {row(0, "pcp", 0.25)}, false);
  std::istringstream single_in(single_csv.str());
  std::ostringstream single_out;
  summarize(single_in, single_out);
  const auto s1 = csv_rows(single_out.str());
  REQUIRE(s1.size() == 2);
  auto field = [&](const std::vector<std::vector<std::string>>& t, std::size_t r, const std::string& name) {
    for (std::size_t i = 0; i < t[0].size(); ++i) {
      if (t[0][i] == name) return t[r][i];
    }
    FAIL("no column " << name);
    return std::string();
  };
  CHECK(io::parse_double(field(s1, 1, "mean_sparse_error"), 1) == 0.25);
  CHECK(field(s1, 1, "count") == "1");

  std::ostringstream two_csv;
  write_metric_rows(two_csv, {row(0, "pcp", 0.25), row(0, "pcp", 0.25)}, false);
  std::istringstream two_in(two_csv.str());
  std::ostringstream two_out;
  summarize(two_in, two_out);
  const auto s2 = csv_rows(two_out.str());
  CHECK(io::parse_double(field(s2, 1, "se_sparse_error"), 1) == 0.0);

  // 100 random rows over two points and two solvers
  Rng rng(3);
  std::vector<MetricRow> rows;
  double sum[2][2] = {{0, 0}, {0, 0}};
  double sum2[2][2] = {{0, 0}, {0, 0}};
  for (int k = 0; k < 100; ++k) {
    const int p = k % 2;
    const int s = (k / 2) % 2;
    const double v = rng.uniform01();
    rows.push_back(row(p, s ? "pcp" : "mod_pcp", v));
    sum[p][s] += v;
    sum2[p][s] += v * v;
  }
  std::ostringstream many_csv;
  write_metric_rows(many_csv, rows, false);
  std::istringstream many_in(many_csv.str());
  std::ostringstream many_out;
  summarize(many_in, many_out);
  const auto sm = csv_rows(many_out.str());
  REQUIRE(sm.size() == 5);
  for (std::size_t r = 1; r < 5; ++r) {
    const int p = std::stoi(sm[r][0]);
    const int s = sm[r][1] == "pcp" ? 1 : 0;
    const double mean = sum[p][s] / 25.0;
    const double var = (sum2[p][s] - 25.0 * mean * mean) / 24.0;
    CHECK(io::parse_double(field(sm, r, "mean_sparse_error"), 1) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(io::parse_double(field(sm, r, "se_sparse_error"), 1) == doctest::Approx(std::sqrt(var / 25.0)).epsilon(1e-9));
    CHECK(field(sm, r, "count") == "25");
  }

  // idempotent
  std::istringstream again_in(many_csv.str());
  std::ostringstream again_out;
  summarize(again_in, again_out);
  CHECK(again_out.str() == many_out.str());

  std::istringstream bad(header + "\n" + "0,0,1,pcp\n");
  try {
    summarize(bad, again_out);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad_number(many_csv.str() + "0,0,1,pcp,,10,10,0,0,0,0,0,-1,abc,,,,,,,0,0,3,0,\n");
  try {
    summarize(bad_number, again_out);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 102);
  }
  std::istringstream no_header("point,trial\n");
  CHECK_THROWS_AS(summarize(no_header, again_out), ParseError);
}

TEST_CASE("bundled spec files parse") {
  for (const char* name : {"rextra_sweep", "rnew_sweep", "n2_sweep", "phase_grid", "online_abc", "noisy_sigma_sweep"}) {
    CAPTURE(name);
    std::ifstream in(std::string(MODPCP_SPECS_DIR) + "/" + name + ".txt");
    REQUIRE(in.good());
    const ExperimentSpec s = ExperimentSpec::from_manifest(io::Manifest::parse(in));
    CHECK(to_string(s.kind) == name);
    CHECK(s.num_points() > 0);
  }
}
