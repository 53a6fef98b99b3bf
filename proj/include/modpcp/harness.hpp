#pragma once

// Monte Carlo experiment runner. A spec (flat key = value manifest) names an
// experiment kind and its parameter ranges; every (point, trial) pair draws
// its instance from seed mix_seed(base_seed, point, trial), runs the listed
// solvers on it and yields MetricRows. Rows are written point-major,
// trial-minor, solver-in-listed-order, whatever the thread schedule.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modpcp/io.hpp"
#include "modpcp/solvers.hpp"

namespace modpcp {

enum class ExperimentKind {
  rextra_sweep,
  rnew_sweep,
  n2_sweep,
  phase_grid,
  online_abc,
  noisy_sigma_sweep,
  solve_single,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::solve_single;
  int trials = 10;
  std::uint64_t base_seed = 1;
  std::string output_path;
  /// 0 selects std::thread::hardware_concurrency().
  int threads = 0;
  bool record_wall_time = false;
  /// Subset of mod_pcp, pcp, stable_mod_pcp, stable_pcp.
  std::vector<std::string> solvers;

  // static and phase families
  std::int64_t n1 = 200;
  std::int64_t n2 = 120;
  std::int64_t d = 200;
  std::int64_t r = 20;
  std::int64_t r_new = 2;
  std::int64_t r_extra = 10;
  double m_frac = 0.075;
  double r_new_frac = 0.15;
  double r_extra_frac = 0.15;
  /// Swept values: r_extra, r_new or n2 depending on the kind.
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> r_values;
  std::vector<double> rho_values;

  // noisy family
  std::vector<double> sigma_values;
  double rho_s = 0.2;
  double amplitude = 5.0;
  NoiseCalibration calibration = NoiseCalibration::frobenius;

  // online family
  std::string cases = "a,c";
  std::int64_t ramp_length = 1700;
  /// Columns per solve inside a segment; 0 solves whole segments.
  std::int64_t batch_length = 200;

  AlmConfig solver;

  static ExperimentSpec from_manifest(const io::Manifest& m);
  void validate() const;
  /// Number of parameter points.
  std::size_t num_points() const;
};

struct MetricRow {
  std::size_t point = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string solver;
  std::string label;  // online case letter, empty otherwise
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t r = 0;
  std::int64_t r_new = 0;
  std::int64_t r_extra = 0;
  std::int64_t m = 0;
  double sigma = 0.0;
  int segment = -1;  // online segment, -1 otherwise

  std::optional<double> sparse_error;       // ||S - S_hat||_F^2 / ||S||_F^2
  std::optional<double> lowrank_rel_error;  // ||L_hat - L||_F / ||L||_F
  std::optional<double> rms_l;              // ||L_hat - L||_F / sqrt(n1 n2)
  std::optional<double> rms_s;
  std::optional<double> baseline_rms_l;     // same with L_hat = 0
  std::optional<double> baseline_rms_s;
  std::optional<double> nrmse;              // mean per-column sparse NRMSE (online)
  bool success_1e6 = false;                 // sparse_error < 1e-6
  bool success_1e3 = false;                 // lowrank_rel_error <= 1e-3
  int iterations = 0;
  bool converged = false;
  std::optional<double> wall_time;
  std::string error;
};

/// CSV header matching write_metric_rows; wall_time is included on request.
std::string metric_header(bool wall_time);
void write_metric_rows(std::ostream& out, const std::vector<MetricRow>& rows, bool wall_time);

std::vector<MetricRow> run_experiment_rows(const ExperimentSpec& spec);

/// Runs the spec and writes its CSV to out.
void run_experiment(const ExperimentSpec& spec, std::ostream& out);
/// Writes to spec.output_path.
void run_experiment(const ExperimentSpec& spec);

/// Aggregates a metric CSV: one row per (point, solver, segment) with count,
/// mean and standard error of every numeric metric. Throws ParseError with
/// the offending line number on malformed input.
void summarize(std::istream& in, std::ostream& out);
void summarize(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace modpcp
