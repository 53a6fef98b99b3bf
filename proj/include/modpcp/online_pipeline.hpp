#pragma once

// Piecewise-batch robust PCA over a sequence with known subspace change
// times: each segment is solved with modified PCP, using as prior the column
// space recovered from the previous segment.

#include <optional>
#include <string>
#include <vector>

#include "modpcp/datagen.hpp"
#include "modpcp/matrix_core.hpp"
#include "modpcp/solvers.hpp"

namespace modpcp {

/// Which left singular vectors of a recovered low-rank block are kept.
struct SubspaceRule {
  enum class Kind { all_nonzero_svs, energy_fraction, absolute_threshold };
  Kind kind = Kind::all_nonzero_svs;
  /// energy_fraction: f in (0, 1]. absolute_threshold: keep s_i > value.
  double value = 0.0;

  static SubspaceRule all_nonzero() { return {Kind::all_nonzero_svs, 0.0}; }
  static SubspaceRule energy(double f) { return {Kind::energy_fraction, f}; }
  static SubspaceRule threshold(double tau_sv) { return {Kind::absolute_threshold, tau_sv}; }

  void validate() const;
};

/// Basis kept by `rule` from the SVD of m. May be empty.
OrthoBasis estimate_subspace(const Matrix& m, const SubspaceRule& rule);

/// Same as estimate_subspace, requiring a nonempty training matrix.
OrthoBasis estimate_initial_subspace(const Matrix& m_train, const SubspaceRule& rule);

struct PipelineConfig {
  /// Test-relative first columns of segments 1..J (segment 0 starts at 0).
  std::vector<Eigen::Index> change_times;
  /// Rule applied to each segment's recovered low-rank block.
  SubspaceRule subspace_update = SubspaceRule::all_nonzero();
  /// false solves every segment with plain PCP and ignores the priors.
  bool use_prior = true;
  /// When positive, each segment is solved in consecutive blocks of at most
  /// this many columns, the prior moving forward block by block. 0 solves
  /// each segment in one piece.
  Eigen::Index batch_length = 0;
  AlmConfig solver;

  void validate(Eigen::Index num_cols) const;
};

struct SegmentResult {
  int j = 0;
  int batch = 0;  // block index inside segment j
  Eigen::Index first_col = 0;
  Eigen::Index end_col = 0;  // exclusive
  std::optional<SolveResult> solve;
  OrthoBasis g_used;
  /// Filled when the solver threw; the pipeline continues with the same prior.
  std::string error;
  /// Per-column sparse-part errors when the truth is available.
  std::vector<double> nrmse_series;
};

/// initial_prior is G for segment 0. With s_truth given, every segment gets
/// its nrmse_series.
std::vector<SegmentResult> run_piecewise(const Matrix& m_test, const OrthoBasis& initial_prior,
                                         const PipelineConfig& cfg,
                                         const Matrix* s_truth = nullptr);

/// Convenience overload taking the generated sequence; the initial prior is
/// estimated from seq.m_train with `initial_rule`.
std::vector<SegmentResult> run_piecewise(const SequenceData& seq, const PipelineConfig& cfg,
                                         const SubspaceRule& initial_rule);

struct PipelineMetrics {
  std::vector<double> per_column_nrmse;
  /// True where ||s_t|| = 0 and the entry is the absolute error ||s_hat_t||.
  std::vector<bool> zero_denominator;
  /// Mean per-column value over each segment (all blocks of segment j together).
  std::vector<double> per_segment_error;
  double overall = 0.0;
};

/// Columns of a failed segment count as s_hat = 0.
PipelineMetrics pipeline_metrics(const std::vector<SegmentResult>& results, const Matrix& s_truth);

/// Per-column ||s_hat_t - s_t|| / ||s_t||, or the absolute error when s_t = 0.
std::vector<double> column_nrmse(const Matrix& s_hat, const Matrix& s_truth,
                                 std::vector<bool>* zero_denominator = nullptr);

}  // namespace modpcp
