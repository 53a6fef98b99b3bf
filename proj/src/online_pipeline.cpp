#include "modpcp/online_pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "modpcp/errors.hpp"

namespace modpcp {

void SubspaceRule::validate() const {
  if (kind == Kind::energy_fraction && !(value > 0.0 && value <= 1.0)) {
    throw ParameterError("energy fraction must lie in (0, 1]");
  }
  if (kind == Kind::absolute_threshold && !(value >= 0.0)) {
    throw ParameterError("singular value threshold must be nonnegative");
  }
}

OrthoBasis estimate_subspace(const Matrix& m, const SubspaceRule& rule) {
  rule.validate();
  if (m.size() == 0) return OrthoBasis::empty(m.rows());
  const SvdResult f = svd(m);
  const Vector& s = f.singular_values;
  Eigen::Index keep = s.size();
  switch (rule.kind) {
    case SubspaceRule::Kind::all_nonzero_svs:
      break;
    case SubspaceRule::Kind::energy_fraction: {
      const double total = s.squaredNorm();
      double acc = 0.0;
      keep = 0;
      while (keep < s.size() && acc < rule.value * total) acc += s(keep) * s(keep), ++keep;
      break;
    }
    case SubspaceRule::Kind::absolute_threshold:
      keep = 0;
      while (keep < s.size() && s(keep) > rule.value) ++keep;
      break;
  }
  return f.u.slice(0, keep);
}

OrthoBasis estimate_initial_subspace(const Matrix& m_train, const SubspaceRule& rule) {
  if (m_train.size() == 0) throw ParameterError("initial subspace: training matrix is empty");
  return estimate_subspace(m_train, rule);
}

void PipelineConfig::validate(Eigen::Index num_cols) const {
  subspace_update.validate();
  if (batch_length < 0) throw ParameterError("batch_length must be >= 0");
  solver.validate();
  Eigen::Index prev = 0;
  for (Eigen::Index t : change_times) {
    if (t <= prev || t >= num_cols) {
      throw ParameterError("change times must be strictly increasing inside (0, number of columns)");
    }
    prev = t;
  }
}

std::vector<double> column_nrmse(const Matrix& s_hat, const Matrix& s_truth,
                                 std::vector<bool>* zero_denominator) {
  if (s_hat.rows() != s_truth.rows() || s_hat.cols() != s_truth.cols()) {
    throw DimensionError("column_nrmse: shapes differ");
  }
  std::vector<double> out(static_cast<std::size_t>(s_truth.cols()));
  if (zero_denominator) zero_denominator->assign(out.size(), false);
  for (Eigen::Index t = 0; t < s_truth.cols(); ++t) {
    const double num = (s_hat.col(t) - s_truth.col(t)).norm();
    const double den = s_truth.col(t).norm();
    if (den > 0.0) {
      out[t] = num / den;
    } else {
      out[t] = num;
      if (zero_denominator) (*zero_denominator)[t] = true;
    }
  }
  return out;
}

std::vector<SegmentResult> run_piecewise(const Matrix& m_test, const OrthoBasis& initial_prior,
                                         const PipelineConfig& cfg, const Matrix* s_truth) {
  cfg.validate(m_test.cols());
  if (initial_prior.ambient_dim() != m_test.rows()) {
    throw DimensionError("run_piecewise: initial prior does not match the column length");
  }
  if (s_truth && (s_truth->rows() != m_test.rows() || s_truth->cols() != m_test.cols())) {
    throw DimensionError("run_piecewise: truth shape differs from the test matrix");
  }

  std::vector<Eigen::Index> bounds{0};
  bounds.insert(bounds.end(), cfg.change_times.begin(), cfg.change_times.end());
  bounds.push_back(m_test.cols());

  std::vector<SegmentResult> out;
  OrthoBasis prior = initial_prior;
  for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
    const Eigen::Index step = cfg.batch_length > 0 ? cfg.batch_length : bounds[j + 1] - bounds[j];
    int batch = 0;
    for (Eigen::Index a = bounds[j]; a < bounds[j + 1]; a += step, ++batch) {
      SegmentResult seg;
      seg.j = static_cast<int>(j);
      seg.batch = batch;
      seg.first_col = a;
      seg.end_col = std::min(a + step, bounds[j + 1]);
      seg.g_used = cfg.use_prior ? prior : OrthoBasis::empty(m_test.rows());
      const Matrix block = m_test.middleCols(seg.first_col, seg.end_col - seg.first_col);
      try {
        seg.solve = cfg.use_prior ? solve_mod_pcp(block, seg.g_used, cfg.solver)
                                  : solve_pcp(block, cfg.solver);
        prior = estimate_subspace(seg.solve->l_hat, cfg.subspace_update);
      } catch (const NumericalError& e) {
        seg.error = e.what();
      }
      if (s_truth) {
        const Matrix truth = s_truth->middleCols(seg.first_col, seg.end_col - seg.first_col);
        const Matrix est = seg.solve ? seg.solve->s_hat : Matrix::Zero(truth.rows(), truth.cols());
        seg.nrmse_series = column_nrmse(est, truth);
      }
      out.push_back(std::move(seg));
    }
  }
  return out;
}

std::vector<SegmentResult> run_piecewise(const SequenceData& seq, const PipelineConfig& cfg,
                                         const SubspaceRule& initial_rule) {
  PipelineConfig c = cfg;
  if (c.change_times.empty() && seq.segment_starts.size() > 1) {
    c.change_times.assign(seq.segment_starts.begin() + 1, seq.segment_starts.end());
  }
  const OrthoBasis g0 = estimate_initial_subspace(seq.m_train, initial_rule);
  return run_piecewise(seq.m_test, g0, c, &seq.s_test);
}

PipelineMetrics pipeline_metrics(const std::vector<SegmentResult>& results, const Matrix& s_truth) {
  PipelineMetrics pm;
  double total = 0.0;
  std::vector<double> seg_sum;
  std::vector<std::size_t> seg_count;
  for (const SegmentResult& seg : results) {
    if (seg.first_col < 0 || seg.end_col > s_truth.cols() || seg.end_col < seg.first_col) {
      throw DimensionError("pipeline_metrics: segment outside the truth matrix");
    }
    const Matrix truth = s_truth.middleCols(seg.first_col, seg.end_col - seg.first_col);
    const Matrix est = seg.solve ? seg.solve->s_hat : Matrix::Zero(truth.rows(), truth.cols());
    std::vector<bool> zero;
    const std::vector<double> col = column_nrmse(est, truth, &zero);
    double sum = 0.0;
    for (double v : col) sum += v;
    const auto j = static_cast<std::size_t>(seg.j);
    if (seg_sum.size() <= j) seg_sum.resize(j + 1, 0.0), seg_count.resize(j + 1, 0);
    seg_sum[j] += sum;
    seg_count[j] += col.size();
    total += sum;
    pm.per_column_nrmse.insert(pm.per_column_nrmse.end(), col.begin(), col.end());
    pm.zero_denominator.insert(pm.zero_denominator.end(), zero.begin(), zero.end());
  }
  for (std::size_t j = 0; j < seg_sum.size(); ++j) {
    pm.per_segment_error.push_back(seg_count[j] ? seg_sum[j] / static_cast<double>(seg_count[j]) : 0.0);
  }
  if (!pm.per_column_nrmse.empty()) total /= static_cast<double>(pm.per_column_nrmse.size());
  pm.overall = total;
  return pm;
}

}  // namespace modpcp
