#include "modpcp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modpcp/errors.hpp"

namespace modpcp {

namespace {

struct LinearCell {
  Eigen::Index row;
  Eigen::Index col;
};

// Column-major linear index -> (row, col).
LinearCell cell_of(std::uint64_t k, Eigen::Index n1) {
  return {static_cast<Eigen::Index>(k % static_cast<std::uint64_t>(n1)),
          static_cast<Eigen::Index>(k / static_cast<std::uint64_t>(n1))};
}

// First `count` columns of an orthonormal basis of span(a), throwing when the
// sampled matrix is numerically rank deficient.
Matrix orthonormal_columns(const Matrix& a, Eigen::Index count, const char* what) {
  if (count == 0) return Matrix(a.rows(), 0);
  const OrthoBasis b = orthonormalize(a);
  if (b.rank() < count) {
    throw NumericalError(std::string(what) + ": sampled matrix is rank deficient");
  }
  return b.columns().leftCols(count);
}

struct LowRankWithPrior {
  Matrix l;
  OrthoBasis prior;
};

// L = X Y^T and G = [U0 G_extra] as described for gen_phase_instance.
LowRankWithPrior xy_low_rank(Rng& rng, Eigen::Index n1, Eigen::Index n2, Eigen::Index r,
                             Eigen::Index r_new, Eigen::Index r_extra) {
  if (r < 1 || r > std::min(n1, n2)) throw ParameterError("rank r must lie in [1, min(n1, n2)]");
  if (r_new < 0 || r_new > r) throw ParameterError("r_new must lie in [0, r]");
  if (r_extra < 0 || r + r_extra > n1) throw ParameterError("r + r_extra must not exceed n1");

  const Matrix x = rng.gaussian(n1, r, 1.0 / static_cast<double>(n1));
  const Matrix y = rng.gaussian(n2, r, 1.0 / static_cast<double>(n2));
  LowRankWithPrior out;
  out.l = x * y.transpose();

  const Matrix u0 = orthonormal_columns(x, r - r_new, "X");
  Matrix g_extra(n1, 0);
  if (r_extra > 0) {
    const Matrix x1 = rng.gaussian(n1, 2 * r_extra, 1.0 / static_cast<double>(n1));
    const OrthoBasis u = svd(out.l).u;
    g_extra = orthonormal_columns(u.project_complement(x1), r_extra, "(I - U U^T) X1");
  }
  Matrix g(n1, u0.cols() + g_extra.cols());
  g << u0, g_extra;
  out.prior = OrthoBasis(std::move(g), 1e-9);
  return out;
}

Matrix signs_on(const SupportSet& support, Rng& rng) {
  Matrix s = Matrix::Zero(support.rows(), support.cols());
  for (Eigen::Index j = 0; j < support.cols(); ++j) {
    for (Eigen::Index i = 0; i < support.rows(); ++i) {
      if (support.contains(i, j)) s(i, j) = rng.sign();
    }
  }
  return s;
}

}  // namespace

// ------------------------------------------------------------------ supports

SupportSet sample_support(Eigen::Index n1, Eigen::Index n2, const SupportModel& model, Rng& rng) {
  if (n1 < 0 || n2 < 0) throw DimensionError("sample_support: negative shape");
  SupportSet out(n1, n2);
  if (const auto* b = std::get_if<BernoulliSupport>(&model)) {
    if (!(b->rho >= 0.0 && b->rho <= 1.0)) throw ParameterError("bernoulli rho outside [0, 1]");
    for (Eigen::Index j = 0; j < n2; ++j) {
      for (Eigen::Index i = 0; i < n1; ++i) {
        if (rng.bernoulli(b->rho)) out.insert(i, j);
      }
    }
    return out;
  }
  const auto& u = std::get<UniformSupport>(model);
  const auto total = static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(n2);
  if (u.m > total) throw ParameterError("uniform support size exceeds n1 * n2");
  for (std::uint64_t k : rng.sample_without_replacement(total, u.m)) {
    const LinearCell c = cell_of(k, n1);
    out.insert(c.row, c.col);
  }
  return out;
}

SupportSet sample_support(Eigen::Index n1, Eigen::Index n2, const SupportModel& model,
                          std::uint64_t seed) {
  Rng rng(seed);
  return sample_support(n1, n2, model, rng);
}

SupportSet gen_correlated_support(Eigen::Index n, Eigen::Index s, Eigen::Index period,
                                  Eigen::Index step, Eigen::Index num_cols,
                                  Eigen::Index start_offset) {
  if (n < 1 || s < 0 || s > n) throw ParameterError("correlated support needs 0 <= s <= n");
  if (period < 1) throw ParameterError("correlated support period must be >= 1");
  if (num_cols < 0) throw ParameterError("correlated support needs num_cols >= 0");
  SupportSet out(n, num_cols);
  for (Eigen::Index t = 0; t < num_cols; ++t) {
    Eigen::Index start = (start_offset + step * (t / period)) % n;
    if (start < 0) start += n;
    for (Eigen::Index k = 0; k < s; ++k) out.insert((start + k) % n, t);
  }
  return out;
}

Matrix random_signs_on(const SupportSet& support, Rng& rng) { return signs_on(support, rng); }

// ------------------------------------------------------------------ static

void StaticGenParams::validate() const {
  if (n1 < 1 || d < 1 || n2 < 1) throw ParameterError("static instance: dimensions must be >= 1");
  if (r0 < 0 || r_new < 0 || r_extra < 0) throw ParameterError("static instance: negative rank");
  if (r != r0 + r_new) throw ParameterError("static instance: r must equal r0 + r_new");
  if (r0 + r_extra + r_new > std::min(n1, d)) {
    throw ParameterError("static instance: r0 + r_extra + r_new exceeds min(n1, d)");
  }
  if (r > n2) throw ParameterError("static instance: r exceeds n2");
  if (m > static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(n2)) {
    throw ParameterError("static instance: m exceeds n1 * n2");
  }
}

StaticInstance gen_static_instance(const StaticGenParams& p) {
  p.validate();
  Rng rng(p.seed);
  const double var = 1.0 / static_cast<double>(p.n1);
  const Eigen::Index total = p.r0 + p.r_extra + p.r_new;
  const Eigen::Index r_g = p.r0 + p.r_extra;

  const Matrix basis = orthonormal_columns(rng.gaussian(p.n1, total, var), total, "[G U_new]");
  const Matrix y1 = rng.gaussian(r_g, p.d, var);
  const Matrix y2 = rng.gaussian(p.r, p.n2, var);
  const SupportSet support = sample_support(p.n1, p.n2, UniformSupport{p.m}, rng);
  const Matrix s = signs_on(support, rng);

  StaticInstance out;
  out.u0 = OrthoBasis::trusted(basis.leftCols(p.r0));
  out.g_extra = OrthoBasis::trusted(basis.middleCols(p.r0, p.r_extra));
  out.u_new = OrthoBasis::trusted(basis.rightCols(p.r_new));

  Matrix u(p.n1, p.r);
  u << out.u0.columns(), out.u_new.columns();
  const Matrix l = u * y2;
  out.m_train = basis.leftCols(r_g) * y1;

  ProblemInstance& inst = out.problem;
  inst.m = l + s;
  inst.prior = svd(out.m_train).u;
  inst.truth_l = l;
  inst.truth_s = s;
  inst.truth_support = support;
  return out;
}

// ------------------------------------------------------------------ phase transition

Eigen::Index fraction_of_rank(double frac, Eigen::Index r) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw ParameterError("rank fraction must lie in [0, 1]");
  return static_cast<Eigen::Index>(std::floor(frac * static_cast<double>(r) + 1e-9));
}

ProblemInstance gen_phase_instance(const PhaseGenParams& p) {
  if (p.n1 < 1 || p.n2 < 1) throw ParameterError("phase instance: dimensions must be >= 1");
  if (p.m > static_cast<std::uint64_t>(p.n1) * static_cast<std::uint64_t>(p.n2)) {
    throw ParameterError("phase instance: m exceeds n1 * n2");
  }
  const Eigen::Index r_new = fraction_of_rank(p.r_new_frac, p.r);
  const Eigen::Index r_extra = fraction_of_rank(p.r_extra_frac, p.r);
  Rng rng(p.seed);
  LowRankWithPrior lr = xy_low_rank(rng, p.n1, p.n2, p.r, r_new, r_extra);
  const SupportSet support = sample_support(p.n1, p.n2, UniformSupport{p.m}, rng);
  const Matrix s = signs_on(support, rng);

  ProblemInstance inst;
  inst.m = lr.l + s;
  inst.prior = std::move(lr.prior);
  inst.truth_l = std::move(lr.l);
  inst.truth_s = s;
  inst.truth_support = support;
  return inst;
}

// ------------------------------------------------------------------ noisy

ProblemInstance gen_noisy_instance(const NoisyGenParams& p) {
  if (!(p.sigma >= 0.0)) throw ParameterError("noisy instance: sigma must be nonnegative");
  if (!(p.rho_s >= 0.0 && p.rho_s <= 1.0)) throw ParameterError("noisy instance: rho_s outside [0, 1]");
  if (!(p.amplitude >= 0.0)) throw ParameterError("noisy instance: amplitude must be nonnegative");
  Rng rng(p.seed);
  LowRankWithPrior lr = xy_low_rank(rng, p.n1, p.n2, p.r, p.r_new, p.r_extra);

  const SupportSet support = sample_support(p.n1, p.n2, BernoulliSupport{p.rho_s}, rng);
  Matrix s = Matrix::Zero(p.n1, p.n2);
  for (Eigen::Index j = 0; j < p.n2; ++j) {
    for (Eigen::Index i = 0; i < p.n1; ++i) {
      if (support.contains(i, j)) s(i, j) = rng.uniform(-p.amplitude, p.amplitude);
    }
  }

  Matrix z = Matrix::Zero(p.n1, p.n2);
  if (p.sigma > 0.0) {
    z = rng.gaussian(p.n1, p.n2, 1.0);
    z *= p.sigma / z.norm();
  }

  ProblemInstance inst;
  inst.m = lr.l + s + z;
  inst.prior = std::move(lr.prior);
  inst.truth_l = std::move(lr.l);
  inst.truth_s = std::move(s);
  inst.truth_support = support;
  inst.noise_sigma = p.sigma;
  return inst;
}

// ------------------------------------------------------------------ online

void OnlineGenParams::validate() const {
  if (n < 1 || r0 < 1 || r0 > n) throw ParameterError("online: need 1 <= r0 <= n");
  if (t0 < 1 || test_length < 1) throw ParameterError("online: t0 and test_length must be >= 1");
  const std::size_t j = change_times.size();
  if (c_new.size() != j || c_old.size() != j) {
    throw ParameterError("online: c_new and c_old need one entry per change time");
  }
  for (std::size_t k = 0; k < j; ++k) {
    if (change_times[k] <= t0 || change_times[k] >= t0 + test_length) {
      throw ParameterError("online: change times must fall strictly inside the test columns");
    }
    if (k > 0 && change_times[k] <= change_times[k - 1]) {
      throw ParameterError("online: change times must be strictly increasing");
    }
    if (c_new[k] < 0 || c_old[k] < 0) throw ParameterError("online: negative c_new or c_old");
  }
  if (!(gamma >= 0.0) || !(gamma_new >= 0.0)) throw ParameterError("online: gamma must be >= 0");
  if (ramp_length < 0) throw ParameterError("online: ramp_length must be >= 0");
  if (const auto* b = std::get_if<OnlineBernoulliSupport>(&support)) {
    if (!(b->p >= 0.0 && b->p <= 1.0)) throw ParameterError("online: support p outside [0, 1]");
    if (!(b->lo <= b->hi)) throw ParameterError("online: magnitude range is empty");
  } else {
    const auto& c = std::get<OnlineCorrelatedSupport>(support);
    if (c.s < 0 || c.s > n || c.period < 1) throw ParameterError("online: bad correlated support");
    if (!(c.lo <= c.hi)) throw ParameterError("online: magnitude range is empty");
  }
}

OnlineGenParams online_case_params(char which, std::uint64_t seed) {
  OnlineGenParams p;
  const Eigen::Index alpha = 100;
  p.change_times = {p.t0 + 6 * alpha, p.t0 + 12 * alpha, p.t0 + 18 * alpha};
  p.seed = seed;
  switch (which) {
    case 'a':
      p.gamma_new = p.gamma;
      p.support = OnlineBernoulliSupport{};
      break;
    case 'b':
      p.gamma_new = 1.0;
      p.support = OnlineCorrelatedSupport{5, 25, 5, 20.0, 60.0};
      break;
    case 'c':
      p.gamma_new = 1.0;
      p.support = OnlineCorrelatedSupport{10, 25, 5, 20.0, 60.0};
      break;
    default:
      throw ParameterError(std::string("unknown online case '") + which + "'");
  }
  return p;
}

SequenceData gen_online_sequence(const OnlineGenParams& p) {
  p.validate();
  Rng rng(p.seed);
  const double var = 1.0 / static_cast<double>(p.n);
  const std::size_t num_changes = p.change_times.size();

  // Bases first, so the coefficient stream does not depend on J.
  SequenceData out;
  out.bases.push_back(orthonormalize(rng.gaussian(p.n, p.r0, var)));
  if (out.bases[0].rank() != p.r0) throw NumericalError("online: P_0 is rank deficient");
  out.new_bases.push_back(OrthoBasis::empty(p.n));
  for (std::size_t k = 0; k < num_changes; ++k) {
    const OrthoBasis& prev = out.bases.back();
    if (p.c_old[k] > prev.rank()) {
      throw ParameterError("online: c_old exceeds the current rank at change " + std::to_string(k));
    }
    if (prev.rank() - p.c_old[k] + p.c_new[k] > p.n) {
      throw ParameterError("online: rank after change " + std::to_string(k) + " exceeds n");
    }
    Matrix fresh(p.n, 0);
    if (p.c_new[k] > 0) {
      const Matrix raw = prev.project_complement(rng.gaussian(p.n, p.c_new[k], var));
      fresh = orthonormal_columns(prev.project_complement(orthonormalize(raw).columns()),
                                  p.c_new[k], "P_new");
    }
    const Eigen::Index kept = prev.rank() - p.c_old[k];
    const Matrix kept_cols = p.remove_first ? Matrix(prev.columns().rightCols(kept))
                                            : Matrix(prev.columns().leftCols(kept));
    Matrix next(p.n, kept + fresh.cols());
    next << kept_cols, fresh;
    out.new_bases.push_back(OrthoBasis::trusted(fresh));
    out.bases.push_back(OrthoBasis(std::move(next), 1e-9));
  }

  const Eigen::Index total = p.t0 + p.test_length;
  Matrix l(p.n, total);
  std::size_t seg = 0;
  for (Eigen::Index t = 0; t < total; ++t) {
    while (seg < num_changes && t >= p.change_times[seg]) ++seg;
    const Matrix& basis = out.bases[seg].columns();
    const Eigen::Index rank = basis.cols();
    const Eigen::Index first_new = rank - out.new_bases[seg].rank();
    const bool ramp = seg > 0 && t - p.change_times[seg - 1] < p.ramp_length;
    Vector a(rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
      const double g = (ramp && k >= first_new) ? p.gamma_new : p.gamma;
      a(k) = rng.uniform(-g, g);
    }
    l.col(t) = basis * a;
  }

  SupportSet support;
  double lo = 0.0;
  double hi = 0.0;
  if (const auto* b = std::get_if<OnlineBernoulliSupport>(&p.support)) {
    support = sample_support(p.n, p.test_length, BernoulliSupport{b->p}, rng);
    lo = b->lo;
    hi = b->hi;
  } else {
    const auto& c = std::get<OnlineCorrelatedSupport>(p.support);
    support = gen_correlated_support(p.n, c.s, c.period, c.step, p.test_length, 0);
    lo = c.lo;
    hi = c.hi;
  }
  Matrix s = Matrix::Zero(p.n, p.test_length);
  for (Eigen::Index j = 0; j < p.test_length; ++j) {
    for (Eigen::Index i = 0; i < p.n; ++i) {
      if (support.contains(i, j)) s(i, j) = rng.uniform(lo, hi);
    }
  }

  out.m_train = l.leftCols(p.t0);
  out.l_test = l.rightCols(p.test_length);
  out.s_test = std::move(s);
  out.m_test = out.l_test + out.s_test;
  out.segment_starts.push_back(0);
  for (Eigen::Index t : p.change_times) out.segment_starts.push_back(t - p.t0);
  return out;
}

}  // namespace modpcp
