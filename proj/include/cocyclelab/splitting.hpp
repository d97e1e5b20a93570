#pragma once

// Dominated-splitting detection via singular-value gap growth, Oseledets
// subspace estimation, uniform hyperbolicity tests, and Sacker-Sell spectrum
// estimation.
//
// The domination criterion follows the singular-value-gap characterization:
// a dominating bundle of dimension k exists iff sigma_k/sigma_{k+1} grows
// like c * e^{eps * n} uniformly over the space.  At finite horizon this is
// made falsifiable by an explicit least-squares fit with a rate floor and a
// residual-scaled slack envelope.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cocyclelab/lyapunov.hpp"

namespace cocyclelab {

struct GapSeries {
  int k = 0;
  std::vector<std::int64_t> schedule;
  std::vector<double> gaps;  // (1/n) log(sigma_k / sigma_{k+1}) >= 0
  BasePoint point;
};

inline GapSeries gap_series_from_logs(const std::vector<std::vector<double>>& logs,
                                      const std::vector<std::int64_t>& schedule, int k,
                                      const BasePoint& x) {
  GapSeries out;
  out.k = k;
  out.schedule = schedule;
  out.point = x;
  out.gaps.reserve(schedule.size());
  for (size_t t = 0; t < schedule.size(); ++t) {
    const auto& l = logs[t];
    out.gaps.push_back((l[static_cast<size_t>(k - 1)] - l[static_cast<size_t>(k)]) /
                       static_cast<double>(schedule[t]));
  }
  return out;
}

inline GapSeries gap_series(const Cocycle& c, const BasePoint& x, int k,
                            const std::vector<std::int64_t>& schedule) {
  if (k < 1 || k >= c.dim) throw InvalidOrder("gap index must satisfy 1 <= k < d");
  return gap_series_from_logs(log_svd_schedule(c, x, schedule), schedule, k, x);
}

/// Finite-horizon liminf proxy: the minimum of the gap series.
inline double liminf_gap(const Cocycle& c, const BasePoint& x, int k,
                         const std::vector<std::int64_t>& schedule) {
  const GapSeries g = gap_series(c, x, k, schedule);
  return *std::min_element(g.gaps.begin(), g.gaps.end());
}

struct DetectorConfig {
  double rate_floor = 0.01;    // nats per iterate
  double slack_factor = 3.0;   // slack = slack_factor * fit residual RMS
  std::int64_t n_min = 0;      // 0: use the upper half of the schedule
  double angle_threshold = 0.05;  // rad, flag-intersection resolvability
};

struct DominationVerdict {
  int k = 0;
  bool dominated = false;
  double fitted_rate = 0.0;        // eps-hat
  double fitted_offset = 0.0;      // log c-hat
  double min_gap_over_sample = 0.0;
  double residual = 0.0;           // fit RMS over the fitted range
};

namespace detail {

inline std::int64_t effective_n_min(const std::vector<std::int64_t>& schedule, std::int64_t n_min) {
  if (n_min > 0) return n_min;
  return schedule[schedule.size() / 2];
}

struct SampleLogs {
  std::vector<std::vector<std::vector<double>>> per_point;  // [point][t][k]
};

inline SampleLogs collect_logs(const Cocycle& c, const std::vector<BasePoint>& sample,
                               const std::vector<std::int64_t>& schedule) {
  if (sample.empty()) throw EmptySample("detector needs a non-empty sample");
  SampleLogs out;
  out.per_point.reserve(sample.size());
  for (const BasePoint& x : sample) out.per_point.push_back(log_svd_schedule(c, x, schedule));
  return out;
}

inline DominationVerdict domination_from_logs(const SampleLogs& logs,
                                              const std::vector<std::int64_t>& schedule, int k,
                                              const DetectorConfig& config) {
  const std::int64_t n_min = effective_n_min(schedule, config.n_min);
  // OLS fit of y = n * gap(n) against n, pooled across the sample.
  double sn = 0, sy = 0, snn = 0, sny = 0;
  int count = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& point_logs : logs.per_point) {
    for (size_t t = 0; t < schedule.size(); ++t) {
      const double gap = point_logs[t][static_cast<size_t>(k - 1)] - point_logs[t][static_cast<size_t>(k)];
      min_gap = std::min(min_gap, gap / static_cast<double>(schedule[t]));
      if (schedule[t] < n_min) continue;
      const double n = static_cast<double>(schedule[t]);
      sn += n;
      sy += gap;
      snn += n * n;
      sny += n * gap;
      ++count;
    }
  }
  DominationVerdict v;
  v.k = k;
  v.min_gap_over_sample = min_gap;
  if (count < 2) throw InvalidParameter("schedule too short for the domination fit");
  const double denom = count * snn - sn * sn;
  v.fitted_rate = (count * sny - sn * sy) / denom;
  v.fitted_offset = (sy - v.fitted_rate * sn) / count;
  double rss = 0;
  for (const auto& point_logs : logs.per_point)
    for (size_t t = 0; t < schedule.size(); ++t) {
      if (schedule[t] < n_min) continue;
      const double gap = point_logs[t][static_cast<size_t>(k - 1)] - point_logs[t][static_cast<size_t>(k)];
      const double pred = v.fitted_rate * static_cast<double>(schedule[t]) + v.fitted_offset;
      rss += (gap - pred) * (gap - pred);
    }
  v.residual = std::sqrt(rss / count);
  const double slack = config.slack_factor * v.residual;
  bool envelope_ok = true;
  for (const auto& point_logs : logs.per_point)
    for (size_t t = 0; t < schedule.size() && envelope_ok; ++t) {
      if (schedule[t] < n_min) continue;
      const double gap = point_logs[t][static_cast<size_t>(k - 1)] - point_logs[t][static_cast<size_t>(k)];
      if (gap < v.fitted_rate * static_cast<double>(schedule[t]) + v.fitted_offset - slack)
        envelope_ok = false;
    }
  v.dominated = v.fitted_rate > config.rate_floor && envelope_ok;
  return v;
}

/// Per-point fitted growth rate of log sigma_k over the upper schedule range.
inline double fitted_block_rate(const std::vector<std::vector<double>>& point_logs,
                                const std::vector<std::int64_t>& schedule, int k, std::int64_t n_min) {
  double sn = 0, sy = 0, snn = 0, sny = 0;
  int count = 0;
  for (size_t t = 0; t < schedule.size(); ++t) {
    if (schedule[t] < n_min) continue;
    const double n = static_cast<double>(schedule[t]);
    const double y = point_logs[t][static_cast<size_t>(k)];
    sn += n;
    sy += y;
    snn += n * n;
    sny += n * y;
    ++count;
  }
  if (count < 2) throw InvalidParameter("schedule too short for the rate fit");
  return (count * sny - sn * sy) / (count * snn - sn * sn);
}

inline bool hyperbolic_from_logs(const SampleLogs& logs, const std::vector<std::int64_t>& schedule,
                                 int k, double lambda, const DetectorConfig& config) {
  const DominationVerdict dom = domination_from_logs(logs, schedule, k, config);
  if (!dom.dominated) return false;
  const std::int64_t n_min = effective_n_min(schedule, config.n_min);
  for (const auto& point_logs : logs.per_point) {
    const double upper = fitted_block_rate(point_logs, schedule, k - 1, n_min) - lambda;
    const double lower = fitted_block_rate(point_logs, schedule, k, n_min) - lambda;
    if (!(upper > config.rate_floor && lower < -config.rate_floor)) return false;
  }
  return true;
}

/// Trivial-bundle hyperbolicity: the rescaled cocycle expands (or contracts)
/// every direction uniformly over the sample.
inline bool uniformly_one_sided(const SampleLogs& logs, const std::vector<std::int64_t>& schedule,
                                int d, double lambda, const DetectorConfig& config, bool expanding) {
  const std::int64_t n_min = effective_n_min(schedule, config.n_min);
  for (const auto& point_logs : logs.per_point) {
    const int k = expanding ? d - 1 : 0;  // slowest vs fastest block
    const double rate = fitted_block_rate(point_logs, schedule, k, n_min) - lambda;
    if (expanding && !(rate > config.rate_floor)) return false;
    if (!expanding && !(rate < -config.rate_floor)) return false;
  }
  return true;
}

}  // namespace detail

/// Pooled least-squares domination test at index k over a sample.
inline DominationVerdict detect_domination(const Cocycle& c, const std::vector<BasePoint>& sample,
                                           int k, const std::vector<std::int64_t>& schedule,
                                           const DetectorConfig& config = {}) {
  if (k < 1 || k >= c.dim) throw InvalidOrder("domination index must satisfy 1 <= k < d");
  const auto logs = detail::collect_logs(c, sample, schedule);
  return detail::domination_from_logs(logs, schedule, k, config);
}

/// Uniform hyperbolicity at splitting index k: domination plus fitted
/// per-bundle rates sign-separated through 0, uniformly over the sample.
inline bool hyperbolicity_test(const Cocycle& c, const std::vector<BasePoint>& sample, int k,
                               const std::vector<std::int64_t>& schedule,
                               const DetectorConfig& config = {}) {
  if (k < 1 || k >= c.dim) throw InvalidOrder("splitting index must satisfy 1 <= k < d");
  const auto logs = detail::collect_logs(c, sample, schedule);
  return detail::hyperbolic_from_logs(logs, schedule, k, 0.0, config);
}

// ---------------------------------------------------------------------------
// Oseledets subspace estimation.

struct OseledetsEstimate {
  std::vector<Subspace> subspaces;   // E_i, fastest block first
  std::vector<double> exponents;     // chi-hat_i (block means of log sigma / n)
  std::vector<double> pairwise_angles;  // minimal principal angle per pair (i<j)
  std::int64_t horizon = 0;
};

/// E_i is estimated by intersecting the two filtration flags read off the
/// right singular subspaces of A(x, n) and A(x, -n): the span of the slowest
/// (d - D_{i-1}) forward directions meets the span of the slowest D_i
/// backward directions exactly in the i-th Oseledets block (dimension d_i).
inline OseledetsEstimate estimate_oseledets(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                            const std::vector<int>& dims,
                                            const DetectorConfig& config = {}) {
  if (n < 1) throw InvalidParameter("estimate_oseledets needs n >= 1");
  int total = 0;
  for (int d_i : dims) {
    if (d_i < 1) throw InvalidSpectrumShape("block dimensions must be positive");
    total += d_i;
  }
  if (total != c.dim) throw InvalidSpectrumShape("block dimensions must sum to d");

  // Underflow in the scaled product only scrambles directions inside a
  // block whose span is what we extract, so no spread guard is needed;
  // exponents, however, are read from the stabilized path.
  const ScaledMatrix fwd = scaled_evaluate(c, x, n, +1);
  const ScaledMatrix bwd = scaled_evaluate(c, x, n, -1);
  if (!fwd.value.is_finite() || !bwd.value.is_finite())
    throw SplittingUnresolved("scaled product lost finiteness; reduce the horizon");
  const SVDResult fsvd = svd(fwd.value);
  const SVDResult bsvd = svd(bwd.value);
  const std::vector<double> logs = stabilized_log_svd(c, x, n, +1);

  const int d = c.dim;
  auto right_subspace = [&](const SVDResult& s, int from, int count) {
    Matrix rows(count, d);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < d; ++j) rows(i, j) = s.right_basis(j, from + i);
    return Subspace::from_rows(rows);
  };

  OseledetsEstimate out;
  out.horizon = n;
  int offset = 0;  // D_{i-1}
  for (size_t b = 0; b < dims.size(); ++b) {
    const int d_i = dims[b];
    // Forward slow filtration: right singular directions D_{i-1}..d-1 of
    // A(x,n) span E_i + ... + E_s in the limit.  Backward slow filtration:
    // the bottom D_i right singular directions of A(x,-n) span E_1 + ... + E_i.
    const Subspace forward_slow = right_subspace(fsvd, offset, d - offset);
    const Subspace backward_slow = right_subspace(bsvd, d - (offset + d_i), offset + d_i);
    const Matrix inter = subspace_intersection_rows(forward_slow, backward_slow, config.angle_threshold);
    if (inter.rows() != d_i)
      throw SplittingUnresolved("flag intersection has deficient rank; point may be irregular or n too small");
    out.subspaces.push_back(Subspace::from_rows(inter));
    double mean = 0.0;
    for (int i = 0; i < d_i; ++i) mean += logs[static_cast<size_t>(offset + i)];
    out.exponents.push_back(mean / (d_i * static_cast<double>(n)));
    offset += d_i;
  }
  for (size_t i = 0; i < out.subspaces.size(); ++i)
    for (size_t j = i + 1; j < out.subspaces.size(); ++j) {
      const double angle = subspace_angle(out.subspaces[i], out.subspaces[j]);
      out.pairwise_angles.push_back(angle);
      if (angle < config.angle_threshold)
        throw SplittingUnresolved("estimated bundles nearly collide; point may be irregular");
    }
  return out;
}

// ---------------------------------------------------------------------------
// Sacker-Sell spectrum estimation.

struct SackerSellEstimate {
  std::vector<std::pair<double, double>> intervals;  // [alpha_i, beta_i], descending
  std::vector<double> grid;
  std::int64_t horizon = 0;
};

/// Grid scan: lambda belongs to the estimated spectrum iff the rescaled
/// cocycle e^{-lambda n} A(x, n) passes the uniform-hyperbolicity test at no
/// splitting index, including the trivial-bundle cases at the extremes.
inline SackerSellEstimate estimate_sacker_sell(const Cocycle& c, const std::vector<BasePoint>& sample,
                                               const std::vector<double>& lambda_grid,
                                               const std::vector<std::int64_t>& schedule,
                                               const DetectorConfig& config = {}) {
  if (lambda_grid.empty()) throw InvalidParameter("empty lambda grid");
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
    throw InvalidParameter("lambda grid must be sorted");
  const auto logs = detail::collect_logs(c, sample, schedule);
  const int d = c.dim;

  std::vector<bool> in_spectrum(lambda_grid.size(), false);
  // Domination verdicts do not depend on lambda (gaps are rescale-invariant).
  std::vector<bool> dominated(static_cast<size_t>(std::max(d - 1, 0)), false);
  for (int k = 1; k < d; ++k)
    dominated[static_cast<size_t>(k - 1)] =
        detail::domination_from_logs(logs, schedule, k, config).dominated;

  for (size_t g = 0; g < lambda_grid.size(); ++g) {
    const double lambda = lambda_grid[g];
    bool hyperbolic = detail::uniformly_one_sided(logs, schedule, d, lambda, config, true) ||
                      detail::uniformly_one_sided(logs, schedule, d, lambda, config, false);
    for (int k = 1; k < d && !hyperbolic; ++k)
      if (dominated[static_cast<size_t>(k - 1)])
        hyperbolic = detail::hyperbolic_from_logs(logs, schedule, k, lambda, config);
    in_spectrum[g] = !hyperbolic;
  }

  SackerSellEstimate out;
  out.grid = lambda_grid;
  out.horizon = schedule.back();
  // Merge adjacent in-spectrum grid points into closed intervals.
  size_t g = 0;
  while (g < lambda_grid.size()) {
    if (!in_spectrum[g]) {
      ++g;
      continue;
    }
    size_t h = g;
    while (h + 1 < lambda_grid.size() && in_spectrum[h + 1]) ++h;
    out.intervals.emplace_back(lambda_grid[g], lambda_grid[h]);
    g = h + 1;
  }
  // At most d intervals: merge the closest adjacent pair until that holds.
  while (static_cast<int>(out.intervals.size()) > d) {
    size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < out.intervals.size(); ++i) {
      const double gap = out.intervals[i + 1].first - out.intervals[i].second;
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    out.intervals[best].second = out.intervals[best + 1].second;
    out.intervals.erase(out.intervals.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  // Report interval order descending; each pair stays (alpha_i, beta_i).
  std::reverse(out.intervals.begin(), out.intervals.end());
  return out;
}

/// Default lambda grid: the generator's log singular range over the sample,
/// padded by 0.5, step 0.02.
inline std::vector<double> default_lambda_grid(const Cocycle& c, const std::vector<BasePoint>& sample,
                                               double pad = 0.5, double step = 0.02) {
  if (sample.empty()) throw EmptySample("default_lambda_grid needs a sample");
  double bound = 0.0;
  for (const BasePoint& x : sample) {
    const auto s = svd(c.generator_at(x)).singular_values;
    bound = std::max(bound, std::abs(std::log(s.front())));
    bound = std::max(bound, std::abs(std::log(s.back())));
  }
  std::vector<double> grid;
  const double lo = -bound - pad, hi = bound + pad;
  for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(v);
  return grid;
}

}  // namespace cocyclelab
