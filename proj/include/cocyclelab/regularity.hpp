#pragma once

// LP-regularity diagnostics at a point, complete-regularity tests over
// samples, and oscillation witnesses.
//
// Finite-time data cannot certify limits; the verdicts here are calibrated
// proxies.  A point is reported regular_consistent only when the forward and
// backward spectra agree, the pushed-bundle angles show no exponential decay,
// and the values are stable under horizon doubling.  irregular_evidence
// requires the forward/backward discrepancy to persist or grow across the
// n/4 -> n/2 -> n checkpoints, so transient disagreement at small n stays
// inconclusive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cocyclelab/splitting.hpp"

namespace cocyclelab {

enum class PointVerdict { regular_consistent, irregular_evidence, inconclusive };

enum class SampleVerdict { consistent_with_complete_regularity, not_consistent };

inline const char* to_string(PointVerdict v) {
  switch (v) {
    case PointVerdict::regular_consistent: return "regular_consistent";
    case PointVerdict::irregular_evidence: return "irregular_evidence";
    default: return "inconclusive";
  }
}

inline const char* to_string(SampleVerdict v) {
  return v == SampleVerdict::consistent_with_complete_regularity
             ? "consistent_with_complete_regularity"
             : "not_consistent";
}

struct ProbeConfig {
  double tol = 0.02;              // nats per iterate
  double group_tol = 0.05;        // spectral gap needed to split into blocks
  double angle_threshold = 0.05;  // rad; below this the splitting is unresolved
};

struct RegularityReport {
  FiniteTimeSpectrum forward_spectrum;
  FiniteTimeSpectrum backward_spectrum;
  double discrepancy = 0.0;                     // max_k |forward_k - backward_k| at n
  std::vector<std::int64_t> checkpoints;        // n/4, n/2, n
  std::vector<double> discrepancy_checkpoints;  // aligned with `checkpoints`
  double angle_decay_rate = 0.0;                // (1/n) log min pushed angle
  double convergence_half_life = 0.0;           // max_k |v_k(n) - v_k(n/2)|
  PointVerdict verdict = PointVerdict::inconclusive;
  std::string reason;
};

namespace detail {

inline std::vector<std::int64_t> probe_checkpoints(std::int64_t n) {
  return {std::max<std::int64_t>(n / 4, 1), std::max<std::int64_t>(n / 2, 1), n};
}

/// Group the descending finite-time values into blocks separated by more
/// than `group_tol`, returning block dimensions.
inline std::vector<int> group_dims(const std::vector<double>& values, double group_tol) {
  std::vector<int> dims;
  int cur = 1;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] - values[i] > group_tol) {
      dims.push_back(cur);
      cur = 1;
    } else {
      ++cur;
    }
  }
  dims.push_back(cur);
  return dims;
}

}  // namespace detail

/// Forward/backward finite-time spectra plus angle diagnostics at x.
inline RegularityReport probe_point(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                    const ProbeConfig& config = {}) {
  if (n < 4) throw InvalidParameter("probe horizon must be >= 4");
  RegularityReport rep;
  rep.checkpoints = detail::probe_checkpoints(n);

  const auto fwd = log_svd_schedule(c, x, rep.checkpoints, +1);
  const auto bwd = log_svd_schedule(c, x, rep.checkpoints, -1);

  const int d = c.dim;
  for (size_t t = 0; t < rep.checkpoints.size(); ++t) {
    const double m = static_cast<double>(rep.checkpoints[t]);
    double disc = 0.0;
    for (int k = 0; k < d; ++k)
      disc = std::max(disc, std::abs(fwd[t][static_cast<size_t>(k)] / m - bwd[t][static_cast<size_t>(k)] / m));
    rep.discrepancy_checkpoints.push_back(disc);
  }
  rep.discrepancy = rep.discrepancy_checkpoints.back();

  rep.forward_spectrum.values.assign(d, 0.0);
  rep.backward_spectrum.values.assign(d, 0.0);
  for (int k = 0; k < d; ++k) {
    rep.forward_spectrum.values[static_cast<size_t>(k)] = fwd.back()[static_cast<size_t>(k)] / static_cast<double>(n);
    rep.backward_spectrum.values[static_cast<size_t>(k)] = bwd.back()[static_cast<size_t>(k)] / static_cast<double>(n);
  }
  rep.forward_spectrum.horizon = rep.backward_spectrum.horizon = n;
  rep.forward_spectrum.direction = Direction::forward;
  rep.backward_spectrum.direction = Direction::backward;
  rep.forward_spectrum.point = rep.backward_spectrum.point = x;

  double half_life = 0.0;
  for (int k = 0; k < d; ++k)
    half_life = std::max(half_life, std::abs(fwd[2][static_cast<size_t>(k)] / static_cast<double>(n) -
                                             fwd[1][static_cast<size_t>(k)] / static_cast<double>(rep.checkpoints[1])));
  rep.convergence_half_life = half_life;

  // Angle condition: estimate the splitting from the spectral blocks and
  // track the minimal angle between pushed complementary bundles.
  bool splitting_unresolved = false;
  const std::vector<int> dims = detail::group_dims(rep.forward_spectrum.values, config.group_tol);
  if (dims.size() >= 2) {
    try {
      DetectorConfig det;
      det.angle_threshold = config.angle_threshold;
      const OseledetsEstimate est = estimate_oseledets(c, x, rep.checkpoints.front(), dims, det);
      auto stack_pushed = [&](size_t from, size_t to, std::int64_t m, int direction) {
        int total = 0;
        for (size_t b = from; b < to; ++b) total += est.subspaces[b].dim();
        Matrix out(total, c.dim);
        int r0 = 0;
        for (size_t b = from; b < to; ++b) {
          const Matrix img = push_subspace(c, x, est.subspaces[b], m, direction).basis();
          for (int r = 0; r < img.rows(); ++r, ++r0)
            for (int j = 0; j < c.dim; ++j) out(r0, j) = img(r, j);
        }
        return Subspace::from_rows(out);
      };
      double worst_rate = 0.0;
      for (int direction : {+1, -1}) {
        for (std::int64_t m : rep.checkpoints) {
          double min_angle = std::numeric_limits<double>::infinity();
          for (size_t split = 1; split < est.subspaces.size(); ++split) {
            const Subspace top = stack_pushed(0, split, m, direction);
            const Subspace bot = stack_pushed(split, est.subspaces.size(), m, direction);
            min_angle = std::min(min_angle, subspace_angle(top, bot));
          }
          if (min_angle < 1e-300)
            splitting_unresolved = true;
          else
            worst_rate = std::max(worst_rate, std::abs(std::log(min_angle)) / static_cast<double>(m));
        }
      }
      rep.angle_decay_rate = worst_rate;
    } catch (const SplittingUnresolved& e) {
      splitting_unresolved = true;
      rep.reason = e.what();
    }
  }

  const auto& dc = rep.discrepancy_checkpoints;
  const bool persists = dc[0] > config.tol && dc[1] > config.tol && dc[2] > config.tol;
  const bool grows = dc[2] > config.tol && dc[2] >= dc[1] && dc[1] >= dc[0];
  if (splitting_unresolved) {
    rep.verdict = PointVerdict::irregular_evidence;
    if (rep.reason.empty()) rep.reason = "splitting unresolved at the probe horizon";
  } else if (rep.discrepancy <= config.tol && std::abs(rep.angle_decay_rate) <= config.tol &&
             rep.convergence_half_life < config.tol / 2) {
    rep.verdict = PointVerdict::regular_consistent;
    rep.reason = "forward/backward spectra agree and are stable under horizon doubling";
  } else if (persists || grows) {
    rep.verdict = PointVerdict::irregular_evidence;
    rep.reason = "forward/backward discrepancy persists across checkpoints";
  } else {
    rep.verdict = PointVerdict::inconclusive;
    rep.reason = "discrepancy neither settles nor persists at this horizon";
  }
  return rep;
}

struct CompleteRegularityReport {
  std::vector<RegularityReport> per_point;
  double spectrum_spread = 0.0;     // max pairwise L1 distance of forward spectra
  double uniformity_deficit = 0.0;  // max |value - per-index median| at the horizon
  SampleVerdict verdict = SampleVerdict::not_consistent;
};

inline CompleteRegularityReport probe_complete_regularity(const Cocycle& c,
                                                          const std::vector<BasePoint>& sample,
                                                          std::int64_t n,
                                                          const ProbeConfig& config = {}) {
  if (sample.empty()) throw EmptySample("probe_complete_regularity needs a sample");
  CompleteRegularityReport rep;
  for (const BasePoint& x : sample) rep.per_point.push_back(probe_point(c, x, n, config));

  for (size_t i = 0; i < rep.per_point.size(); ++i)
    for (size_t j = i + 1; j < rep.per_point.size(); ++j)
      rep.spectrum_spread = std::max(
          rep.spectrum_spread, spectrum_distance(rep.per_point[i].forward_spectrum.values,
                                                 rep.per_point[j].forward_spectrum.values));

  const int d = c.dim;
  for (int k = 0; k < d; ++k) {
    std::vector<double> vals;
    vals.reserve(rep.per_point.size());
    for (const auto& r : rep.per_point) vals.push_back(r.forward_spectrum.values[static_cast<size_t>(k)]);
    std::sort(vals.begin(), vals.end());
    const double median = vals[vals.size() / 2];
    for (double v : vals) rep.uniformity_deficit = std::max(rep.uniformity_deficit, std::abs(v - median));
  }

  bool all_regular = true;
  for (const auto& r : rep.per_point)
    if (r.verdict != PointVerdict::regular_consistent) all_regular = false;
  rep.verdict = (all_regular && rep.spectrum_spread <= config.tol && rep.uniformity_deficit <= config.tol)
                    ? SampleVerdict::consistent_with_complete_regularity
                    : SampleVerdict::not_consistent;
  return rep;
}

// ---------------------------------------------------------------------------
// Oscillation witnesses.

struct WitnessRecord {
  BasePoint point;
  std::int64_t witness_n = -1;  // schedule entry achieving the bound, or -1
  double extreme_value = 0.0;   // the most extreme (1/n) log|A(x,n)| seen
};

/// Finite-horizon membership check for the dense sets I_alpha (norm growth
/// dips below alpha at some n) and S_beta (exceeds beta at some n).
struct OscillationReport {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<WitnessRecord> i_witnesses;   // points with a witness
  std::vector<WitnessRecord> i_failures;    // points without one
  std::vector<WitnessRecord> s_witnesses;
  std::vector<WitnessRecord> s_failures;
};

inline OscillationReport oscillation_witness(const Cocycle& c, const std::vector<BasePoint>& sample_i,
                                             const std::vector<BasePoint>& sample_s, double alpha,
                                             double beta, const std::vector<std::int64_t>& schedule) {
  if (!(alpha < beta)) throw InvalidParameter("oscillation witness needs alpha < beta");
  OscillationReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  for (const BasePoint& x : sample_i) {
    const auto logs = log_svd_schedule(c, x, schedule);
    WitnessRecord rec;
    rec.point = x;
    rec.extreme_value = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < schedule.size(); ++t) {
      const double v = logs[t].front() / static_cast<double>(schedule[t]);
      if (v < rec.extreme_value) rec.extreme_value = v;
      if (v < alpha && rec.witness_n < 0) rec.witness_n = schedule[t];
    }
    (rec.witness_n >= 0 ? rep.i_witnesses : rep.i_failures).push_back(rec);
  }
  for (const BasePoint& x : sample_s) {
    const auto logs = log_svd_schedule(c, x, schedule);
    WitnessRecord rec;
    rec.point = x;
    rec.extreme_value = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < schedule.size(); ++t) {
      const double v = logs[t].front() / static_cast<double>(schedule[t]);
      if (v > rec.extreme_value) rec.extreme_value = v;
      if (v > beta && rec.witness_n < 0) rec.witness_n = schedule[t];
    }
    (rec.witness_n >= 0 ? rep.s_witnesses : rep.s_failures).push_back(rec);
  }
  return rep;
}

}  // namespace cocyclelab
