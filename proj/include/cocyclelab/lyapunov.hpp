#pragma once

// Finite-time Lyapunov spectra, exact periodic-orbit spectra, Birkhoff
// averages, and the semi-uniform subadditive sup-envelope.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "cocyclelab/cocycle.hpp"

namespace cocyclelab {

enum class Direction { forward, backward };

/// The d finite-time exponents (1/n) log sigma_k(A(x, +-n)), descending,
/// in nats per iterate.
struct FiniteTimeSpectrum {
  std::vector<double> values;
  std::int64_t horizon = 0;
  Direction direction = Direction::forward;
  BasePoint point;
};

inline FiniteTimeSpectrum finite_time_spectrum(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                               Direction dir = Direction::forward) {
  if (n < 1) throw InvalidParameter("finite_time_spectrum needs n >= 1");
  FiniteTimeSpectrum out;
  out.values = stabilized_log_svd(c, x, n, dir == Direction::forward ? +1 : -1);
  for (double& v : out.values) v /= static_cast<double>(n);
  out.horizon = n;
  out.direction = dir;
  out.point = x;
  return out;
}

/// Exact Lyapunov spectrum of a periodic orbit: distinct exponents with
/// multiplicities, strictly decreasing.
struct ExactSpectrum {
  std::vector<std::pair<double, int>> pairs;  // (chi_i, d_i)
  BasePoint source;
  std::int64_t period = 0;

  int total_dim() const {
    int d = 0;
    for (const auto& [chi, mult] : pairs) d += mult;
    return d;
  }

  std::vector<double> expanded() const {
    std::vector<double> out;
    for (const auto& [chi, mult] : pairs)
      for (int i = 0; i < mult; ++i) out.push_back(chi);
    return out;
  }
};

/// chi_i = (1/k) log|lambda_i| over the eigenvalues of A(p, k), grouped by
/// equal modulus (relative tolerance 1e-8) into multiplicities.
inline ExactSpectrum periodic_spectrum(const Cocycle& c, const BasePoint& p, std::int64_t period) {
  if (period < 1) throw InvalidParameter("period must be >= 1");
  if (!points_equal(step(c.system, p, period), p))
    throw NotPeriodic("point is not fixed by f^period");
  const Matrix m = evaluate(c, p, period);
  const std::vector<double> moduli = eigenvalue_moduli(m);  // descending
  ExactSpectrum out;
  out.source = p;
  out.period = period;
  const double scale = moduli.front();
  size_t i = 0;
  while (i < moduli.size()) {
    size_t j = i;
    while (j + 1 < moduli.size() && std::abs(moduli[j + 1] - moduli[i]) <= 1e-8 * scale) ++j;
    double log_mean = 0.0;
    for (size_t t = i; t <= j; ++t) {
      if (moduli[t] <= 0) throw SingularGenerator("periodic product has a zero eigenvalue");
      log_mean += std::log(moduli[t]);
    }
    log_mean /= static_cast<double>(j - i + 1);
    out.pairs.emplace_back(log_mean / static_cast<double>(period), static_cast<int>(j - i + 1));
    i = j + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum comparison.
//
// Distance between two repeated-exponent lists is the L1 distance of the
// sorted lists; between two grouped spectra it additionally requires the
// multiplicity patterns to match (structured inequality otherwise, reported
// as +infinity).

inline double spectrum_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

inline double spectrum_distance(const ExactSpectrum& a, const ExactSpectrum& b) {
  if (a.pairs.size() != b.pairs.size()) return std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.pairs.size(); ++i)
    if (a.pairs[i].second != b.pairs[i].second) return std::numeric_limits<double>::infinity();
  return spectrum_distance(a.expanded(), b.expanded());
}

// ---------------------------------------------------------------------------
// Birkhoff averages.

inline double birkhoff_average(const BaseSystem& system, const std::function<double(const BasePoint&)>& phi,
                               const BasePoint& x, std::int64_t n, Direction dir = Direction::forward) {
  if (n < 1) throw InvalidParameter("birkhoff_average needs n >= 1");
  double acc = 0.0;
  BasePoint p = x;
  const std::int64_t sgn = dir == Direction::forward ? 1 : -1;
  for (std::int64_t j = 0; j < n; ++j) {
    acc += phi(p);
    if (j + 1 < n) p = step(system, p, sgn);
  }
  return acc / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Semi-uniform subadditive envelope.

/// sup over the sample of (1/n) log|A(x,n)| and the dual inf of the
/// co-norm sequence, along an increasing schedule.
struct SupEnvelope {
  std::vector<std::int64_t> schedule;
  std::vector<double> sup_values;
  std::vector<double> inf_values;
};

inline SupEnvelope sup_envelope(const Cocycle& c, const std::vector<BasePoint>& sample,
                                const std::vector<std::int64_t>& schedule) {
  if (sample.empty()) throw EmptySample("sup_envelope needs a non-empty sample");
  SupEnvelope out;
  out.schedule = schedule;
  out.sup_values.assign(schedule.size(), -std::numeric_limits<double>::infinity());
  out.inf_values.assign(schedule.size(), std::numeric_limits<double>::infinity());
  for (const BasePoint& x : sample) {
    const auto logs = log_svd_schedule(c, x, schedule);
    for (size_t t = 0; t < schedule.size(); ++t) {
      const double n = static_cast<double>(schedule[t]);
      out.sup_values[t] = std::max(out.sup_values[t], logs[t].front() / n);
      out.inf_values[t] = std::min(out.inf_values[t], logs[t].back() / n);
    }
  }
  return out;
}

/// Default geometric schedule 2^4, 2^5, ..., capped.
inline std::vector<std::int64_t> geometric_schedule(std::int64_t n_max, std::int64_t n_min = 16) {
  if (n_min < 1 || n_max < n_min) throw InvalidParameter("bad schedule bounds");
  std::vector<std::int64_t> out;
  for (std::int64_t n = n_min; n <= n_max; n *= 2) out.push_back(n);
  return out;
}

}  // namespace cocyclelab
