#pragma once

// Machine checks for the catalog's `expected` blocks.  Each expectation key
// maps to a concrete diagnostic run; unknown keys and missing provenance are
// failures, so every stored expectation is exercised.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cocyclelab/catalog.hpp"

namespace cocyclelab {

namespace detail {

inline std::map<std::string, std::string> parse_payload(const std::string& value) {
  std::map<std::string, std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw InvalidParameter("expected num/den rational: " + s);
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace detail

/// A default sample adapted to the example's base system.
inline std::vector<BasePoint> default_sample(const NamedExample& ex, int count, std::uint64_t seed) {
  if (const auto* sub = std::get_if<Subshift>(&ex.system)) {
    auto pts = sample_symbolic_points(*sub, count, seed);
    for (auto& j : junction_points(*sub)) {
      const auto& sp = std::get<SymbolicPoint>(j);
      const auto len = static_cast<std::int64_t>(sub->word->size());
      if (sp.origin >= len / 8 && sp.origin < 7 * len / 8) pts.push_back(j);
    }
    return pts;
  }
  if (const auto* rot = std::get_if<Rotation>(&ex.system)) {
    std::vector<BasePoint> pts;
    for (int j = 0; j < count; ++j)
      pts.push_back(circle_point_on(*rot, static_cast<double>(j) / count));
    return pts;
  }
  if (std::get_if<TwistMap>(&ex.system)) {
    std::vector<BasePoint> pts;
    for (int j = 0; j < std::min(count, 10); ++j) pts.push_back(torus_point(1, 3, j, 10));
    return pts;
  }
  // Toral automorphism: seeded rational points with a fixed prime denominator.
  detail::SplitMix64 rng(seed);
  std::vector<BasePoint> pts;
  for (int j = 0; j < count; ++j)
    pts.push_back(torus_point(static_cast<std::int64_t>(rng.next() % 97), 97,
                              static_cast<std::int64_t>(rng.next() % 97), 97));
  return pts;
}

/// Runs one expectation; returns std::nullopt on success, a message on failure.
inline std::optional<std::string> check_expectation(const NamedExample& ex, const Expectation& e,
                                                    std::uint64_t seed = 7) {
  if (e.provenance.empty()) return "expectation '" + e.key + "' is missing a provenance tag";
  const auto payload = detail::parse_payload(e.value);
  auto get = [&](const std::string& key, double fallback) {
    const auto it = payload.find(key);
    return it == payload.end() ? fallback : std::stod(it->second);
  };
  const auto schedule = geometric_schedule(1 << 12);

  try {
    if (e.key == "det_value") {
      const double want = get("det", 1.0);
      for (const auto& x : default_sample(ex, 8, seed)) {
        const double det = determinant(ex.cocycle.generator_at(x));
        if (std::abs(det - want) > 1e-9) return e.key + ": det " + std::to_string(det);
      }
      return std::nullopt;
    }
    if (e.key == "not_hyperbolic") {
      const int k = static_cast<int>(get("k", 1));
      if (hyperbolicity_test(ex.cocycle, default_sample(ex, 24, seed), k, schedule))
        return e.key + ": hyperbolicity test unexpectedly passed";
      return std::nullopt;
    }
    if (e.key == "not_complete") {
      const auto rep = probe_complete_regularity(ex.cocycle, default_sample(ex, 16, seed), 1 << 10);
      if (rep.verdict != SampleVerdict::not_consistent)
        return e.key + ": sample looked completely regular";
      return std::nullopt;
    }
    if (e.key == "common_first_exponent") {
      const double floor = get("min", 0.0);
      std::vector<double> tops;
      for (const auto& x : default_sample(ex, 16, seed))
        tops.push_back(finite_time_spectrum(ex.cocycle, x, 1 << 10).values.front());
      std::sort(tops.begin(), tops.end());
      const double median = tops[tops.size() / 2];
      if (!(median > floor)) return e.key + ": median exponent " + std::to_string(median);
      return std::nullopt;
    }
    if (e.key == "per_point_exponents_pm_h") {
      for (double y : detail::parse_doubles(payload.at("ys"))) {
        const BasePoint p = torus_point(1, 3, static_cast<std::int64_t>(std::llround(y * 10)), 10);
        const double h = std::log(svd(ex.cocycle.generator_at(p)).singular_values.front());
        const auto spec = finite_time_spectrum(ex.cocycle, p, 256);
        if (std::abs(spec.values.front() - h) > 1e-9 || std::abs(spec.values.back() + h) > 1e-9)
          return e.key + ": exponents differ from +-h at y=" + std::to_string(y);
      }
      return std::nullopt;
    }
    if (e.key == "regular_every_point") {
      for (double y : detail::parse_doubles(payload.at("ys"))) {
        const BasePoint p = torus_point(1, 3, static_cast<std::int64_t>(std::llround(y * 10)), 10);
        const auto rep = probe_point(ex.cocycle, p, 1 << 10);
        if (rep.verdict != PointVerdict::regular_consistent)
          return e.key + ": verdict " + to_string(rep.verdict) + " at y=" + std::to_string(y);
      }
      return std::nullopt;
    }
    if (e.key == "periodic_spectrum_origin") {
      const auto period = static_cast<std::int64_t>(get("period", 1));
      const double chi = get("chi", 0.0), tol = get("tol", 1e-9);
      const auto spec = periodic_spectrum(ex.cocycle, torus_point(0, 1, 0, 1), period);
      if (spec.pairs.size() != 2) return e.key + ": expected two simple exponents";
      if (std::abs(spec.pairs.front().first - chi) > tol || std::abs(spec.pairs.back().first + chi) > tol)
        return e.key + ": spectrum off";
      return std::nullopt;
    }
    if (e.key == "dominated_at" || e.key == "not_dominated_at") {
      const int k = static_cast<int>(get("k", 1));
      const auto v = detect_domination(ex.cocycle, default_sample(ex, 16, seed), k, schedule);
      if (e.key == "not_dominated_at") {
        if (v.dominated) return e.key + ": unexpectedly dominated";
        return std::nullopt;
      }
      if (!v.dominated) return e.key + ": not dominated";
      const double lo = get("lo", -1e9), hi = get("hi", 1e9);
      if (v.fitted_rate < lo || v.fitted_rate > hi)
        return e.key + ": rate " + std::to_string(v.fitted_rate) + " outside [" + std::to_string(lo) +
               ", " + std::to_string(hi) + "]";
      return std::nullopt;
    }
    if (e.key == "hyperbolic_at") {
      const int k = static_cast<int>(get("k", 1));
      if (!hyperbolicity_test(ex.cocycle, default_sample(ex, 16, seed), k, schedule))
        return e.key + ": hyperbolicity test failed";
      return std::nullopt;
    }
    if (e.key == "ss_discrete" || e.key == "ss_single_point") {
      const auto sample = default_sample(ex, 12, seed);
      const auto grid = default_lambda_grid(ex.cocycle, sample);
      const auto est = estimate_sacker_sell(ex.cocycle, sample, grid, schedule);
      const double width = get("width", 0.04);
      std::vector<double> centers = e.key == "ss_single_point"
                                        ? std::vector<double>{get("center", 0.0)}
                                        : detail::parse_doubles(payload.at("centers"));
      if (est.intervals.size() != centers.size())
        return e.key + ": " + std::to_string(est.intervals.size()) + " intervals, expected " +
               std::to_string(centers.size());
      std::sort(centers.rbegin(), centers.rend());
      for (size_t i = 0; i < centers.size(); ++i) {
        const auto& [alpha, beta] = est.intervals[i];
        if (beta - alpha > width + 1e-12) return e.key + ": interval too wide";
        if (centers[i] < alpha - 0.03 || centers[i] > beta + 0.03)
          return e.key + ": center " + std::to_string(centers[i]) + " outside interval";
      }
      return std::nullopt;
    }
    if (e.key == "gap_identically_zero") {
      const double tol = get("tol", 1e-12);
      const auto sample = default_sample(ex, 4, seed);
      for (const auto& x : sample) {
        const auto g = gap_series(ex.cocycle, x, 1, schedule);
        for (double v : g.gaps)
          if (v > tol) return e.key + ": gap " + std::to_string(v);
      }
      return std::nullopt;
    }
    if (e.key == "sl2_symmetric_spectrum") {
      const double tol = get("tol", 1e-9);
      for (const auto& x : default_sample(ex, 4, seed)) {
        const auto logs = log_svd_schedule(ex.cocycle, x, schedule);
        for (const auto& l : logs)
          if (std::abs(l.front() + l.back()) > tol) return e.key + ": sum of logs nonzero";
      }
      return std::nullopt;
    }
    if (e.key == "periodic_spectra_differ" || e.key == "periodic_spectra_equal") {
      const auto period = static_cast<std::int64_t>(get("period", 2));
      const BasePoint p1 = CirclePoint{detail::parse_rational(payload.at("x1"))};
      const BasePoint p2 = CirclePoint{detail::parse_rational(payload.at("x2"))};
      const double dist = spectrum_distance(periodic_spectrum(ex.cocycle, p1, period),
                                            periodic_spectrum(ex.cocycle, p2, period));
      if (e.key == "periodic_spectra_differ" && !(dist > get("min_distance", 0.0)))
        return e.key + ": distance " + std::to_string(dist);
      if (e.key == "periodic_spectra_equal" && !(dist <= get("tol", 1e-9)))
        return e.key + ": distance " + std::to_string(dist);
      return std::nullopt;
    }
    if (e.key == "complete_regular_spectrum") {
      const double tol = get("tol", 0.01);
      const auto rep = probe_complete_regularity(ex.cocycle, default_sample(ex, 8, seed), 1 << 12);
      if (rep.verdict != SampleVerdict::consistent_with_complete_regularity)
        return e.key + ": verdict not consistent";
      std::vector<double> want;
      std::stringstream ss(payload.at("pairs"));
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        const double chi = std::stod(item.substr(0, colon));
        const int mult = std::stoi(item.substr(colon + 1));
        for (int i = 0; i < mult; ++i) want.push_back(chi);
      }
      const auto& got = rep.per_point.front().forward_spectrum.values;
      if (got.size() != want.size()) return e.key + ": dimension mismatch";
      for (size_t i = 0; i < want.size(); ++i)
        if (std::abs(got[i] - want[i]) > tol) return e.key + ": exponent off";
      return std::nullopt;
    }
  } catch (const Error& err) {
    return e.key + ": " + err.what();
  }
  return "unknown expectation key '" + e.key + "'";
}

/// All failures for one example (empty means the expected block is green).
inline std::vector<std::string> check_expectations(const NamedExample& ex, std::uint64_t seed = 7) {
  std::vector<std::string> failures;
  for (const auto& e : ex.expected) {
    if (const auto fail = check_expectation(ex, e, seed)) failures.push_back(ex.name + ": " + *fail);
  }
  return failures;
}

}  // namespace cocyclelab
