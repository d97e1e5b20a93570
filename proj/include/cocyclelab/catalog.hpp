#pragma once

// Constructors for the desk-scale system/cocycle pairs, each with a
// machine-checkable block of expected diagnostics.  Every expectation
// carries a provenance string; the acceptance suite refuses untagged ones.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cocyclelab/regularity.hpp"

namespace cocyclelab {

struct Expectation {
  std::string key;         // dispatched by the acceptance checker
  std::string value;       // "param=...;param=..." payload
  std::string provenance;  // non-empty: paper / trivial / derived note
};

struct NamedExample {
  std::string name;
  std::string description;
  BaseSystem system;
  Cocycle cocycle;
  std::vector<Expectation> expected;
  bool completely_regular = false;  // per the expected block
  bool det_pm1 = false;
};

// ---------------------------------------------------------------------------

/// Antidiagonal 2x2 cocycle over the Veech-like subshift: A has rows
/// (0, e^phi) and (e^-phi, 0) with phi = +1 / -1 / 0 read off the current
/// symbol.  Not uniformly hyperbolic; regular-looking points share one
/// positive exponent while irregular points exist.
inline NamedExample walters_cocycle(int level) {
  if (level < 2) throw InvalidParameter("walters cocycle needs level >= 2");
  const Subshift sub(level);
  NamedExample ex;
  ex.name = "walters";
  ex.description = "antidiagonal +-1 weight cocycle over the Veech-like substitution subshift";
  ex.system = sub;
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "walters_L" + std::to_string(level);
  ex.cocycle.generator = [](const BasePoint& p) {
    const auto& s = std::get<SymbolicPoint>(p);
    const double phi = symbol_weight(s.symbol());
    Matrix m(2, 2);
    m(0, 1) = std::exp(phi);
    m(1, 0) = std::exp(-phi);
    return m;
  };
  ex.det_pm1 = true;
  ex.expected = {
      {"det_value", "det=-1", "derived: 2x2 antidiagonal determinant"},
      {"not_hyperbolic", "k=1", "paper: the cocycle is not uniformly hyperbolic"},
      {"not_complete", "", "paper: there exist points that are not LP-regular"},
      {"common_first_exponent", "min=0.0",
       "paper: regular limits share a positive constant, value not stated; reported only"},
  };
  return ex;
}

/// Diagonal cocycle diag(e^{h(y)}, e^{-h(y)}) over the torus twist
/// f(x, y) = (x + y, y).  Every point is LP-regular with exponents +-h(y),
/// which vary with the (invariant) second coordinate.
inline NamedExample twist_diagonal(std::function<double(double)> h,
                                   const std::string& label = "cos") {
  NamedExample ex;
  ex.name = "twist_diagonal";
  ex.description = "diagonal cocycle over the twist map; exponents +-h(y) depend on the invariant y";
  ex.system = TwistMap{};
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "twist_diag_" + label;
  ex.cocycle.generator = [h](const BasePoint& p) {
    const auto& t = std::get<TorusPoint>(p);
    const double v = h(t.y.value());
    return Matrix::diagonal({std::exp(v), std::exp(-v)});
  };
  ex.det_pm1 = true;
  ex.expected = {
      {"per_point_exponents_pm_h", "ys=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
       "trivial: y is invariant, so the products are diag(e^{n h(y)}, e^{-n h(y)})"},
      {"regular_every_point", "ys=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
       "paper: every point is LP-regular for a diagonal cocycle over the twist"},
      {"not_complete", "", "paper: the exponents are not constant in general"},
  };
  return ex;
}

inline NamedExample twist_diagonal_default() {
  return twist_diagonal([](double y) { return std::cos(2 * M_PI * y); }, "cos");
}

/// Derivative cocycle of the Anosov automorphism given by rows (2,1),(1,1):
/// the constant cocycle with that matrix, over the same automorphism.
inline NamedExample anosov_derivative() {
  NamedExample ex;
  ex.name = "anosov_derivative";
  ex.description = "constant (2,1;1,1) cocycle over the corresponding hyperbolic toral automorphism";
  ex.system = ToralAutomorphism(2, 1, 1, 1);
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "anosov";
  ex.cocycle.generator = [](const BasePoint&) { return Matrix(2, 2, {2, 1, 1, 1}); };
  ex.det_pm1 = true;
  ex.completely_regular = true;
  const double chi = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  ex.expected = {
      {"periodic_spectrum_origin", "period=1;chi=" + std::to_string(chi) + ";tol=1e-9",
       "derived: eigenvalues (3+-sqrt5)/2 of the symmetric generator"},
      {"dominated_at", "k=1;lo=" + std::to_string(2 * chi - 0.02) + ";hi=" + std::to_string(2 * chi + 0.02),
       "derived: gap of the n-th power is 2n log((3+sqrt5)/2)"},
      {"hyperbolic_at", "k=1", "trivial: eigenvalues straddle 1"},
      {"ss_discrete", "centers=" + std::to_string(chi) + "," + std::to_string(-chi) + ";width=0.04",
       "derived: discrete spectrum at +-log((3+sqrt5)/2)"},
  };
  return ex;
}

/// Block-diagonal normal form over the golden rotation: block i is
/// e^{c_i} times an orthogonal rotation block (planar rotations on
/// consecutive coordinate pairs, odd dimensions padded by a fixed axis).
/// With coupling > 0 the blocks instead take unit diagonals with bounded
/// strictly-upper entries, exercising the block-triangular form.
inline NamedExample block_regular(const std::vector<double>& c_list, const std::vector<int>& d_list,
                                  const std::vector<double>& rotation_speeds,
                                  double coupling = 0.0) {
  if (c_list.empty() || c_list.size() != d_list.size() || c_list.size() != rotation_speeds.size())
    throw InvalidSpectrumShape("block lists must be non-empty and of equal length");
  for (size_t i = 1; i < c_list.size(); ++i)
    if (!(c_list[i - 1] > c_list[i])) throw InvalidSpectrumShape("exponents must be strictly decreasing");
  int dim = 0;
  for (int d_i : d_list) {
    if (d_i < 1) throw InvalidSpectrumShape("block dimensions must be positive");
    dim += d_i;
  }

  NamedExample ex;
  ex.name = "block_regular";
  ex.description = "block-diagonal cocycle with orthogonal blocks over the golden rotation";
  ex.system = Rotation::golden();
  ex.cocycle.dim = dim;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "block_regular_d" + std::to_string(dim);
  ex.cocycle.generator = [c_list, d_list, rotation_speeds, coupling, dim](const BasePoint& p) {
    const double x = std::get<CirclePoint>(p).x.value();
    Matrix m(dim, dim);
    int offset = 0;
    for (size_t i = 0; i < c_list.size(); ++i) {
      const double scale = std::exp(c_list[i]);
      const int d_i = d_list[static_cast<size_t>(i)];
      if (coupling == 0.0) {
        int j = 0;
        for (; j + 1 < d_i; j += 2) {
          const double theta = 2 * M_PI * rotation_speeds[i] * x;
          m(offset + j, offset + j) = scale * std::cos(theta);
          m(offset + j, offset + j + 1) = -scale * std::sin(theta);
          m(offset + j + 1, offset + j) = scale * std::sin(theta);
          m(offset + j + 1, offset + j + 1) = scale * std::cos(theta);
        }
        if (j < d_i) m(offset + j, offset + j) = scale;
      } else {
        for (int j = 0; j < d_i; ++j) m(offset + j, offset + j) = scale;
        for (int j = 0; j + 1 < d_i; ++j)
          m(offset + j, offset + j + 1) = scale * coupling * std::cos(2 * M_PI * x);
      }
      offset += d_i;
    }
    return m;
  };
  ex.completely_regular = true;
  std::string spectrum;
  for (size_t i = 0; i < c_list.size(); ++i) {
    if (i) spectrum += ",";
    spectrum += std::to_string(c_list[i]) + ":" + std::to_string(d_list[i]);
  }
  ex.expected = {
      {"complete_regular_spectrum", "pairs=" + spectrum + ";tol=0.01",
       "paper: the normal-form cocycle is completely regular with exponents c_i"},
  };
  if (c_list.size() >= 2) {
    const double rate = c_list[0] - c_list[1];  // gap rate at the first block boundary
    ex.expected.push_back({"dominated_at",
                           "k=" + std::to_string(d_list[0]) + ";lo=" + std::to_string(rate - 0.1) +
                               ";hi=" + std::to_string(rate + 0.1),
                           "derived: gap grows like the spacing c_1 - c_2"});
  }
  return ex;
}

inline NamedExample block_regular_default() { return block_regular({1.0, -1.0}, {1, 1}, {1.0, 2.0}); }

/// SL(2,R) rotation-times-diagonal family over the golden rotation.  The
/// catalog stores only structural expectations; the trichotomy class is a
/// diagnostic output, not an asserted value.
inline NamedExample herman_sl2(double lambda) {
  if (lambda < 1.0) throw InvalidParameter("herman family needs lambda >= 1");
  NamedExample ex;
  ex.name = "herman_sl2";
  ex.description = "R(2 pi x) diag(lambda, 1/lambda) over the golden rotation";
  ex.system = Rotation::golden();
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "herman_l" + std::to_string(lambda);
  ex.cocycle.generator = [lambda](const BasePoint& p) {
    const double theta = 2 * M_PI * std::get<CirclePoint>(p).x.value();
    const Matrix rot(2, 2, {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
    return rot * Matrix::diagonal({lambda, 1.0 / lambda});
  };
  ex.det_pm1 = true;
  ex.expected = {
      {"det_value", "det=1", "trivial: product of determinant-1 factors"},
      {"sl2_symmetric_spectrum", "tol=1e-9", "trivial: det 1 forces log sigma_1 + log sigma_2 = 0"},
  };
  return ex;
}

/// Generator switching between diag(e, 1/e) on [0, 1/2) and diag(e^3, e^-3)
/// on [1/2, 1), over the rotation by 1/2: every orbit has period 2.  With
/// `distinct` the second half uses diag(e, 1/e) on [3/4, 1), so different
/// orbits get different exact spectra.
inline NamedExample periodic_pair_example(bool distinct = false) {
  NamedExample ex;
  ex.name = distinct ? "periodic_pair_distinct" : "periodic_pair";
  ex.description = "piecewise diagonal cocycle over the rotation by 1/2 (period-2 orbits)";
  ex.system = Rotation(Rational(1, 2));
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = ex.name;
  ex.cocycle.generator = [distinct](const BasePoint& p) {
    const double x = std::get<CirclePoint>(p).x.value();
    double a = 1.0;
    if (x < 0.5)
      a = 1.0;
    else if (!distinct || x < 0.75)
      a = 3.0;
    else
      a = 1.0;
    return Matrix::diagonal({std::exp(a), std::exp(-a)});
  };
  ex.det_pm1 = true;
  ex.completely_regular = !distinct;
  if (distinct) {
    ex.expected = {
        {"periodic_spectra_differ", "x1=0/1;x2=1/4;period=2;min_distance=0.1",
         "derived: orbit products diag(e^4, e^-4) vs diag(e^2, e^-2)"},
    };
  } else {
    ex.expected = {
        {"periodic_spectra_equal", "x1=0/1;x2=1/4;period=2;tol=1e-9",
         "derived: both orbit products are diag(e^4, e^-4)"},
    };
  }
  return ex;
}

/// Negative controls: the identity cocycle and a constant isometry.
inline NamedExample identity_example() {
  NamedExample ex;
  ex.name = "identity";
  ex.description = "identity cocycle over the golden rotation";
  ex.system = Rotation::golden();
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "identity";
  ex.cocycle.generator = [](const BasePoint&) { return Matrix::identity(2); };
  ex.det_pm1 = true;
  ex.completely_regular = true;
  ex.expected = {
      {"not_dominated_at", "k=1", "trivial: all singular values equal 1"},
      {"ss_single_point", "center=0;width=0.04", "trivial: only lambda = 0 fails hyperbolicity"},
  };
  return ex;
}

inline NamedExample isometry_example() {
  NamedExample ex;
  ex.name = "isometry";
  ex.description = "constant rotation-matrix cocycle over the golden rotation";
  ex.system = Rotation::golden();
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "isometry";
  const double theta = 2 * M_PI * 0.37;
  ex.cocycle.generator = [theta](const BasePoint&) {
    return Matrix(2, 2, {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
  };
  ex.det_pm1 = true;
  ex.completely_regular = true;
  ex.expected = {
      {"not_dominated_at", "k=1", "trivial: isometries have unit singular values"},
      {"gap_identically_zero", "tol=1e-12", "trivial: sigma_1 = sigma_2 = 1 at every n"},
  };
  return ex;
}

inline NamedExample const_diag_example() {
  NamedExample ex;
  ex.name = "const_diag";
  ex.description = "constant diag(e, 1/e) cocycle over the golden rotation";
  ex.system = Rotation::golden();
  ex.cocycle.dim = 2;
  ex.cocycle.system = ex.system;
  ex.cocycle.label = "const_diag";
  ex.cocycle.generator = [](const BasePoint&) {
    return Matrix::diagonal({std::exp(1.0), std::exp(-1.0)});
  };
  ex.det_pm1 = true;
  ex.completely_regular = true;
  ex.expected = {
      {"dominated_at", "k=1;lo=1.99;hi=2.01", "trivial: the gap is exactly 2 at every n"},
      {"hyperbolic_at", "k=1", "trivial: rates +-1"},
      {"ss_discrete", "centers=1,-1;width=0.04", "derived: exponents are exactly +-1"},
  };
  return ex;
}

// ---------------------------------------------------------------------------
// Registry.

struct CatalogEntry {
  std::string name;
  std::string description;
  std::function<NamedExample()> make;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"walters", "Walters cocycle over the Veech-like subshift (level 6)",
       [] { return walters_cocycle(6); }},
      {"twist_diagonal", "diagonal cocycle over the twist map with h(y) = cos 2 pi y",
       [] { return twist_diagonal_default(); }},
      {"anosov_derivative", "constant hyperbolic cocycle over the (2,1;1,1) automorphism",
       [] { return anosov_derivative(); }},
      {"block_regular", "two-block normal form with exponents +1, -1 over the golden rotation",
       [] { return block_regular_default(); }},
      {"herman_sl2", "R(2 pi x) diag(2, 1/2) over the golden rotation",
       [] { return herman_sl2(2.0); }},
      {"periodic_pair", "piecewise diagonal over rotation by 1/2; all orbits share one spectrum",
       [] { return periodic_pair_example(false); }},
      {"periodic_pair_distinct", "piecewise diagonal with two different periodic spectra",
       [] { return periodic_pair_example(true); }},
      {"identity", "identity cocycle (negative control)", [] { return identity_example(); }},
      {"isometry", "constant rotation matrix (negative control)", [] { return isometry_example(); }},
      {"const_diag", "constant diag(e, 1/e) (positive control)", [] { return const_diag_example(); }},
  };
  return entries;
}

inline NamedExample make_example(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e.make();
  throw InvalidParameter("unknown catalog example: " + name);
}

// ---------------------------------------------------------------------------
// Walters offset construction.
//
// The alternating prefix sums of e_K locate, by exhaustive scan, the offsets
// the diagnostics need: near-cancellation offsets (norm growth dips toward
// zero), sustained-drift offsets, and the junction offset whose
// forward/backward discrepancy stays largest across doubling checkpoints.

struct WaltersOffsets {
  std::vector<std::int64_t> cancel_offsets;  // growth dips below the dip threshold
  std::vector<std::int64_t> drift_offsets;   // top sustained growth
  std::int64_t irregular_offset = -1;        // best persistent fwd/bwd discrepancy
  double irregular_disc = 0.0;               // min over the last two checkpoints
  double top_sustained_rate = 0.0;
};

inline WaltersOffsets walters_scan_offsets(const Subshift& sub, int count,
                                           std::int64_t probe_horizon = 32,
                                           double dip_threshold = 0.05) {
  const Word& w = *sub.word;
  const auto t = alternating_prefix(w);
  const auto len = static_cast<std::int64_t>(w.size());
  const std::int64_t lo = len / 4, hi = 3 * len / 4;
  auto rate = [&](std::int64_t o, std::int64_t n) {
    return std::abs(static_cast<double>(t[static_cast<size_t>(o + n)] - t[static_cast<size_t>(o)])) /
           static_cast<double>(n);
  };
  auto brate = [&](std::int64_t o, std::int64_t n) {
    return std::abs(static_cast<double>(t[static_cast<size_t>(o)] - t[static_cast<size_t>(o - n)])) /
           static_cast<double>(n);
  };

  WaltersOffsets out;
  std::vector<std::int64_t> sched;
  for (std::int64_t n = 16; n <= std::min<std::int64_t>(16384, len / 8); n *= 2) sched.push_back(n);

  // Strided scan for cancellation and drift offsets.
  std::vector<std::pair<double, std::int64_t>> drift;
  for (std::int64_t o = lo; o < hi && static_cast<int>(out.cancel_offsets.size()) < count; o += 131) {
    double m = std::numeric_limits<double>::infinity();
    for (auto n : sched) m = std::min(m, rate(o, n));
    if (m <= dip_threshold) out.cancel_offsets.push_back(o);
  }
  for (std::int64_t o = lo; o < hi; o += 131) {
    double sustained = 0.0;
    for (size_t s = 0; s + 1 < sched.size(); ++s)
      sustained = std::max(sustained, std::min(rate(o, sched[s]), rate(o, sched[s + 1])));
    drift.emplace_back(sustained, o);
  }
  std::sort(drift.rbegin(), drift.rend());
  for (int i = 0; i < count && i < static_cast<int>(drift.size()); ++i)
    out.drift_offsets.push_back(drift[static_cast<size_t>(i)].second);
  if (!drift.empty()) out.top_sustained_rate = drift.front().first;

  // Full scan for the irregularity witness at the small-scale probe horizon.
  const std::int64_t n1 = std::max<std::int64_t>(probe_horizon / 4, 1);
  const std::int64_t n2 = std::max<std::int64_t>(probe_horizon / 2, 1);
  const std::int64_t n3 = probe_horizon;
  double best = 0.0;
  for (std::int64_t o = lo; o < hi; ++o) {
    const double d1 = std::abs(rate(o, n1) - brate(o, n1));
    if (d1 < dip_threshold) continue;  // needs evidence at every checkpoint
    const double d2 = std::abs(rate(o, n2) - brate(o, n2));
    const double d3 = std::abs(rate(o, n3) - brate(o, n3));
    const double m = std::min(d2, d3);
    if (m > best) {
      best = m;
      out.irregular_offset = o;
    }
  }
  out.irregular_disc = best;
  return out;
}

}  // namespace cocyclelab
