#pragma once

// Base dynamics: the homeomorphisms cocycles are driven by.  Circle and
// torus coordinates are exact rationals so that iteration is integer
// arithmetic and periodic-orbit tests are exact; symbolic points carry a
// finite shared window into a substitution word.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "cocyclelab/errors.hpp"
#include "cocyclelab/word.hpp"

namespace cocyclelab {

// ---------------------------------------------------------------------------
// Exact rational coordinate in [0, 1).

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce_mod1(); }

  /// Nearest rational with the given denominator.
  static Rational from_double(double x, std::int64_t d = std::int64_t{1} << 40) {
    x -= std::floor(x);
    const auto n = static_cast<std::int64_t>(std::llround(x * static_cast<double>(d)));
    return Rational(n, d);
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  void reduce_mod1() {
    if (den <= 0) throw InvalidParameter("rational denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

namespace detail {

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a / g) * b;
  if (l > INT64_MAX) throw InvalidParameter("coordinate denominator overflow");
  return static_cast<std::int64_t>(l);
}

/// (a + coeff * b) mod 1 over a common denominator.
inline Rational rational_add_multiple(const Rational& a, const Rational& b, std::int64_t coeff) {
  const std::int64_t den = checked_lcm(a.den, b.den);
  const __int128 an = static_cast<__int128>(a.num) * (den / a.den);
  __int128 bn = static_cast<__int128>(b.num) * (den / b.den) % den;
  bn = (bn * (coeff % den)) % den;
  __int128 r = (an + bn) % den;
  if (r < 0) r += den;
  return Rational(static_cast<std::int64_t>(r), den);
}

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Points.

struct CirclePoint {
  Rational x;
};

struct TorusPoint {
  Rational x;
  Rational y;
};

/// A window into the level-`level` substitution word, with the current
/// position marked.  The window is shared between all points sampled from it.
struct SymbolicPoint {
  std::shared_ptr<const Word> window;
  std::int64_t origin = 0;
  int level = 0;

  char symbol() const {
    if (!window || origin < 0 || origin >= static_cast<std::int64_t>(window->size()))
      throw WindowExhausted("symbolic point outside its window");
    return (*window)[static_cast<size_t>(origin)];
  }
};

using BasePoint = std::variant<CirclePoint, TorusPoint, SymbolicPoint>;

inline bool points_equal(const BasePoint& a, const BasePoint& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ca = std::get_if<CirclePoint>(&a)) return ca->x == std::get<CirclePoint>(b).x;
  if (const auto* ta = std::get_if<TorusPoint>(&a)) {
    const auto& tb = std::get<TorusPoint>(b);
    return ta->x == tb.x && ta->y == tb.y;
  }
  const auto& sa = std::get<SymbolicPoint>(a);
  const auto& sb = std::get<SymbolicPoint>(b);
  return sa.window == sb.window && sa.origin == sb.origin;
}

/// Stable identity string, usable as a memoization key.
inline std::string point_key(const BasePoint& p) {
  if (const auto* c = std::get_if<CirclePoint>(&p))
    return "c:" + std::to_string(c->x.num) + "/" + std::to_string(c->x.den);
  if (const auto* t = std::get_if<TorusPoint>(&p))
    return "t:" + std::to_string(t->x.num) + "/" + std::to_string(t->x.den) + "," +
           std::to_string(t->y.num) + "/" + std::to_string(t->y.den);
  const auto& s = std::get<SymbolicPoint>(p);
  return "s:" + std::to_string(reinterpret_cast<std::uintptr_t>(s.window.get())) + "@" +
         std::to_string(s.origin);
}

// ---------------------------------------------------------------------------
// Systems.

/// Circle rotation x -> x + alpha.  Irrational angles are represented by
/// high-precision rational convergents so iteration never drifts.
struct Rotation {
  Rational alpha;

  Rotation() = default;  // rotation by 0
  explicit Rotation(Rational a) : alpha(a) {}

  /// Continued-fraction convergent of (sqrt(5)-1)/2 with denominator >= 1e12:
  /// consecutive Fibonacci numbers F(59)/F(60).
  static Rotation golden() { return Rotation(Rational(956722026041LL, 1548008755920LL)); }
};

/// Hyperbolic (or at least unimodular) integer automorphism of the 2-torus.
struct ToralAutomorphism {
  std::int64_t a, b, c, d;

  ToralAutomorphism(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
      : a(a_), b(b_), c(c_), d(d_) {
    const std::int64_t det = a * d - b * c;
    if (det != 1 && det != -1)
      throw InvalidParameter("toral automorphism must have determinant +-1");
  }
};

/// The parabolic twist f(x, y) = (x + y, y).
struct TwistMap {};

/// Veech-like substitution subshift truncated at a maximal level.
struct Subshift {
  int max_level;
  std::shared_ptr<const Word> word;  // e_{max_level}

  explicit Subshift(int level, std::int64_t length_cap = kDefaultWordCap)
      : max_level(level), word(std::make_shared<const Word>(build_word(level, length_cap))) {
    if (level < 2) throw InvalidParameter("subshift level must be >= 2");
  }
};

using BaseSystem = std::variant<Rotation, ToralAutomorphism, TwistMap, Subshift>;

// ---------------------------------------------------------------------------
// Iteration.

inline BasePoint step(const BaseSystem& system, const BasePoint& point, std::int64_t n) {
  if (const auto* rot = std::get_if<Rotation>(&system)) {
    const auto* c = std::get_if<CirclePoint>(&point);
    if (!c) throw DimensionMismatch("rotation acts on circle points");
    return CirclePoint{detail::rational_add_multiple(c->x, rot->alpha, n)};
  }
  if (const auto* aut = std::get_if<ToralAutomorphism>(&system)) {
    const auto* t = std::get_if<TorusPoint>(&point);
    if (!t) throw DimensionMismatch("toral automorphism acts on torus points");
    // Integer 2x2 power applied over a common denominator, mod 1.
    std::int64_t m[2][2] = {{1, 0}, {0, 1}};
    std::int64_t g[2][2] = {{aut->a, aut->b}, {aut->c, aut->d}};
    if (n < 0) {
      // Inverse of an integer matrix with det +-1 is integer.
      const std::int64_t det = aut->a * aut->d - aut->b * aut->c;
      const std::int64_t inv[2][2] = {{det * aut->d, -det * aut->b}, {-det * aut->c, det * aut->a}};
      g[0][0] = inv[0][0]; g[0][1] = inv[0][1]; g[1][0] = inv[1][0]; g[1][1] = inv[1][1];
      n = -n;
    }
    const std::int64_t den = detail::checked_lcm(t->x.den, t->y.den);
    __int128 vx = static_cast<__int128>(t->x.num) * (den / t->x.den);
    __int128 vy = static_cast<__int128>(t->y.num) * (den / t->y.den);
    // Binary powering of g mod den on the numerator vector.
    auto mat_mul = [&](std::int64_t r[2][2], const std::int64_t s[2][2]) {
      const __int128 r00 = (static_cast<__int128>(r[0][0]) * s[0][0] + static_cast<__int128>(r[0][1]) * s[1][0]) % den;
      const __int128 r01 = (static_cast<__int128>(r[0][0]) * s[0][1] + static_cast<__int128>(r[0][1]) * s[1][1]) % den;
      const __int128 r10 = (static_cast<__int128>(r[1][0]) * s[0][0] + static_cast<__int128>(r[1][1]) * s[1][0]) % den;
      const __int128 r11 = (static_cast<__int128>(r[1][0]) * s[0][1] + static_cast<__int128>(r[1][1]) * s[1][1]) % den;
      r[0][0] = static_cast<std::int64_t>(r00); r[0][1] = static_cast<std::int64_t>(r01);
      r[1][0] = static_cast<std::int64_t>(r10); r[1][1] = static_cast<std::int64_t>(r11);
    };
    std::int64_t base[2][2] = {{g[0][0] % den, g[0][1] % den}, {g[1][0] % den, g[1][1] % den}};
    std::uint64_t e = static_cast<std::uint64_t>(n);
    while (e > 0) {
      if (e & 1) mat_mul(m, base);
      std::int64_t tmp[2][2] = {{base[0][0], base[0][1]}, {base[1][0], base[1][1]}};
      mat_mul(base, tmp);
      e >>= 1;
    }
    __int128 nx = (static_cast<__int128>(m[0][0]) * vx + static_cast<__int128>(m[0][1]) * vy) % den;
    __int128 ny = (static_cast<__int128>(m[1][0]) * vx + static_cast<__int128>(m[1][1]) * vy) % den;
    if (nx < 0) nx += den;
    if (ny < 0) ny += den;
    return TorusPoint{Rational(static_cast<std::int64_t>(nx), den), Rational(static_cast<std::int64_t>(ny), den)};
  }
  if (std::get_if<TwistMap>(&system)) {
    const auto* t = std::get_if<TorusPoint>(&point);
    if (!t) throw DimensionMismatch("twist map acts on torus points");
    return TorusPoint{detail::rational_add_multiple(t->x, t->y, n), t->y};
  }
  const auto* sub = std::get_if<Subshift>(&system);
  const auto* s = std::get_if<SymbolicPoint>(&point);
  if (!sub || !s) throw DimensionMismatch("subshift acts on symbolic points");
  const std::int64_t target = s->origin + n;
  if (target < 0 || target >= static_cast<std::int64_t>(s->window->size()))
    throw WindowExhausted("shift leaves the sampled window; re-sample at a higher level");
  SymbolicPoint out = *s;
  out.origin = target;
  return out;
}

// ---------------------------------------------------------------------------
// Constructors and sampling.

inline BasePoint circle_point(std::int64_t num, std::int64_t den) { return CirclePoint{Rational(num, den)}; }

inline BasePoint circle_point_on(const Rotation& rot, double x) {
  return CirclePoint{Rational::from_double(x, rot.alpha.den)};
}

inline BasePoint torus_point(std::int64_t xn, std::int64_t xd, std::int64_t yn, std::int64_t yd) {
  return TorusPoint{Rational(xn, xd), Rational(yn, yd)};
}

inline BasePoint symbolic_point(const Subshift& sub, std::int64_t origin) {
  if (origin < 0 || origin >= static_cast<std::int64_t>(sub.word->size()))
    throw InvalidParameter("symbolic origin outside the level window");
  return SymbolicPoint{sub.word, origin, sub.max_level};
}

/// Deterministic pseudo-random points of the level-K subshift.  Origins are
/// drawn from the middle half of e_K, so each point supports roughly
/// |e_K|/4 iterations in both directions.
inline std::vector<BasePoint> sample_symbolic_points(const Subshift& sub, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidParameter("sample count must be >= 0");
  const auto len = static_cast<std::int64_t>(sub.word->size());
  const std::int64_t margin = len / 4;
  const std::int64_t span = len - 2 * margin;
  detail::SplitMix64 rng(seed);
  std::vector<BasePoint> out;
  std::vector<std::int64_t> used;
  out.reserve(static_cast<size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const std::int64_t origin = margin + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(span));
    if (std::find(used.begin(), used.end(), origin) != used.end()) continue;
    used.push_back(origin);
    out.push_back(SymbolicPoint{sub.word, origin, sub.max_level});
  }
  return out;
}

/// Points of e_K placed at the block-type switches of the recursion (middle
/// block, bar run, final bar, for every level represented in the prefix).
inline std::vector<BasePoint> junction_points(const Subshift& sub) {
  std::vector<BasePoint> out;
  for (std::int64_t off : junction_offsets(sub.max_level))
    out.push_back(SymbolicPoint{sub.word, off, sub.max_level});
  return out;
}

/// All points with f^period(x) = x, where enumeration is possible.  Systems
/// for which every point is periodic (rational rotations whose denominator
/// divides the period) return canonical representatives j/grid instead.
inline std::vector<BasePoint> periodic_points(const BaseSystem& system, std::int64_t period,
                                              std::int64_t grid = 8) {
  if (period < 1) throw InvalidParameter("period must be >= 1");
  if (const auto* rot = std::get_if<Rotation>(&system)) {
    // x + period*alpha = x mod 1 has solutions iff period*alpha is integral.
    const __int128 rem = static_cast<__int128>(period % rot->alpha.den) * rot->alpha.num % rot->alpha.den;
    std::vector<BasePoint> out;
    if (rem != 0) return out;  // no periodic points at this period
    for (std::int64_t j = 0; j < grid; ++j) out.push_back(CirclePoint{Rational(j, grid)});
    return out;
  }
  if (const auto* aut = std::get_if<ToralAutomorphism>(&system)) {
    if (period > 40) throw InvalidParameter("period too large for exact integer powers");
    // B = A^period - I; solutions of B v = 0 mod 1 via Smith normal form.
    std::int64_t p[2][2] = {{1, 0}, {0, 1}};
    for (std::int64_t i = 0; i < period; ++i) {
      const std::int64_t q[2][2] = {{p[0][0] * aut->a + p[0][1] * aut->c, p[0][0] * aut->b + p[0][1] * aut->d},
                                    {p[1][0] * aut->a + p[1][1] * aut->c, p[1][0] * aut->b + p[1][1] * aut->d}};
      p[0][0] = q[0][0]; p[0][1] = q[0][1]; p[1][0] = q[1][0]; p[1][1] = q[1][1];
    }
    std::int64_t bmat[2][2] = {{p[0][0] - 1, p[0][1]}, {p[1][0], p[1][1] - 1}};
    const std::int64_t det = bmat[0][0] * bmat[1][1] - bmat[0][1] * bmat[1][0];
    if (det == 0) {
      // Fixed-direction degeneracy (e.g. the identity automorphism): every
      // rational point on a sublattice is periodic; fall back to a grid.
      std::vector<BasePoint> out;
      for (std::int64_t i = 0; i < grid; ++i)
        for (std::int64_t j = 0; j < grid; ++j) {
          const BasePoint cand = TorusPoint{Rational(i, grid), Rational(j, grid)};
          if (points_equal(step(system, cand, period), cand)) out.push_back(cand);
        }
      return out;
    }
    // Smith normal form: U * B * V = diag(s1, s2) with U, V unimodular.
    std::int64_t v[2][2] = {{1, 0}, {0, 1}};
    std::int64_t s[2][2] = {{bmat[0][0], bmat[0][1]}, {bmat[1][0], bmat[1][1]}};
    auto col_op = [&](int src, int dst, std::int64_t f) {
      s[0][dst] -= f * s[0][src];
      s[1][dst] -= f * s[1][src];
      v[0][dst] -= f * v[0][src];
      v[1][dst] -= f * v[1][src];
    };
    auto col_swap = [&]() {
      std::swap(s[0][0], s[0][1]);
      std::swap(s[1][0], s[1][1]);
      std::swap(v[0][0], v[0][1]);
      std::swap(v[1][0], v[1][1]);
    };
    auto row_op = [&](int src, int dst, std::int64_t f) {
      s[dst][0] -= f * s[src][0];
      s[dst][1] -= f * s[src][1];
    };
    for (int guard = 0; guard < 128; ++guard) {
      if (s[1][0] == 0 && s[0][1] == 0) break;
      if (s[0][0] == 0) {
        if (s[0][1] != 0) col_swap();
        else { std::swap(s[0][0], s[1][0]); std::swap(s[0][1], s[1][1]); }
        continue;
      }
      if (s[1][0] % s[0][0] == 0 && s[0][1] % s[0][0] == 0) {
        row_op(0, 1, s[1][0] / s[0][0]);
        col_op(0, 1, s[0][1] / s[0][0]);
      } else if (std::abs(s[1][0]) >= std::abs(s[0][0]) && s[1][0] != 0) {
        row_op(0, 1, s[1][0] / s[0][0]);
      } else if (s[0][1] != 0) {
        col_op(0, 1, s[0][1] / s[0][0]);
      } else {
        std::swap(s[0][0], s[1][0]);
        std::swap(s[0][1], s[1][1]);
      }
    }
    const std::int64_t s1 = std::abs(s[0][0]), s2 = std::abs(s[1][1]);
    std::vector<BasePoint> out;
    for (std::int64_t i = 0; i < s1; ++i)
      for (std::int64_t j = 0; j < s2; ++j) {
        // v * (i/s1, j/s2) mod 1, over the common denominator s1*s2.
        const std::int64_t den = s1 * s2;
        std::int64_t nx = (v[0][0] * i * s2 + v[0][1] * j * s1) % den;
        std::int64_t ny = (v[1][0] * i * s2 + v[1][1] * j * s1) % den;
        if (nx < 0) nx += den;
        if (ny < 0) ny += den;
        out.push_back(TorusPoint{Rational(nx, den), Rational(ny, den)});
      }
    return out;
  }
  throw NotEnumerable("periodic points are enumerable only for toral automorphisms and rational rotations");
}

}  // namespace cocyclelab
