#pragma once

// Cocycle evaluation for all integer times, stabilized log-singular-value
// computation, exterior-power / normalized / conjugated cocycles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocyclelab/base.hpp"
#include "cocyclelab/matrix.hpp"

namespace cocyclelab {

inline constexpr double kDeterminantFloor = 1e-12;

struct Cocycle {
  int dim = 0;
  std::function<Matrix(const BasePoint&)> generator;
  BaseSystem system;
  std::string label;

  Matrix generator_at(const BasePoint& x) const {
    Matrix g = generator(x);
    if (g.rows() != dim || g.cols() != dim)
      throw SingularGenerator("generator returned a matrix of wrong dimension");
    if (!g.is_finite()) throw SingularGenerator("generator returned non-finite entries");
    if (std::abs(determinant(g)) < kDeterminantFloor)
      throw SingularGenerator("generator determinant below invertibility floor");
    return g;
  }
};

/// A(x, n): identity at n = 0, the forward product A(f^{n-1}x)...A(x) for
/// n > 0, and the inverse product along the backward orbit for n < 0.
inline Matrix evaluate(const Cocycle& c, const BasePoint& x, std::int64_t n) {
  Matrix acc = Matrix::identity(c.dim);
  if (n > 0) {
    BasePoint p = x;
    for (std::int64_t j = 0; j < n; ++j) {
      acc = c.generator_at(p) * acc;
      if (j + 1 < n) p = step(c.system, p, 1);
    }
  } else if (n < 0) {
    // Iterate the inverse generator along the backward orbit rather than
    // inverting a long product.
    BasePoint p = x;
    for (std::int64_t j = 0; j < -n; ++j) {
      p = step(c.system, p, -1);
      acc = inverse(c.generator_at(p)) * acc;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Stabilized log singular values.
//
// For every wedge order i the top singular value of the i-fold exterior
// power of A(x, n) is sigma_1 * ... * sigma_i.  Running all wedge orders as
// scaled products (one scalar log carried per order, renormalized every
// `block` steps) therefore yields every partial sum
// Lambda_i = log sigma_1 + ... + log sigma_i, and
// log sigma_k = Lambda_k - Lambda_{k-1}, without ever overflowing.

inline constexpr int kRescaleBlock = 16;

namespace detail {

struct ScaledWedgeProduct {
  Matrix value;
  double log_scale = 0.0;

  void rescale() {
    const double m = value.max_abs();
    if (m <= 0.0) throw SingularMatrix("wedge product collapsed to zero");
    value *= 1.0 / m;
    log_scale += std::log(m);
  }

  double log_top_singular_value() const {
    return log_scale + std::log(svd(value).singular_values.front());
  }
};

}  // namespace detail

/// log sigma_k(A(x, n)) for k = 1..d, descending.  `n` counts iterates;
/// `direction` +1 computes A(x, n), -1 computes A(x, -n).
inline std::vector<double> stabilized_log_svd(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                              int direction = +1, int block = kRescaleBlock) {
  if (n < 1) throw InvalidParameter("stabilized_log_svd needs n >= 1");
  if (direction != 1 && direction != -1) throw InvalidParameter("direction must be +-1");
  const int d = c.dim;
  std::vector<detail::ScaledWedgeProduct> wedges(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    const int dim = static_cast<int>(detail::index_subsets(d, i + 1).size());
    wedges[static_cast<size_t>(i)].value = Matrix::identity(dim);
  }
  BasePoint p = x;
  for (std::int64_t j = 0; j < n; ++j) {
    Matrix g;
    if (direction > 0) {
      g = c.generator_at(p);
      if (j + 1 < n) p = step(c.system, p, 1);
    } else {
      p = step(c.system, p, -1);
      g = inverse(c.generator_at(p));
    }
    for (int i = 0; i < d; ++i) {
      auto& w = wedges[static_cast<size_t>(i)];
      w.value = (i == 0 ? g : exterior_power(g, i + 1)) * w.value;
      if ((j + 1) % block == 0) w.rescale();
    }
  }
  std::vector<double> partial(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) partial[static_cast<size_t>(i)] = wedges[static_cast<size_t>(i)].log_top_singular_value();
  std::vector<double> logs(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k)
    logs[static_cast<size_t>(k)] = partial[static_cast<size_t>(k)] - (k > 0 ? partial[static_cast<size_t>(k - 1)] : 0.0);
  // The partial sums are concave up to rounding; restore monotonicity.
  std::sort(logs.rbegin(), logs.rend());
  return logs;
}

/// Log singular values sampled along an increasing schedule in one pass:
/// result[t][k] = log sigma_{k+1}(A(x, +-schedule[t])).
inline std::vector<std::vector<double>> log_svd_schedule(const Cocycle& c, const BasePoint& x,
                                                         const std::vector<std::int64_t>& schedule,
                                                         int direction = +1, int block = kRescaleBlock) {
  if (schedule.empty()) throw InvalidParameter("empty schedule");
  for (size_t t = 0; t + 1 < schedule.size(); ++t)
    if (schedule[t] >= schedule[t + 1]) throw InvalidParameter("schedule must be strictly increasing");
  if (schedule.front() < 1) throw InvalidParameter("schedule entries must be >= 1");
  const int d = c.dim;
  std::vector<detail::ScaledWedgeProduct> wedges(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    const int dim = static_cast<int>(detail::index_subsets(d, i + 1).size());
    wedges[static_cast<size_t>(i)].value = Matrix::identity(dim);
  }
  std::vector<std::vector<double>> out;
  out.reserve(schedule.size());
  BasePoint p = x;
  size_t next = 0;
  for (std::int64_t j = 0; j < schedule.back(); ++j) {
    Matrix g;
    if (direction > 0) {
      g = c.generator_at(p);
      if (j + 1 < schedule.back()) p = step(c.system, p, 1);
    } else {
      p = step(c.system, p, -1);
      g = inverse(c.generator_at(p));
    }
    for (int i = 0; i < d; ++i) {
      auto& w = wedges[static_cast<size_t>(i)];
      w.value = (i == 0 ? g : exterior_power(g, i + 1)) * w.value;
      if ((j + 1) % block == 0) w.rescale();
    }
    while (next < schedule.size() && schedule[next] == j + 1) {
      std::vector<double> logs(static_cast<size_t>(d));
      double prev = 0.0;
      for (int i = 0; i < d; ++i) {
        const double cur = wedges[static_cast<size_t>(i)].log_top_singular_value();
        logs[static_cast<size_t>(i)] = cur - prev;
        prev = cur;
      }
      std::sort(logs.rbegin(), logs.rend());
      out.push_back(std::move(logs));
      ++next;
    }
  }
  return out;
}

/// A(x, +-n) as a scaled matrix pair (P, s) with A = e^s * P; the scalar
/// rescale preserves singular-value ratios while avoiding overflow.
struct ScaledMatrix {
  Matrix value;
  double log_scale = 0.0;
};

inline ScaledMatrix scaled_evaluate(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                    int direction = +1, int block = kRescaleBlock) {
  if (n < 0) throw InvalidParameter("scaled_evaluate takes n >= 0 plus a direction");
  detail::ScaledWedgeProduct acc;
  acc.value = Matrix::identity(c.dim);
  BasePoint p = x;
  for (std::int64_t j = 0; j < n; ++j) {
    if (direction > 0) {
      acc.value = c.generator_at(p) * acc.value;
      if (j + 1 < n) p = step(c.system, p, 1);
    } else {
      p = step(c.system, p, -1);
      acc.value = inverse(c.generator_at(p)) * acc.value;
    }
    if ((j + 1) % block == 0) acc.rescale();
  }
  return ScaledMatrix{acc.value, acc.log_scale};
}

/// Image of a subspace under A(x, +-n), re-orthonormalized every `block`
/// steps so that contracting bundles never underflow.
inline Subspace push_subspace(const Cocycle& c, const BasePoint& x, const Subspace& e,
                              std::int64_t n, int direction = +1, int block = kRescaleBlock) {
  if (e.ambient_dim() != c.dim) throw DimensionMismatch("subspace/cocycle dimension mismatch");
  Matrix rows = e.basis();
  BasePoint p = x;
  for (std::int64_t j = 0; j < n; ++j) {
    Matrix g;
    if (direction > 0) {
      g = c.generator_at(p);
      if (j + 1 < n) p = step(c.system, p, 1);
    } else {
      p = step(c.system, p, -1);
      g = inverse(c.generator_at(p));
    }
    rows = rows * g.transpose();
    if ((j + 1) % block == 0 || j + 1 == n) rows = Subspace::from_rows(rows).basis();
  }
  return Subspace::from_rows(rows);
}

// ---------------------------------------------------------------------------
// Derived cocycles.

inline Cocycle exterior_cocycle(const Cocycle& c, int order) {
  if (order < 1 || order > c.dim) throw InvalidOrder("exterior cocycle order out of range");
  const int dim = static_cast<int>(detail::index_subsets(c.dim, order).size());
  auto gen = c.generator;
  Cocycle out;
  out.dim = dim;
  out.system = c.system;
  out.label = c.label + "^wedge" + std::to_string(order);
  out.generator = [gen, order](const BasePoint& x) { return exterior_power(gen(x), order); };
  return out;
}

/// |det|^{-1/d} * A: every generator value rescaled onto determinant +-1.
inline Cocycle normalize_det(const Cocycle& c) {
  auto gen = c.generator;
  const int d = c.dim;
  Cocycle out = c;
  out.label = c.label + "_normalized";
  out.generator = [gen, d](const BasePoint& x) {
    Matrix g = gen(x);
    const double det = std::abs(determinant(g));
    if (det < kDeterminantFloor) throw SingularGenerator("cannot normalize a singular generator");
    g *= std::pow(det, -1.0 / d);
    return g;
  };
  return out;
}

/// The cocycle B with B(x, n) = C(f^n x) A(x, n) C(x)^{-1}; continuously
/// cohomologous to A when C is continuous.
inline Cocycle conjugate(const Cocycle& c, const std::function<Matrix(const BasePoint&)>& change) {
  auto gen = c.generator;
  auto system = c.system;
  Cocycle out = c;
  out.label = c.label + "_conjugated";
  out.generator = [gen, system, change](const BasePoint& x) {
    const Matrix cx = change(x);
    const Matrix cfx = change(step(system, x, 1));
    if (!cx.is_finite() || !cfx.is_finite() || std::abs(determinant(cx)) < kDeterminantFloor ||
        std::abs(determinant(cfx)) < kDeterminantFloor)
      throw SingularConjugacy("conjugacy value is singular");
    return cfx * gen(x) * inverse(cx);
  };
  return out;
}

/// B(x, n) = A(x, -n): the forward products of the inverse cocycle (the
/// cocycle over f^{-1} generated by x -> A(f^{-1}x)^{-1}).
inline std::vector<double> backward_log_svd(const Cocycle& c, const BasePoint& x, std::int64_t n,
                                            int block = kRescaleBlock) {
  return stabilized_log_svd(c, x, n, -1, block);
}

// ---------------------------------------------------------------------------
// Optional generator memoization (per experiment; opt-in performance knob).

class MemoizedGenerator {
 public:
  explicit MemoizedGenerator(std::function<Matrix(const BasePoint&)> inner) : inner_(std::move(inner)) {}

  Matrix operator()(const BasePoint& x) const {
    const std::string key = point_key(x);
    {
      std::shared_lock lock(cache_->mutex);
      const auto it = cache_->values.find(key);
      if (it != cache_->values.end()) return it->second;
    }
    Matrix value = inner_(x);
    std::unique_lock lock(cache_->mutex);
    cache_->values.emplace(key, value);
    return value;
  }

 private:
  struct Cache {
    std::shared_mutex mutex;
    std::unordered_map<std::string, Matrix> values;
  };
  std::function<Matrix(const BasePoint&)> inner_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline Cocycle memoize(const Cocycle& c) {
  Cocycle out = c;
  out.generator = MemoizedGenerator(c.generator);
  return out;
}

}  // namespace cocyclelab
