#pragma once

// Small dense linear algebra: SVD, norms and co-norms, exterior powers,
// principal angles.  Everything here is sized for matrices of dimension
// <= 16 (wedge powers of the 4x4 examples reach 6x6), favouring
// determinism and bit-reproducibility over asymptotic speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "cocyclelab/errors.hpp"

namespace cocyclelab {

class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw InvalidMatrix("negative matrix dimension");
  }

  Matrix(int rows, int cols, std::initializer_list<double> entries)
      : Matrix(rows, cols) {
    if (static_cast<int>(entries.size()) != rows * cols)
      throw InvalidMatrix("initializer size does not match dimensions");
    std::copy(entries.begin(), entries.end(), data_.begin());
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  /// Planar rotation by angle theta acting on coordinates (i, j) of R^n.
  static Matrix plane_rotation(int n, int i, int j, double theta) {
    Matrix m = identity(n);
    m(i, i) = std::cos(theta);
    m(j, j) = std::cos(theta);
    m(i, j) = -std::sin(theta);
    m(j, i) = std::sin(theta);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  bool is_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool is_square() const { return rows_ == cols_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
      }
    return out;
  }

  Matrix operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix sum shape mismatch");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix difference shape mismatch");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
  }

  Matrix operator*(double s) const {
    Matrix out = *this;
    for (double& v : out.data_) v *= s;
    return out;
  }

  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<double> row(int i) const {
    std::vector<double> r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

struct SVDResult {
  std::vector<double> singular_values;  // descending
  Matrix left_basis;                    // U, orthonormal columns
  Matrix right_basis;                   // V, orthonormal columns; M = U diag(s) V^T
};

namespace detail {

// LU determinant with partial pivoting; n <= 16.
inline double lu_determinant(Matrix a) {
  if (!a.is_square()) throw DimensionMismatch("determinant of non-square matrix");
  const int n = a.rows();
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

inline std::vector<std::vector<int>> index_subsets(int d, int i) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(i);
  for (int k = 0; k < i; ++k) cur[k] = k;
  while (true) {
    out.push_back(cur);
    int pos = i - 1;
    while (pos >= 0 && cur[pos] == d - i + pos) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int k = pos + 1; k < i; ++k) cur[k] = cur[k - 1] + 1;
  }
  return out;
}

}  // namespace detail

inline double determinant(const Matrix& m) { return detail::lu_determinant(m); }

/// One-sided Jacobi SVD.  Deterministic lexicographic sweep order; converges
/// when the off-diagonal Frobenius mass of W^T W drops below 1e-14 * |M|_F.
inline SVDResult svd(const Matrix& m) {
  if (!m.is_finite()) throw InvalidMatrix("svd: non-finite input");
  if (m.rows() == 0 || m.cols() == 0) throw InvalidMatrix("svd: empty matrix");
  // One-sided Jacobi orthogonalizes columns; transpose so rows >= cols.
  if (m.rows() < m.cols()) {
    SVDResult t = svd(m.transpose());
    return SVDResult{t.singular_values, t.right_basis, t.left_basis};
  }
  const int rows = m.rows(), cols = m.cols();
  Matrix w = m;
  Matrix v = Matrix::identity(cols);
  const double scale = m.frobenius_norm();
  // Gram-matrix off-diagonal entries scale as |M|^2.
  const double off_tol = 1e-14 * (scale > 0 ? scale * scale : 1.0);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off_mass = 0.0;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (int i = 0; i < rows; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        off_mass += apq * apq;
        if (apq == 0.0 || apq * apq <= 1e-60 * app * aqq) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < rows; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = sn * wp + cs * wq;
        }
        for (int i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = sn * vp + cs * vq;
        }
      }
    }
    if (std::sqrt(off_mass) < off_tol) break;
  }

  std::vector<double> sigma(cols);
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma[a] > sigma[b]; });

  SVDResult out;
  out.singular_values.resize(cols);
  out.left_basis = Matrix(rows, cols);
  out.right_basis = Matrix(cols, cols);
  for (int j = 0; j < cols; ++j) {
    const int src = order[j];
    out.singular_values[j] = sigma[src];
    if (sigma[src] > 0) {
      for (int i = 0; i < rows; ++i) out.left_basis(i, j) = w(i, src) / sigma[src];
    }
    for (int i = 0; i < cols; ++i) out.right_basis(i, j) = v(i, src);
  }

  // Complete left vectors for exactly-zero singular values so U stays a frame.
  for (int j = 0; j < cols; ++j) {
    if (out.singular_values[j] > 0) continue;
    for (int axis = 0; axis < rows; ++axis) {
      std::vector<double> cand(rows, 0.0);
      cand[axis] = 1.0;
      for (int k = 0; k < cols; ++k) {
        if (k == j) continue;
        double dot = 0.0;
        for (int i = 0; i < rows; ++i) dot += cand[i] * out.left_basis(i, k);
        for (int i = 0; i < rows; ++i) cand[i] -= dot * out.left_basis(i, k);
      }
      double nn = 0.0;
      for (double x : cand) nn += x * x;
      if (nn > 1e-8) {
        nn = std::sqrt(nn);
        for (int i = 0; i < rows; ++i) out.left_basis(i, j) = cand[i] / nn;
        break;
      }
    }
  }

  // Canonical signs: first entry of each right singular vector with
  // magnitude above half the column max is made positive.
  for (int j = 0; j < cols; ++j) {
    double peak = 0.0;
    for (int i = 0; i < cols; ++i) peak = std::max(peak, std::abs(out.right_basis(i, j)));
    double lead = 0.0;
    for (int i = 0; i < cols; ++i) {
      if (std::abs(out.right_basis(i, j)) >= 0.5 * peak) {
        lead = out.right_basis(i, j);
        break;
      }
    }
    if (lead < 0) {
      for (int i = 0; i < cols; ++i) out.right_basis(i, j) = -out.right_basis(i, j);
      for (int i = 0; i < rows; ++i) out.left_basis(i, j) = -out.left_basis(i, j);
    }
  }
  return out;
}

inline double operator_norm(const Matrix& m) { return svd(m).singular_values.front(); }

/// Co-norm m(L) = |L^{-1}|^{-1}, the smallest singular value.
inline double conorm(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("conorm of non-square matrix");
  const SVDResult s = svd(m);
  const double smallest = s.singular_values.back();
  if (smallest <= 1e-300 || smallest <= 1e-15 * s.singular_values.front())
    throw SingularMatrix("conorm: matrix numerically singular");
  return smallest;
}

inline Matrix inverse(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of non-square matrix");
  const int n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-300) throw SingularMatrix("inverse: pivot vanished");
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(k, j));
        std::swap(inv(piv, j), inv(k, j));
      }
    const double d = a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) /= d;
      inv(k, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = a(i, k);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// i-fold exterior power (compound matrix) in the lexicographic wedge basis:
/// entry (I, J) is the minor of M with rows I and columns J.
inline Matrix exterior_power(const Matrix& m, int order) {
  if (!m.is_square()) throw DimensionMismatch("exterior power of non-square matrix");
  const int d = m.rows();
  if (order < 1 || order > d) throw InvalidOrder("exterior power order out of range");
  if (order == 1) return m;
  const auto subsets = detail::index_subsets(d, order);
  const int dim = static_cast<int>(subsets.size());
  Matrix out(dim, dim);
  Matrix minor(order, order);
  for (int bi = 0; bi < dim; ++bi)
    for (int bj = 0; bj < dim; ++bj) {
      for (int r = 0; r < order; ++r)
        for (int c = 0; c < order; ++c) minor(r, c) = m(subsets[bi][r], subsets[bj][c]);
      out(bi, bj) = detail::lu_determinant(minor);
    }
  return out;
}

/// Householder QR with signs fixed so that R has non-negative diagonal.
struct QRResult {
  Matrix q;  // rows x rows orthogonal
  Matrix r;  // rows x cols upper triangular
};

inline QRResult qr(const Matrix& m) {
  const int rows = m.rows(), cols = m.cols();
  Matrix r = m;
  Matrix q = Matrix::identity(rows);
  for (int k = 0; k < std::min(rows - 1, cols); ++k) {
    double norm = 0.0;
    for (int i = k; i < rows; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm <= 1e-300) continue;
    std::vector<double> u(rows, 0.0);
    const double alpha = r(k, k) >= 0 ? -norm : norm;
    u[k] = r(k, k) - alpha;
    for (int i = k + 1; i < rows; ++i) u[i] = r(i, k);
    double unorm2 = 0.0;
    for (int i = k; i < rows; ++i) unorm2 += u[i] * u[i];
    if (unorm2 <= 1e-300) continue;
    for (int j = 0; j < cols; ++j) {
      double dot = 0.0;
      for (int i = k; i < rows; ++i) dot += u[i] * r(i, j);
      const double f = 2.0 * dot / unorm2;
      for (int i = k; i < rows; ++i) r(i, j) -= f * u[i];
    }
    for (int j = 0; j < rows; ++j) {
      double dot = 0.0;
      for (int i = k; i < rows; ++i) dot += u[i] * q(i, j);
      const double f = 2.0 * dot / unorm2;
      for (int i = k; i < rows; ++i) q(i, j) -= f * u[i];
    }
  }
  // q currently holds Q^T; fix diagonal signs of R, then transpose.
  for (int k = 0; k < std::min(rows, cols); ++k) {
    if (r(k, k) < 0) {
      for (int j = 0; j < cols; ++j) r(k, j) = -r(k, j);
      for (int j = 0; j < rows; ++j) q(k, j) = -q(k, j);
    }
  }
  return QRResult{q.transpose(), r};
}

/// A linear subspace of R^d held as an orthonormal k x d row frame.
class Subspace {
 public:
  Subspace() = default;

  /// Builds the span of the given rows (need not be orthonormal).
  static Subspace from_rows(const Matrix& rows_mat) {
    if (rows_mat.rows() == 0) throw DimensionMismatch("subspace needs at least one spanning vector");
    const QRResult f = qr(rows_mat.transpose());
    int rank = 0;
    const double tol = 1e-12 * (rows_mat.max_abs() > 0 ? rows_mat.max_abs() : 1.0);
    for (int k = 0; k < std::min(f.r.rows(), f.r.cols()); ++k)
      if (std::abs(f.r(k, k)) > tol) ++rank;
    if (rank == 0) throw DimensionMismatch("subspace spanning vectors are all zero");
    Matrix basis(rank, rows_mat.cols());
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rows_mat.cols(); ++j) basis(i, j) = f.q(j, i);
    Subspace s;
    s.ambient_dim_ = rows_mat.cols();
    s.basis_ = basis;
    return s;
  }

  static Subspace coordinate_axis(int ambient, int axis) {
    Matrix b(1, ambient);
    b(0, axis) = 1.0;
    return from_rows(b);
  }

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  /// Image under an invertible map, re-orthonormalized.
  Subspace map_by(const Matrix& m) const {
    if (m.cols() != ambient_dim_) throw DimensionMismatch("map/subspace ambient mismatch");
    return from_rows(basis_ * m.transpose());
  }

 private:
  int ambient_dim_ = 0;
  Matrix basis_;
};

/// Cosines of the principal angles between two subspaces, descending.
inline std::vector<double> principal_cosines(const Subspace& e, const Subspace& f) {
  if (e.ambient_dim() != f.ambient_dim())
    throw DimensionMismatch("principal angles: ambient dimensions differ");
  if (e.dim() == 0 || f.dim() == 0) throw DimensionMismatch("principal angles: zero subspace");
  const Matrix g = e.basis() * f.basis().transpose();
  std::vector<double> cos = svd(g).singular_values;
  for (double& c : cos) c = std::clamp(c, -1.0, 1.0);
  return cos;
}

/// Least nonnegative angle between the two subspaces, in [0, pi/2].
inline double subspace_angle(const Subspace& e, const Subspace& f) {
  return std::acos(principal_cosines(e, f).front());
}

/// Intersection of two subspaces: principal directions whose angle is below
/// `angle_tol`.  Returns an empty optional-dimension subspace via exception
/// when no direction matches.
inline Matrix subspace_intersection_rows(const Subspace& e, const Subspace& f, double angle_tol) {
  if (e.ambient_dim() != f.ambient_dim())
    throw DimensionMismatch("intersection: ambient dimensions differ");
  const Matrix g = e.basis() * f.basis().transpose();
  const SVDResult s = svd(g);
  const double cos_floor = std::cos(angle_tol);
  int count = 0;
  for (double c : s.singular_values)
    if (c >= cos_floor) ++count;
  Matrix rows(std::max(count, 1), e.ambient_dim());
  if (count == 0) return Matrix(0, e.ambient_dim());
  // Principal directions inside E: rows of U^T * basis(E).
  const Matrix dirs = s.left_basis.transpose() * e.basis();
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < e.ambient_dim(); ++j) rows(i, j) = dirs(i, j);
  return rows;
}

/// Moduli of the eigenvalues of a square matrix, sorted descending.
/// Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner.
inline std::vector<double> eigenvalue_moduli(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("eigenvalues of non-square matrix");
  const int n = m.rows();
  if (n == 1) return {std::abs(m(0, 0))};
  if (n == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr / 4.0 - det;
    std::vector<double> out(2);
    if (disc >= 0) {
      const double root = std::sqrt(disc);
      out[0] = std::abs(tr / 2.0 + root);
      out[1] = std::abs(tr / 2.0 - root);
    } else {
      out[0] = out[1] = std::sqrt(std::abs(det));  // complex pair, |lambda| = sqrt(det)
    }
    std::sort(out.rbegin(), out.rend());
    return out;
  }

  // p(x) = x^n + c[1] x^{n-1} + ... + c[n] via Newton's identities.
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  std::vector<double> power_trace(n + 1, 0.0);
  Matrix acc = Matrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    acc = m * acc;
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += acc(i, i);
    power_trace[k] = tr;
  }
  for (int k = 1; k <= n; ++k) {
    double s = power_trace[k];
    for (int j = 1; j < k; ++j) s += c[j] * power_trace[k - j];
    c[k] = -s / k;
  }

  using complexd = std::complex<double>;
  double radius = 0.0;
  for (int k = 1; k <= n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / k));
  radius = 2.0 * std::max(radius, 1e-30);
  std::vector<complexd> roots(n);
  const complexd seed(0.4, 0.9);
  complexd z(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    z *= seed;
    roots[k] = radius * z / std::abs(z) * (0.5 + 0.5 * (k + 1.0) / n);
  }
  auto eval = [&](complexd x) {
    complexd acc(1.0, 0.0);
    for (int k = 1; k <= n; ++k) acc = acc * x + c[k];
    return acc;
  };
  for (int iter = 0; iter < 400; ++iter) {
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
      complexd denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      if (std::abs(denom) < 1e-300) denom = complexd(1e-300, 0);
      const complexd delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-13 * radius) break;
  }
  std::vector<double> mods(n);
  for (int i = 0; i < n; ++i) mods[i] = std::abs(roots[i]);
  std::sort(mods.rbegin(), mods.rend());
  return mods;
}

}  // namespace cocyclelab
