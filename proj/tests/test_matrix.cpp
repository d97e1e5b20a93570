#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cocyclelab/matrix.hpp"

using namespace cocyclelab;

namespace {

// Deterministic test-matrix generator.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  double uniform() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) / 9007199254740992.0;
  }
};

Matrix random_matrix(Rng& rng, int d, double scale = 2.0) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

Matrix random_invertible(Rng& rng, int d) {
  while (true) {
    Matrix m = random_matrix(rng, d);
    if (std::abs(determinant(m)) > 0.1) return m;
  }
}

// Eigenvalues of a symmetric 2x2 via the characteristic polynomial.
std::pair<double, double> sym2x2_eigen(double a, double c, double b) {
  const double tr = a + b, det = a * b - c * c;
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

}  // namespace

TEST_CASE("svd of simple matrices") {
  SECTION("identity") {
    const auto s = svd(Matrix::identity(2));
    CHECK(s.singular_values[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(s.singular_values[1] == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("diagonal") {
    const auto s = svd(Matrix::diagonal({std::exp(1.0), std::exp(-1.0)}));
    CHECK(s.singular_values[0] == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(s.singular_values[1] == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SECTION("symmetric (2,1;1,1): eigenvalue oracle") {
    const auto [lam1, lam2] = sym2x2_eigen(2, 1, 1);
    CHECK(lam1 == Catch::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    const auto s = svd(Matrix(2, 2, {2, 1, 1, 1}));
    CHECK(s.singular_values[0] == Catch::Approx(lam1).epsilon(1e-12));
    CHECK(s.singular_values[1] == Catch::Approx(lam2).epsilon(1e-12));
  }
  SECTION("non-finite input rejected") {
    Matrix m(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(m), InvalidMatrix);
  }
}

TEST_CASE("svd invariants on random matrices") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform() * 5.0);
    const Matrix m = random_matrix(rng, d);
    const SVDResult s = svd(m);

    // descending order
    for (size_t k = 1; k < s.singular_values.size(); ++k)
      CHECK(s.singular_values[k - 1] >= s.singular_values[k] - 1e-12);

    // reconstruction within 1e-10 * |M|
    const Matrix rec = s.left_basis * Matrix::diagonal(s.singular_values) * s.right_basis.transpose();
    CHECK((rec - m).frobenius_norm() <= 1e-10 * std::max(m.frobenius_norm(), 1e-30));

    // orthonormal frames
    const Matrix utu = s.left_basis.transpose() * s.left_basis;
    const Matrix vtv = s.right_basis.transpose() * s.right_basis;
    CHECK((utu - Matrix::identity(d)).frobenius_norm() < 1e-12);
    CHECK((vtv - Matrix::identity(d)).frobenius_norm() < 1e-12);

    // product of singular values equals |det|
    double prod = 1.0;
    for (double v : s.singular_values) prod *= v;
    CHECK(prod == Catch::Approx(std::abs(determinant(m))).epsilon(1e-10).margin(1e-12));
  }
}

TEST_CASE("conorm") {
  CHECK(conorm(Matrix::identity(3)) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(conorm(Matrix::diagonal({2.0, 0.5})) == Catch::Approx(0.5).epsilon(1e-12));
  const auto [lam1, lam2] = sym2x2_eigen(2, 1, 1);
  CHECK(conorm(Matrix(2, 2, {2, 1, 1, 1})) == Catch::Approx(lam2).epsilon(1e-10));
  CHECK_THROWS_AS(conorm(Matrix::diagonal({1.0, 0.0})), SingularMatrix);

  Rng rng(34);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 3.0);
    const Matrix m = random_invertible(rng, d);
    CHECK(conorm(m) * operator_norm(inverse(m)) == Catch::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("exterior powers") {
  SECTION("order one is the matrix itself") {
    Rng rng(5);
    const Matrix m = random_matrix(rng, 3);
    CHECK((exterior_power(m, 1) - m).frobenius_norm() == 0.0);
  }
  SECTION("top power is the determinant") {
    Rng rng(6);
    const Matrix m = random_matrix(rng, 2);
    const Matrix top = exterior_power(m, 2);
    REQUIRE(top.rows() == 1);
    CHECK(top(0, 0) == Catch::Approx(determinant(m)).epsilon(1e-12));
  }
  SECTION("wedge-basis oracle for diagonal input") {
    const Matrix m = exterior_power(Matrix::diagonal({2.0, 3.0, 5.0}), 2);
    REQUIRE(m.rows() == 3);
    CHECK(m(0, 0) == Catch::Approx(6.0));   // {0,1}
    CHECK(m(1, 1) == Catch::Approx(10.0));  // {0,2}
    CHECK(m(2, 2) == Catch::Approx(15.0));  // {1,2}
    CHECK(std::abs(m(0, 1)) + std::abs(m(1, 0)) + std::abs(m(2, 0)) < 1e-15);
  }
  SECTION("order out of range") {
    CHECK_THROWS_AS(exterior_power(Matrix::identity(2), 0), InvalidOrder);
    CHECK_THROWS_AS(exterior_power(Matrix::identity(2), 3), InvalidOrder);
  }
  SECTION("singular values are i-fold products (brute force, d <= 5)") {
    Rng rng(77);
    for (int trial = 0; trial < 15; ++trial) {
      const int d = 2 + static_cast<int>(rng.uniform() * 4.0);
      const Matrix m = random_matrix(rng, d);
      const auto sig = svd(m).singular_values;
      for (int order = 1; order <= d; ++order) {
        std::vector<double> expect;
        for (const auto& subset : detail::index_subsets(d, order)) {
          double p = 1.0;
          for (int idx : subset) p *= sig[static_cast<size_t>(idx)];
          expect.push_back(p);
        }
        std::sort(expect.rbegin(), expect.rend());
        const auto got = svd(exterior_power(m, order)).singular_values;
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
          CHECK(got[i] == Catch::Approx(expect[i]).epsilon(1e-8).margin(1e-10));
      }
    }
  }
}

TEST_CASE("three-factor singular value bounds") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 3.0);
    const Matrix m1 = random_invertible(rng, d);
    const Matrix m2 = random_invertible(rng, d);
    const Matrix m3 = random_invertible(rng, d);
    const auto s2 = svd(m2).singular_values;
    const auto sp = svd(m3 * m2 * m1).singular_values;
    const double n1 = operator_norm(m1), n3 = operator_norm(m3);
    const double c1 = conorm(m1), c3 = conorm(m3);
    for (int k = 0; k < d; ++k) {
      CHECK(sp[static_cast<size_t>(k)] <= n3 * s2[static_cast<size_t>(k)] * n1 * (1 + 1e-8));
      CHECK(sp[static_cast<size_t>(k)] >= c3 * s2[static_cast<size_t>(k)] * c1 * (1 - 1e-8));
    }
  }
}

TEST_CASE("subspace angles") {
  const Subspace e1 = Subspace::coordinate_axis(2, 0);
  const Subspace e2 = Subspace::coordinate_axis(2, 1);
  CHECK(subspace_angle(e1, e2) == Catch::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(subspace_angle(e1, e1) == Catch::Approx(0.0).margin(1e-7));

  const Subspace diag = Subspace::from_rows(Matrix(1, 2, {1, 1}));
  CHECK(subspace_angle(e1, diag) == Catch::Approx(M_PI / 4).epsilon(1e-12));

  SECTION("symmetry and reparameterization invariance") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix a(2, 4), b(2, 4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) {
          a(i, j) = 2.0 * rng.uniform() - 1.0;
          b(i, j) = 2.0 * rng.uniform() - 1.0;
        }
      const Subspace e = Subspace::from_rows(a);
      const Subspace f = Subspace::from_rows(b);
      CHECK(subspace_angle(e, f) == subspace_angle(f, e));

      // mix the spanning rows of E
      Matrix mixed(2, 4);
      const double c = std::cos(0.7), s = std::sin(0.7);
      for (int j = 0; j < 4; ++j) {
        mixed(0, j) = c * a(0, j) - s * a(1, j);
        mixed(1, j) = s * a(0, j) + c * a(1, j);
      }
      CHECK(subspace_angle(Subspace::from_rows(mixed), f) ==
            Catch::Approx(subspace_angle(e, f)).margin(1e-10));
    }
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(subspace_angle(Subspace::coordinate_axis(2, 0), Subspace::coordinate_axis(3, 0)),
                    DimensionMismatch);
  }
}

TEST_CASE("householder qr") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 4.0);
    const Matrix m = random_matrix(rng, d);
    const QRResult f = qr(m);
    CHECK((f.q * f.r - m).frobenius_norm() < 1e-11 * std::max(1.0, m.frobenius_norm()));
    CHECK((f.q.transpose() * f.q - Matrix::identity(d)).frobenius_norm() < 1e-12);
    for (int k = 0; k < d; ++k) {
      CHECK(f.r(k, k) >= 0.0);
      for (int j = 0; j < k; ++j) CHECK(std::abs(f.r(k, j)) < 1e-12 * std::max(1.0, m.max_abs()));
    }
  }
}

TEST_CASE("eigenvalue moduli") {
  SECTION("hyperbolic 2x2") {
    const auto mods = eigenvalue_moduli(Matrix(2, 2, {2, 1, 1, 1}));
    CHECK(mods[0] == Catch::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(mods[1] == Catch::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
  }
  SECTION("rotation has unit moduli") {
    const double t = 0.4;
    const auto mods = eigenvalue_moduli(Matrix(2, 2, {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}));
    CHECK(mods[0] == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(mods[1] == Catch::Approx(1.0).epsilon(1e-12));
  }
  SECTION("block diagonal 4x4 via Durand-Kerner") {
    Matrix m(4, 4);
    m(0, 0) = 3.0;
    m(1, 1) = -2.0;
    m(2, 2) = 0.5;
    m(2, 3) = -1.0;
    m(3, 2) = 1.0;
    m(3, 3) = 0.5;  // complex pair 0.5 +- i, modulus sqrt(1.25)
    const auto mods = eigenvalue_moduli(m);
    CHECK(mods[0] == Catch::Approx(3.0).epsilon(1e-9));
    CHECK(mods[1] == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(mods[2] == Catch::Approx(std::sqrt(1.25)).epsilon(1e-9));
    CHECK(mods[3] == Catch::Approx(std::sqrt(1.25)).epsilon(1e-9));
  }
}
