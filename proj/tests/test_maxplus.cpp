#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "maxtandem/errors.hpp"
#include "maxtandem/maxplus.hpp"
#include "test_support.hpp"

using namespace maxtandem;
using maxtandem::testing::eps;

TEST_CASE("scalar oplus", "[maxplus]") {
  CHECK(oplus(3, 5) == Scalar{5});
  CHECK(oplus(eps, 7) == Scalar{7});
  CHECK(oplus(4, 4) == Scalar{4});
  CHECK(oplus(eps, eps) == eps);
}

TEST_CASE("scalar otimes", "[maxplus]") {
  CHECK(otimes(3, 5) == Scalar{8});
  CHECK(otimes(eps, 7) == eps);
  CHECK(otimes(kUnit, 7) == Scalar{7});
  CHECK(otimes(-3, 3) == kUnit);
}

TEST_CASE("eps never produces NaN", "[maxplus]") {
  const Scalar big{1e308};
  CHECK(otimes(eps, big) == eps);
  CHECK(otimes(big, eps) == eps);
  CHECK_FALSE(std::isnan(otimes(eps, eps).value()));
}

TEST_CASE("scalar inverse", "[maxplus]") {
  CHECK(inverse(Scalar{4}) == Scalar{-4});
  CHECK(inverse(kUnit) == kUnit);
  CHECK_THROWS_AS(inverse(eps), NotInvertibleError);
}

TEST_CASE("mat_add", "[maxplus]") {
  const Matrix a{{1, eps}, {eps, 2}};
  const Matrix b{{0, 3}, {eps, eps}};
  CHECK(mat_add(a, b) == Matrix{{1, 3}, {eps, 2}});
  CHECK(mat_add(a, Matrix::null(2)) == a);
  CHECK(mat_add(a, a) == a);
  CHECK_THROWS_AS(mat_add(a, Matrix::null(2, 3)), ShapeError);
}

TEST_CASE("mat_mul", "[maxplus]") {
  const Matrix a{{0, eps}, {1, 0}};
  const Matrix b{{2, eps}, {eps, 3}};
  CHECK(mat_mul(a, b) == Matrix{{2, eps}, {3, 3}});
  CHECK(mat_mul(Matrix::identity(2), a) == a);
  CHECK(mat_mul(a, Matrix::identity(2)) == a);
  CHECK(mat_mul(Matrix::null(2), a) == Matrix::null(2));
  CHECK_THROWS_AS(mat_mul(a, Matrix::null(3, 1)), ShapeError);

  SECTION("rectangular and matrix-vector") {
    const Matrix r{{1, 6, 2}, {8, 3, 4}};
    const Matrix c{{2, 5}, {3, 3}, {1, 6}};
    CHECK(mat_mul(r, c) == Matrix{{9, 9}, {10, 13}});
    const Vector x{0, eps, 1};
    CHECK(mat_mul(r, Matrix::column(x)) == Matrix{{3}, {8}});
    CHECK(mat_vec(r, x) == Vector{3, 8});
  }

  SECTION("operation counting") {
    OpCounter ops;
    mat_mul(Matrix::null(3, 4), Matrix::null(4, 2), &ops);
    CHECK(ops.otimes == 3 * 2 * 4);
    CHECK(ops.oplus == 3 * 2 * 3);
  }
}

TEST_CASE("mat_pow", "[maxplus]") {
  const Matrix a{{7, 1}, {eps, 2}};
  CHECK(mat_pow(a, 0) == Matrix::identity(2));
  CHECK(mat_pow(a, 1) == a);
  CHECK(mat_pow(Matrix{{eps, eps}, {5, eps}}, 2) == Matrix::null(2));
  CHECK(mat_pow(Matrix{{1, eps}, {eps, 1}}, 3) == Matrix{{3, eps}, {eps, 3}});
  CHECK_THROWS_AS(mat_pow(Matrix::null(2, 3), 2), ShapeError);
}

TEST_CASE("diag and diag_inverse", "[maxplus]") {
  CHECK(diag({1, 2, 3}) == Matrix{{1, eps, eps}, {eps, 2, eps}, {eps, eps, 3}});
  CHECK(diag({kUnit, kUnit}) == Matrix::identity(2));
  CHECK(diag(std::span<const Scalar>{}).rows() == 0);

  CHECK(diag_inverse(diag({2, 5})) == diag({-2, -5}));
  CHECK(diag_inverse(Matrix::identity(3)) == Matrix::identity(3));
  CHECK_THROWS_AS(diag_inverse(diag({eps, 3})), NotInvertibleError);
  CHECK_THROWS_AS(diag_inverse(Matrix{{1, 0}, {eps, 1}}), NotInvertibleError);
  CHECK_THROWS_AS(diag_inverse(Matrix::null(2, 3)), ShapeError);
}

TEST_CASE("block helpers and transpose", "[maxplus]") {
  Matrix m(4, 4);
  m.set_block(2, 0, Matrix::identity(2));
  CHECK(m.block(2, 0, 2, 2) == Matrix::identity(2));
  CHECK(m.block(0, 0, 2, 2).is_null());
  CHECK(Matrix{{1, 2, 3}}.transpose() == Matrix{{1}, {2}, {3}});
  CHECK_THROWS_AS(m.block(3, 3, 2, 2), ShapeError);
}

TEST_CASE("approx_equal is a separate tolerance utility", "[maxplus]") {
  const Matrix a{{1.0, eps}};
  const Matrix b{{1.0 + 1e-12, eps}};
  CHECK_FALSE(a == b);
  CHECK(approx_equal(a, b, 1e-9));
  CHECK_FALSE(approx_equal(a, Matrix{{1.0, 0.0}}, 1e-9, 1.0));
}

TEST_CASE("text format", "[maxplus]") {
  const Matrix m = parse_matrix("# fixture\n1 eps\n\n-2.5  3\n");
  CHECK(m == Matrix{{1, eps}, {-2.5, 3}});
  CHECK(format_matrix(m) == "1 eps\n-2.5 3\n");
  CHECK(parse_matrix(format_matrix(m)) == m);
  CHECK(format_scalar(Scalar{0.1}) == "0.10000000000000001");
  CHECK_THROWS_AS(parse_matrix("1 2\n3\n"), ShapeError);
  CHECK_THROWS_AS(parse_matrix("1 x\n"), DomainError);

  SECTION("17 significant digits round-trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
      const Scalar x{u(rng)};
      REQUIRE(parse_scalar(format_scalar(x)) == x);
    }
  }
}

TEST_CASE("matrix laws on random integer matrices", "[maxplus][property]") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const Matrix a = testing::random_matrix(rng, n, n);
    const Matrix b = testing::random_matrix(rng, n, n);
    const Matrix c = testing::random_matrix(rng, n, n);
    REQUIRE(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
    REQUIRE(mat_mul(a, mat_add(b, c)) == mat_add(mat_mul(a, b), mat_mul(a, c)));
    REQUIRE(mat_mul(mat_add(a, b), c) == mat_add(mat_mul(a, c), mat_mul(b, c)));
    REQUIRE(mat_add(a, b) == mat_add(b, a));

    // Monotonicity: raising entries of A cannot lower A (x) B.
    const Matrix a_up = mat_add(a, testing::random_matrix(rng, n, n, 0.7));
    REQUIRE(dominated_by(a, a_up));
    REQUIRE(dominated_by(mat_mul(a, b), mat_mul(a_up, b)));
  }
}
