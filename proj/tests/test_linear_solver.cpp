#include <catch_amalgamated.hpp>

#include <random>

#include "maxtandem/errors.hpp"
#include "maxtandem/linear_solver.hpp"
#include "test_support.hpp"

using namespace maxtandem;
using maxtandem::testing::eps;

namespace {

Matrix subdiagonal(std::initializer_list<Scalar> alpha) {
  const std::size_t n = alpha.size() + 1;
  Matrix a(n, n);
  std::size_t i = 1;
  for (Scalar x : alpha) a(i, i - 1) = x, ++i;
  return a;
}

}  // namespace

TEST_CASE("nilpotency_index", "[solver]") {
  const auto sub = nilpotency_index(subdiagonal({4, -1}));
  REQUIRE(sub.nilpotent());
  CHECK(*sub.index == 3);

  const auto null = nilpotency_index(Matrix::null(4));
  CHECK(null.index == std::optional<std::size_t>{1});

  const auto id = nilpotency_index(Matrix::identity(2), 2);
  CHECK_FALSE(id.nilpotent());
  CHECK(id.bound == 2);

  // Index beyond the bound is reported as not nilpotent.
  CHECK_FALSE(nilpotency_index(subdiagonal({1, 1, 1}), 3).nilpotent());
  CHECK(*nilpotency_index(subdiagonal({1, 1, 1}), 4).index == 4);

  CHECK_THROWS_AS(nilpotency_index(Matrix::null(2, 3), 2), ShapeError);
}

TEST_CASE("subdiagonal example: A^p != null for p < n, A^n = null", "[solver]") {
  for (std::size_t n = 2; n <= 8; ++n) {
    Matrix a(n, n);
    for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = Scalar{static_cast<double>(i)};
    for (std::size_t p = 1; p < n; ++p) REQUIRE_FALSE(mat_pow(a, p).is_null());
    REQUIRE(mat_pow(a, n).is_null());
  }
}

TEST_CASE("star_truncated", "[solver]") {
  const Matrix a{{eps, eps}, {1, eps}};
  CHECK(star_truncated(a, 1) == Matrix::identity(2));
  CHECK(star_truncated(a, 2) == Matrix{{0, eps}, {1, 0}});
  CHECK(star_truncated(Matrix::null(3), 3) == Matrix::identity(3));
  CHECK_THROWS_AS(star_truncated(a, 0), DomainError);
  CHECK_THROWS_AS(star_truncated(Matrix::null(1, 2), 1), ShapeError);
}

TEST_CASE("solve_implicit", "[solver]") {
  SECTION("two stations") {
    const Matrix a{{eps, eps}, {1, eps}};
    const Vector x = solve_implicit(a, Vector{0, 0});
    CHECK(x == Vector{0, 1});
    CHECK(vec_add(mat_vec(a, x), Vector{0, 0}) == x);
  }
  SECTION("null matrix returns b") {
    const Vector b{3, eps, -2};
    CHECK(solve_implicit(Matrix::null(3), b) == b);
  }
  SECTION("cascade of prefix sums") {
    const Matrix a{{eps, eps, eps}, {2, eps, eps}, {eps, 3, eps}};
    const Vector b{0, eps, eps};
    const Vector x = solve_implicit(a, b);
    CHECK(x == Vector{0, 2, 5});
    CHECK(vec_add(mat_vec(a, x), b) == x);
  }
  SECTION("errors") {
    CHECK_THROWS_AS(solve_implicit(Matrix::identity(2), Vector{0, 0}), NoUniqueSolutionError);
    CHECK_THROWS_AS(solve_implicit(Matrix::null(2), Vector{0}), ShapeError);
  }
}

TEST_CASE("solver agrees with the truncated star", "[solver][property]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const Matrix a = testing::random_strictly_lower(rng, n);
    Vector b(n);
    for (auto& x : b) x = testing::random_scalar(rng);
    const auto cert = nilpotency_index(a);
    REQUIRE(cert.nilpotent());
    const Vector x = solve_implicit(a, b);
    REQUIRE(vec_add(mat_vec(a, x), b) == x);
    REQUIRE(mat_vec(star_truncated(a, *cert.index), b) == x);
  }
}
