#pragma once

/**
 * @file maxplus.hpp
 * @brief Max-plus (max, +) semiring scalars and dense matrices.
 *
 * The carrier set is R u {eps} with eps = -inf. Addition is max with eps
 * as its neutral element, multiplication is ordinary + with unit e = 0 and
 * eps absorbing. Matrices are dense, row-major and rectangular; column
 * vectors are n x 1 matrices, or plain `Vector`s for the fast paths.
 *
 * Every matrix operation checks dimensions and throws ShapeError on a
 * mismatch. Equality is exact.
 */

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxtandem {

class Scalar {
 public:
  // Default-constructed scalars are eps, the semiring zero.
  constexpr Scalar() = default;
  constexpr Scalar(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr Scalar epsilon() { return Scalar{}; }
  static constexpr Scalar unit() { return Scalar{0.0}; }

  constexpr double value() const { return v_; }
  constexpr bool is_epsilon() const {
    return v_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const {
    return v_ > -std::numeric_limits<double>::infinity() &&
           v_ < std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(Scalar, Scalar) = default;
  friend constexpr auto operator<=>(Scalar a, Scalar b) {
    return a.v_ <=> b.v_;
  }

 private:
  double v_ = -std::numeric_limits<double>::infinity();
};

inline constexpr Scalar kEpsilon = Scalar::epsilon();
inline constexpr Scalar kUnit = Scalar::unit();

constexpr Scalar oplus(Scalar x, Scalar y) { return x < y ? y : x; }

// eps is checked before adding so that eps never meets a finite operand in
// floating-point arithmetic.
constexpr Scalar otimes(Scalar x, Scalar y) {
  if (x.is_epsilon() || y.is_epsilon()) return kEpsilon;
  return Scalar{x.value() + y.value()};
}

// Multiplicative inverse -x; throws NotInvertibleError for eps.
Scalar inverse(Scalar x);

// Number of scalar semiring operations performed by an instrumented
// routine. Operations involving eps are counted like any other.
struct OpCounter {
  std::uint64_t oplus = 0;
  std::uint64_t otimes = 0;

  std::uint64_t total() const { return oplus + otimes; }
  OpCounter& operator+=(const OpCounter& o) {
    oplus += o.oplus;
    otimes += o.otimes;
    return *this;
  }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

using Vector = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  // rows x cols matrix filled with eps.
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static Matrix null(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
  }
  static Matrix null(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const Scalar> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  Scalar operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  Scalar& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  std::span<const Scalar> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<const Scalar> entries() const { return entries_; }

  // Copy of column j as a Vector.
  Vector column_vector(std::size_t j = 0) const;

  Matrix transpose() const;
  Matrix block(std::size_t row0, std::size_t col0, std::size_t rows,
               std::size_t cols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& b);

  bool is_null() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix mat_mul(const Matrix& a, const Matrix& b, OpCounter* ops = nullptr);
// Matrix-vector product over a plain vector.
Vector mat_vec(const Matrix& a, std::span<const Scalar> x,
               OpCounter* ops = nullptr);
// Entrywise max of two equal-length vectors.
Vector vec_add(std::span<const Scalar> x, std::span<const Scalar> y);
// a (x) m: the scalar multiplied into every entry.
Matrix scale(Scalar a, const Matrix& m);
Matrix mat_pow(const Matrix& a, std::size_t p);

Matrix diag(std::span<const Scalar> v);
inline Matrix diag(std::initializer_list<Scalar> v) {
  return diag(std::span<const Scalar>(v.begin(), v.size()));
}
Matrix diag_inverse(const Matrix& d);

// a <= b entrywise.
bool dominated_by(const Matrix& a, const Matrix& b);

// Tolerance comparison for float-valued data. eps matches only eps; finite
// entries match when |x - y| <= abs_tol + rel_tol * max(|x|, |y|).
bool approx_equal(const Matrix& a, const Matrix& b, double rel_tol,
                  double abs_tol = 0.0);

// Locale-independent text form with 17 significant digits; eps prints as
// the token `eps`.
std::string format_scalar(Scalar x);
// Inverse of format_scalar; accepts any decimal numeral or `eps`.
Scalar parse_scalar(std::string_view token);

// Fixture format: one row per line, whitespace-separated entries, `eps`
// for the null element. Blank lines and lines starting with '#' are
// skipped.
Matrix parse_matrix(std::string_view text);
std::string format_matrix(const Matrix& m);

}  // namespace maxtandem
