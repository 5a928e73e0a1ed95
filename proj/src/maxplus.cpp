#include "maxtandem/maxplus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "maxtandem/errors.hpp"

namespace maxtandem {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": operands " + shape_of(a) + " and " +
                     shape_of(b) + " differ in shape");
  }
}

}  // namespace

Scalar inverse(Scalar x) {
  if (x.is_epsilon()) throw NotInvertibleError("eps has no inverse");
  return Scalar{-x.value()};
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, kEpsilon) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = kUnit;
  return m;
}

Matrix Matrix::column(std::span<const Scalar> v) {
  Matrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.entries_.begin());
  return m;
}

Vector Matrix::column_vector(std::size_t j) const {
  if (j >= cols_) throw ShapeError("column index out of range");
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t rows,
                     std::size_t cols) const {
  if (row0 + rows > rows_ || col0 + cols > cols_)
    throw ShapeError("block exceeds matrix bounds");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  return b;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& b) {
  if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_)
    throw ShapeError("block exceeds matrix bounds");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

bool Matrix::is_null() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Scalar x) { return x.is_epsilon(); });
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "mat_add");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = oplus(a(i, j), b(i, j));
  return c;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, OpCounter* ops) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mat_mul: " + shape_of(a) + " times " + shape_of(b));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar acc = kEpsilon;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc = oplus(acc, otimes(a(i, k), b(k, j)));
      }
      c(i, j) = acc;
    }
  }
  if (ops != nullptr && a.cols() > 0) {
    const std::uint64_t cells = a.rows() * b.cols();
    ops->otimes += cells * a.cols();
    ops->oplus += cells * (a.cols() - 1);
  }
  return c;
}

Vector mat_vec(const Matrix& a, std::span<const Scalar> x, OpCounter* ops) {
  if (a.cols() != x.size()) {
    throw ShapeError("mat_vec: " + shape_of(a) + " times vector of length " +
                     std::to_string(x.size()));
  }
  Vector y(a.rows(), kEpsilon);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    Scalar acc = kEpsilon;
    for (std::size_t k = 0; k < r.size(); ++k) acc = oplus(acc, otimes(r[k], x[k]));
    y[i] = acc;
  }
  if (ops != nullptr && a.cols() > 0) {
    ops->otimes += a.rows() * a.cols();
    ops->oplus += a.rows() * (a.cols() - 1);
  }
  return y;
}

Vector vec_add(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size()) throw ShapeError("vec_add: length mismatch");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = oplus(x[i], y[i]);
  return z;
}

Matrix scale(Scalar a, const Matrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = otimes(a, m(i, j));
  return r;
}

Matrix mat_pow(const Matrix& a, std::size_t p) {
  if (!a.is_square()) throw ShapeError("mat_pow: matrix " + shape_of(a) + " is not square");
  Matrix r = Matrix::identity(a.rows());
  for (std::size_t i = 0; i < p; ++i) r = mat_mul(r, a);
  return r;
}

Matrix diag(std::span<const Scalar> v) {
  Matrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

Matrix diag_inverse(const Matrix& d) {
  if (!d.is_square()) throw ShapeError("diag_inverse: matrix is not square");
  Matrix inv(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i == j) {
        if (d(i, i).is_epsilon())
          throw NotInvertibleError("diag_inverse: eps on the diagonal at " +
                                   std::to_string(i + 1));
        inv(i, i) = inverse(d(i, i));
      } else if (!d(i, j).is_epsilon()) {
        throw NotInvertibleError("diag_inverse: off-diagonal entry (" +
                                 std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") is not eps");
      }
    }
  }
  return inv;
}

bool dominated_by(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "dominated_by");
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (ea[i] > eb[i]) return false;
  return true;
}

bool approx_equal(const Matrix& a, const Matrix& b, double rel_tol,
                  double abs_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    const Scalar x = ea[i];
    const Scalar y = eb[i];
    if (x.is_epsilon() || y.is_epsilon()) {
      if (x != y) return false;
      continue;
    }
    const double diff = std::abs(x.value() - y.value());
    const double mag = std::max(std::abs(x.value()), std::abs(y.value()));
    if (diff > abs_tol + rel_tol * mag) return false;
  }
  return true;
}

std::string format_scalar(Scalar x) {
  if (x.is_epsilon()) return "eps";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, x.value(), std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Scalar parse_scalar(std::string_view token) {
  if (token == "eps") return kEpsilon;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (token.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw DomainError("malformed numeral '" + std::string(token) + "'");
  }
  return Scalar{v};
}

Matrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Scalar>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<Scalar> row;
    while (ls >> tok) {
      if (row.empty() && tok.front() == '#') break;
      row.push_back(parse_scalar(tok));
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ShapeError("matrix text: row " + std::to_string(rows.size() + 1) +
                       " has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_scalar(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace maxtandem
