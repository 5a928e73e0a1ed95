#include "maxtandem/linear_solver.hpp"

#include <string>

#include "maxtandem/errors.hpp"

namespace maxtandem {

NilpotencyCertificate nilpotency_index(const Matrix& a, std::size_t bound) {
  if (!a.is_square()) throw ShapeError("nilpotency_index: matrix is not square");
  if (bound == 0) throw DomainError("nilpotency_index: bound must be >= 1");
  NilpotencyCertificate cert;
  cert.bound = bound;
  Matrix power = a;
  for (std::size_t p = 1; p <= bound; ++p) {
    if (power.is_null()) {
      cert.index = p;
      break;
    }
    if (p < bound) power = mat_mul(power, a);
  }
  return cert;
}

Matrix star_truncated(const Matrix& a, std::size_t p, OpCounter* ops) {
  if (!a.is_square()) throw ShapeError("star_truncated: matrix is not square");
  if (p == 0) throw DomainError("star_truncated: p must be >= 1");
  Matrix sum = Matrix::identity(a.rows());
  Matrix power = sum;
  for (std::size_t i = 1; i < p; ++i) {
    power = mat_mul(power, a, ops);
    sum = mat_add(sum, power);
    if (ops != nullptr) ops->oplus += a.rows() * a.cols();
  }
  return sum;
}

Vector solve_implicit(const Matrix& a, std::span<const Scalar> b) {
  if (!a.is_square()) throw ShapeError("solve_implicit: matrix is not square");
  if (b.size() != a.rows()) {
    throw ShapeError("solve_implicit: right-hand side has length " +
                     std::to_string(b.size()) + ", expected " +
                     std::to_string(a.rows()));
  }
  if (a.rows() == 0) return {};
  const auto cert = nilpotency_index(a);
  if (!cert.nilpotent()) {
    throw NoUniqueSolutionError("solve_implicit: matrix is not nilpotent within order " +
                                std::to_string(a.rows()));
  }
  Vector x(b.begin(), b.end());
  for (std::size_t step = 1; step < *cert.index; ++step) {
    x = vec_add(mat_vec(a, x), b);
  }
  return x;
}

}  // namespace maxtandem
