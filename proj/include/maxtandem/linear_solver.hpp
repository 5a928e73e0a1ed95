#pragma once

// Implicit linear equations x = A x + b over the max-plus semiring for
// nilpotent A (some power of A is the null matrix).

#include <cstddef>
#include <optional>
#include <span>

#include "maxtandem/maxplus.hpp"

namespace maxtandem {

struct NilpotencyCertificate {
  // Least p with A^p = null, or empty when no such p <= bound exists.
  std::optional<std::size_t> index;
  std::size_t bound = 0;

  bool nilpotent() const { return index.has_value(); }
};

// Searches p = 1..bound by explicit power iteration.
NilpotencyCertificate nilpotency_index(const Matrix& a, std::size_t bound);
inline NilpotencyCertificate nilpotency_index(const Matrix& a) {
  return nilpotency_index(a, a.rows() == 0 ? 1 : a.rows());
}

// E + A + A^2 + ... + A^(p-1). Throws DomainError for p = 0.
Matrix star_truncated(const Matrix& a, std::size_t p, OpCounter* ops = nullptr);

// Unique solution of x = A x + b, computed Horner-style as
// x <- b; repeat p-1 times x <- A x + b, where p is the nilpotency index of
// A. Throws NoUniqueSolutionError when A is not nilpotent within its order.
Vector solve_implicit(const Matrix& a, std::span<const Scalar> b);

}  // namespace maxtandem
