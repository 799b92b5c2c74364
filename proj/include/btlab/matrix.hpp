#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "finite_ring.hpp"

namespace btlab {

// Square matrix of ring codes, row-major.
struct Matrix {
  uint32_t n = 0;
  std::vector<uint32_t> a;

  Matrix() = default;
  explicit Matrix(uint32_t dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0) {}
  Matrix(uint32_t dim, std::vector<uint32_t> entries) : n(dim), a(std::move(entries)) {
    if (a.size() != static_cast<size_t>(n) * n) fail(ErrorKind::WrongShape, "matrix entries do not match its dimension");
  }
  uint32_t& operator()(uint32_t i, uint32_t j) { return a[i * n + j]; }
  uint32_t operator()(uint32_t i, uint32_t j) const { return a[i * n + j]; }
  bool operator==(const Matrix& o) const { return n == o.n && a == o.a; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool operator<(const Matrix& o) const { return n != o.n ? n < o.n : a < o.a; }
};

inline Matrix mat_identity(uint32_t n) {
  Matrix m(n);
  for (uint32_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

inline Matrix mat_mul(const FiniteRing& R, const Matrix& x, const Matrix& y) {
  if (x.n != y.n) fail(ErrorKind::WrongShape, "matrix dimensions differ");
  Matrix z(x.n);
  for (uint32_t i = 0; i < x.n; ++i)
    for (uint32_t k = 0; k < x.n; ++k) {
      uint32_t s = x(i, k);
      if (!s) continue;
      for (uint32_t j = 0; j < x.n; ++j) z(i, j) = R.add(z(i, j), R.mul(s, y(k, j)));
    }
  return z;
}

inline Matrix mat_trunc(const FiniteRing& R, const Matrix& x, uint32_t level) {
  Matrix z = x;
  for (auto& v : z.a) v = R.trunc(v, level);
  return z;
}

// Minimum entry valuation.
inline uint32_t mat_val(const FiniteRing& R, const Matrix& x) {
  uint32_t v = R.levels;
  for (uint32_t c : x.a) v = std::min(v, R.val(c));
  return v;
}

// Determinant over a commutative ring by row-wise expansion over column subsets.
inline uint32_t det(const FiniteRing& R, const Matrix& m) {
  uint32_t n = m.n;
  if (n > 16) fail(ErrorKind::WrongShape, "determinant dimension too large");
  std::vector<uint32_t> f(1u << n, 0);
  f[0] = 1;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!f[mask]) continue;
    uint32_t k = static_cast<uint32_t>(__builtin_popcount(mask));
    if (k == n) continue;
    for (uint32_t c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      uint32_t t = R.mul(f[mask], m(k, c));
      if (__builtin_popcount(mask >> (c + 1)) & 1) t = R.neg(t);
      f[mask | (1u << c)] = R.add(f[mask | (1u << c)], t);
    }
  }
  return f[(1u << n) - 1];
}

}  // namespace btlab
