#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace btlab {

// Polynomials over a finite field, coefficients low-to-high as field codes.
using FieldPoly = std::vector<uint32_t>;

// Table-driven finite field F_q with q = p^n. Codes are the base-p digits of the
// coordinate vector in the chosen F_p-basis.
class FiniteField {
 public:
  uint32_t p = 0;
  uint32_t n = 0;
  uint32_t q = 0;

  // F_p[x]/(f) with f monic of degree n, coefficients low-to-high in [0, p).
  static std::shared_ptr<const FiniteField> prime_extension(uint32_t p, std::vector<int64_t> f) {
    if (p < 2) fail(ErrorKind::BadInput, "characteristic must be prime");
    for (uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) fail(ErrorKind::BadInput, "p is not prime");
    while (f.size() > 1 && mod(f.back(), p) == 0) f.pop_back();
    if (f.size() < 2) fail(ErrorKind::BadInput, "residue polynomial must have degree >= 1");
    auto F = std::make_shared<FiniteField>();
    F->p = p;
    F->n = static_cast<uint32_t>(f.size() - 1);
    F->q = ipow(p, F->n);
    int64_t lead_inv = inv_mod(mod(f.back(), p), p);
    std::vector<int64_t> monic(f.size());
    for (size_t i = 0; i < f.size(); ++i) monic[i] = mod(f[i] * lead_inv, p);
    F->fill_tables([&](uint32_t a, uint32_t b) {
      uint32_t n = F->n;
      std::vector<int64_t> c(2 * n, 0);
      auto A = F->coords(a), B = F->coords(b);
      for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) c[i + j] = (c[i + j] + A[i] * B[j]) % p;
      for (int64_t k = 2 * static_cast<int64_t>(n) - 2; k >= static_cast<int64_t>(n); --k) {
        int64_t t = c[k];
        if (!t) continue;
        for (uint32_t i = 0; i <= n; ++i) c[k - n + i] = mod(c[k - n + i] - t * monic[i], p);
      }
      c.resize(n);
      return F->from_coords(c);
    });
    if (!F->is_field()) fail(ErrorKind::ReducibleExtension, "residue polynomial is not irreducible");
    return F;
  }

  // base[y]/(g) with g monic over base and irreducible.
  static std::shared_ptr<const FiniteField> extension(const FiniteField& base, const FieldPoly& g) {
    if (g.size() < 2 || g.back() != 1) fail(ErrorKind::BadInput, "extension polynomial must be monic");
    uint32_t m = static_cast<uint32_t>(g.size() - 1);
    auto F = std::make_shared<FiniteField>();
    F->p = base.p;
    F->n = base.n * m;
    F->q = ipow(base.q, m);
    uint32_t bq = base.q;
    auto split = [bq, m](uint32_t a) {
      FieldPoly v(m);
      for (uint32_t i = 0; i < m; ++i, a /= bq) v[i] = a % bq;
      return v;
    };
    F->fill_tables([&](uint32_t a, uint32_t b) {
      FieldPoly A = split(a), B = split(b);
      FieldPoly c(2 * m, 0);
      for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = 0; j < m; ++j) c[i + j] = base.add(c[i + j], base.mul(A[i], B[j]));
      for (int64_t k = 2 * static_cast<int64_t>(m) - 2; k >= static_cast<int64_t>(m); --k) {
        uint32_t t = c[k];
        if (!t) continue;
        for (uint32_t i = 0; i <= m; ++i) c[k - m + i] = base.sub(c[k - m + i], base.mul(t, g[i]));
      }
      uint32_t code = 0;
      for (int64_t i = m - 1; i >= 0; --i) code = code * bq + c[i];
      return code;
    });
    if (!F->is_field()) fail(ErrorKind::ReducibleExtension, "extension polynomial is not irreducible");
    return F;
  }

  uint32_t add(uint32_t a, uint32_t b) const { return add_[a * q + b]; }
  uint32_t mul(uint32_t a, uint32_t b) const { return mul_[a * q + b]; }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t inv(uint32_t a) const {
    if (a == 0) fail(ErrorKind::NonUnitInverse, "zero has no inverse in the residue field");
    return inv_[a];
  }
  uint32_t pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  // a^(p^k)
  uint32_t frob(uint32_t a, uint32_t k = 1) const {
    for (uint32_t i = 0; i < k; ++i) a = pow(a, p);
    return a;
  }

  std::vector<int64_t> coords(uint32_t a) const {
    std::vector<int64_t> v(n);
    for (uint32_t i = 0; i < n; ++i, a /= p) v[i] = a % p;
    return v;
  }
  uint32_t from_coords(const std::vector<int64_t>& c) const {
    uint32_t code = 0;
    for (int64_t i = static_cast<int64_t>(n) - 1; i >= 0; --i)
      code = code * p + static_cast<uint32_t>(mod(i < static_cast<int64_t>(c.size()) ? c[i] : 0, p));
    return code;
  }
  // Image of an integer under Z -> F_p -> F_q.
  uint32_t from_int(int64_t k) const { return static_cast<uint32_t>(mod(k, p)); }

  // Generator of the multiplicative group (smallest code).
  uint32_t primitive() const { return primitive_; }
  uint32_t log(uint32_t a) const {
    if (a == 0) fail(ErrorKind::BadInput, "log of zero");
    return log_[a];
  }
  uint32_t exp(uint64_t k) const { return exp_[k % (q - 1)]; }

  // Minimal polynomial over F_p of a, monic, coefficients low-to-high in [0, p).
  std::vector<uint32_t> min_poly_prime(uint32_t a) const {
    std::vector<uint32_t> conj{a};
    for (uint32_t b = frob(a); b != a; b = frob(b)) conj.push_back(b);
    FieldPoly poly{1};
    for (uint32_t c : conj) {
      FieldPoly next(poly.size() + 1, 0);
      for (size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] = add(next[i + 1], poly[i]);
        next[i] = sub(next[i], mul(poly[i], c));
      }
      poly = next;
    }
    return poly;  // coefficients lie in the prime field, whose codes are 0..p-1
  }
  // Roots in this field of a polynomial with prime-field coefficients.
  std::vector<uint32_t> roots_prime(const std::vector<uint32_t>& f) const {
    std::vector<uint32_t> out;
    for (uint32_t x = 0; x < q; ++x) {
      uint32_t v = 0;
      for (size_t i = f.size(); i-- > 0;) v = add(mul(v, x), f[i]);
      if (v == 0) out.push_back(x);
    }
    return out;
  }

  // Polynomial helpers over this field.
  FieldPoly poly_rem(FieldPoly a, const FieldPoly& b) const {
    trim(a);
    uint32_t lead_inv = inv(b.back());
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
      uint32_t t = mul(a.back(), lead_inv);
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[shift + i] = sub(a[shift + i], mul(t, b[i]));
      trim(a);
      if (a.size() < b.size()) break;
    }
    return a;
  }
  bool is_irreducible(const FieldPoly& g) const {
    size_t d = g.size() - 1;
    if (d == 0) return false;
    for (size_t k = 1; 2 * k <= d; ++k) {
      uint64_t count = 1;
      for (size_t i = 0; i < k; ++i) count *= q;
      for (uint64_t idx = 0; idx < count; ++idx) {
        FieldPoly f(k + 1);
        uint64_t t = idx;
        for (size_t i = 0; i < k; ++i, t /= q) f[i] = static_cast<uint32_t>(t % q);
        f[k] = 1;
        FieldPoly r = poly_rem(g, f);
        if (r.size() == 1 && r[0] == 0) return false;
      }
    }
    return true;
  }
  // Lexicographically smallest monic irreducible polynomial of degree d.
  FieldPoly smallest_irreducible(uint32_t d) const {
    uint64_t count = 1;
    for (uint32_t i = 0; i < d; ++i) count *= q;
    for (uint64_t idx = 0; idx < count; ++idx) {
      FieldPoly f(d + 1);
      uint64_t t = idx;
      for (uint32_t i = 0; i < d; ++i, t /= q) f[i] = static_cast<uint32_t>(t % q);
      f[d] = 1;
      if (is_irreducible(f)) return f;
    }
    fail(ErrorKind::ReducibleExtension, "no irreducible polynomial found");
  }

  std::string name() const { return "F" + std::to_string(q); }

  static int64_t mod(int64_t a, int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
  }
  static uint32_t ipow(uint32_t b, uint32_t e) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < e; ++i) {
      r *= b;
      if (r > (1ull << 31)) fail(ErrorKind::BudgetExceeded, "field or ring too large");
    }
    return static_cast<uint32_t>(r);
  }
  static int64_t inv_mod(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1) {
      int64_t t = g / a1;
      g -= t * a1;
      std::swap(g, a1);
      x -= t * x1;
      std::swap(x, x1);
    }
    if (g != 1) fail(ErrorKind::NonUnitInverse, "not invertible modulo m");
    return mod(x, m);
  }

 private:
  std::vector<uint32_t> add_, mul_, neg_, inv_, log_, exp_;
  uint32_t primitive_ = 1;

  void trim(FieldPoly& a) const {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
  }

  template <class Mul>
  void fill_tables(Mul&& mulf) {
    add_.assign(static_cast<size_t>(q) * q, 0);
    mul_.assign(static_cast<size_t>(q) * q, 0);
    neg_.assign(q, 0);
    for (uint32_t a = 0; a < q; ++a) {
      auto A = coords(a);
      std::vector<int64_t> na(n);
      for (uint32_t i = 0; i < n; ++i) na[i] = mod(-A[i], p);
      neg_[a] = from_coords(na);
      for (uint32_t b = 0; b < q; ++b) {
        auto B = coords(b);
        std::vector<int64_t> s(n);
        for (uint32_t i = 0; i < n; ++i) s[i] = (A[i] + B[i]) % p;
        add_[a * q + b] = from_coords(s);
      }
    }
    for (uint32_t a = 0; a < q; ++a)
      for (uint32_t b = a; b < q; ++b) mul_[a * q + b] = mul_[b * q + a] = mulf(a, b);
  }

  bool is_field() {
    inv_.assign(q, 0);
    for (uint32_t a = 1; a < q; ++a) {
      for (uint32_t b = 1; b < q; ++b)
        if (mul(a, b) == 1) {
          inv_[a] = b;
          break;
        }
      if (inv_[a] == 0) return false;
    }
    log_.assign(q, 0);
    exp_.assign(q - 1, 1);
    for (uint32_t g = 1; g < q; ++g) {
      uint32_t x = 1, order = 0;
      do {
        x = mul(x, g);
        ++order;
      } while (x != 1);
      if (order == q - 1 || q == 2) {
        primitive_ = g;
        x = 1;
        for (uint32_t k = 0; k + 1 < q; ++k) {
          exp_[k] = x;
          log_[x] = k;
          x = mul(x, g);
        }
        return true;
      }
    }
    return false;
  }
};

using FieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace btlab
