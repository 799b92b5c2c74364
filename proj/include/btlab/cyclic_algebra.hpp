#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extension.hpp"
#include "finite_ring.hpp"
#include "matrix.hpp"
#include "trunc_ring.hpp"

namespace btlab {

// Cyclic algebra (E/K, sigma^hasse, pi_K) of degree d: x u = u sigma^hasse(x), u^d = pi_K.
struct CyclicAlgebraSpec {
  LocalFieldSpec base;
  uint32_t degree = 1;
  int64_t hasse = 0;
  std::string name;

  uint32_t radius_cap() const { return degree * base.radius_cap(); }
};

class CyclicAlgebra;
using AlgebraPtr = std::shared_ptr<const CyclicAlgebra>;

// sum_i u^i x_i with x_i in O_E / m_E^r.
struct AlgebraElem {
  AlgebraPtr algebra;
  std::vector<uint32_t> coords;
  bool operator==(const AlgebraElem& o) const { return algebra == o.algebra && coords == o.coords; }
  bool operator!=(const AlgebraElem& o) const { return !(*this == o); }
};

// O_D / m_D^level. Coordinate i lives in O_E / m_E^ceil((level - i) / d).
class CyclicAlgebra : public std::enable_shared_from_this<CyclicAlgebra> {
 public:
  CyclicAlgebraSpec spec;
  uint32_t d = 1;
  uint32_t h = 0;      // hasse mod d
  uint32_t level = 0;  // in units omega(pi_D) = 1
  uint32_t r = 0;      // level of E
  TruncRing K;
  RingPtr E;
  uint32_t pi = 0;     // pi_K as an element of E
  std::vector<uint32_t> coord_level;

  static AlgebraPtr build(const CyclicAlgebraSpec& s, uint32_t level) {
    if (s.degree < 1) fail(ErrorKind::BadInput, "degree must be positive");
    int64_t hm = ((s.hasse % s.degree) + s.degree) % s.degree;
    if (std::gcd<int64_t, int64_t>(hm, s.degree) != 1) fail(ErrorKind::BadHasse, "hasse invariant must be a unit mod d");
    if (level < 1) fail(ErrorKind::BadLevel, "level must be positive");
    auto A = std::shared_ptr<CyclicAlgebra>(new CyclicAlgebra());
    A->spec = s;
    A->d = s.degree;
    A->h = static_cast<uint32_t>(hm);
    A->level = level;
    A->r = (level + A->d - 1) / A->d;
    if (A->r > s.base.radius_cap()) fail(ErrorKind::RadiusExceedsPrecision, "algebra level exceeds the base precision");
    A->K = make_ring(s.base, A->r);
    const FiniteRing& Kr = *A->K.ring;
    FieldPoly f = Kr.residue->smallest_irreducible(A->d);
    std::vector<uint32_t> g(f.begin(), f.end());  // Teichmuller lift: code c is tau(c)
    std::string label = (s.name.empty() ? std::string("E") : s.name + ".E") + "/m^" + std::to_string(A->r);
    A->E = build_extension(A->K.ring, g, false, A->r, label);
    A->pi = A->E->lookup(static_cast<const ExtensionModel&>(A->E->model()).normal(pad_rep(A->d, Kr.uniformizer())));
    for (uint32_t i = 0; i < A->d; ++i) A->coord_level.push_back(level > i ? (level - i + A->d - 1) / A->d : 0);
    const FiniteField& FE = *A->E->residue;
    uint32_t qk = Kr.residue->n;
    A->sigma_.assign(A->d, std::vector<uint32_t>(A->E->size));
    for (uint32_t x = 0; x < A->E->size; ++x) {
      A->sigma_[0][x] = x;
      auto dg = A->E->digits(x);
      for (uint32_t k = 1; k < A->d; ++k) {
        for (auto& c : dg) c = FE.frob(c, qk);
        A->sigma_[k][x] = A->E->from_digits(dg);
      }
    }
    return A;
  }

  // sigma^k on O_E (digitwise residue Frobenius).
  uint32_t sigma(uint32_t x, uint32_t k = 1) const { return sigma_[k % d][x]; }

  AlgebraElem zero() const { return {shared_from_this(), std::vector<uint32_t>(d, 0)}; }
  AlgebraElem one() const {
    auto x = zero();
    x.coords[0] = 1;
    return x;
  }
  AlgebraElem u() const {
    auto x = zero();
    if (d > 1) x.coords[1] = E->trunc(1, coord_level[1]);
    else x.coords[0] = E->trunc(pi, coord_level[0]);
    return x;
  }
  AlgebraElem from_coords(std::vector<uint32_t> c) const {
    if (c.size() != d) fail(ErrorKind::WrongShape, "algebra element needs d coordinates");
    for (uint32_t i = 0; i < d; ++i) {
      if (c[i] >= E->size) fail(ErrorKind::BadInput, "coordinate outside O_E");
      c[i] = E->trunc(c[i], coord_level[i]);
    }
    return {shared_from_this(), std::move(c)};
  }
  // Image of O_E in coordinate 0.
  AlgebraElem embed(uint32_t e) const {
    auto x = zero();
    x.coords[0] = E->trunc(e, coord_level[0]);
    return x;
  }

  std::vector<uint32_t> add(const std::vector<uint32_t>& x, const std::vector<uint32_t>& y) const {
    std::vector<uint32_t> z(d);
    for (uint32_t i = 0; i < d; ++i) z[i] = E->trunc(E->add(x[i], y[i]), coord_level[i]);
    return z;
  }
  std::vector<uint32_t> neg(const std::vector<uint32_t>& x) const {
    std::vector<uint32_t> z(d);
    for (uint32_t i = 0; i < d; ++i) z[i] = E->trunc(E->neg(x[i]), coord_level[i]);
    return z;
  }
  // (u^i a)(u^j b) = u^(i+j) sigma^(h j)(a) b, with u^d = pi_K.
  std::vector<uint32_t> mul(const std::vector<uint32_t>& x, const std::vector<uint32_t>& y) const {
    std::vector<uint32_t> z(d, 0);
    for (uint32_t i = 0; i < d; ++i) {
      if (!x[i]) continue;
      for (uint32_t j = 0; j < d; ++j) {
        if (!y[j]) continue;
        uint32_t t = E->mul(sigma(x[i], h * j), y[j]);
        uint32_t k = i + j;
        if (k >= d) {
          k -= d;
          t = E->mul(pi, t);
        }
        z[k] = E->add(z[k], t);
      }
    }
    for (uint32_t i = 0; i < d; ++i) z[i] = E->trunc(z[i], coord_level[i]);
    return z;
  }

  // omega_D(x) = min_i (d omega_E(x_i) + i), capped at the level.
  uint32_t val(const std::vector<uint32_t>& x) const {
    uint32_t v = level;
    for (uint32_t i = 0; i < d; ++i)
      if (x[i]) v = std::min(v, d * E->val(x[i]) + i);
    return v;
  }

  // phi(x)_(m,i) = sigma^(h i)(x_(m-i mod d)), times pi_K above the diagonal.
  Matrix embed_matrix(const std::vector<uint32_t>& x) const {
    Matrix M(d);
    for (uint32_t m = 0; m < d; ++m)
      for (uint32_t i = 0; i < d; ++i) {
        uint32_t c = sigma(x[(m + d - i) % d], h * i);
        if (m < i) c = E->mul(pi, c);
        M(m, i) = c;
      }
    return M;
  }

  // Element of O_E fixed by sigma, as an element of O_K.
  uint32_t project_to_base(uint32_t e) const {
    const auto& rep = E->rep(e);
    for (uint32_t j = 1; j < rep.size(); ++j)
      if (rep[j] != 0) fail(ErrorKind::BadInput, "element does not lie in O_K");
    return static_cast<uint32_t>(rep[0]);
  }

  // det of the (n d) x (n d) matrix of phi-blocks of an n x n matrix over O_D.
  uint32_t reduced_norm(const std::vector<std::vector<uint32_t>>& g, uint32_t n) const {
    if (g.size() != static_cast<size_t>(n) * n) fail(ErrorKind::WrongShape, "reduced norm needs an n x n matrix");
    Matrix big(n * d);
    for (uint32_t a = 0; a < n; ++a)
      for (uint32_t b = 0; b < n; ++b) {
        Matrix blk = embed_matrix(g[a * n + b]);
        for (uint32_t i = 0; i < d; ++i)
          for (uint32_t j = 0; j < d; ++j) big(a * d + i, b * d + j) = blk(i, j);
      }
    return project_to_base(det(*E, big));
  }

  // The digit-coded ring O_D / m_D^level (at most kMaxRingSize elements).
  RingPtr ring() const {
    std::lock_guard<std::mutex> lock(*mutex_);
    if (!ring_) ring_ = build_ring();
    return ring_;
  }
  uint32_t code(const std::vector<uint32_t>& x) const { return ring()->lookup(to_rep(x)); }
  std::vector<uint32_t> coords_of(uint32_t c) const {
    const auto& rep = ring()->rep(c);
    return std::vector<uint32_t>(rep.begin(), rep.end());
  }

 private:
  std::vector<std::vector<uint32_t>> sigma_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  mutable RingPtr ring_;

  CyclicAlgebra() = default;

  static RingModel::Rep pad_rep(uint32_t m, uint32_t a) {
    RingModel::Rep r(m, 0);
    r[0] = a;
    return r;
  }
  static RingModel::Rep to_rep(const std::vector<uint32_t>& x) { return RingModel::Rep(x.begin(), x.end()); }
  static std::vector<uint32_t> from_rep(const RingModel::Rep& x) { return std::vector<uint32_t>(x.begin(), x.end()); }

  struct Model : RingModel {
    std::shared_ptr<const CyclicAlgebra> A;
    Rep zero() const override { return Rep(A->d, 0); }
    Rep one() const override { return to_rep(A->one().coords); }
    Rep teich(uint32_t a) const override { return to_rep(A->embed(a).coords); }
    Rep unif() const override { return to_rep(A->u().coords); }
    Rep add(const Rep& a, const Rep& b) const override { return to_rep(A->add(from_rep(a), from_rep(b))); }
    Rep neg(const Rep& a) const override { return to_rep(A->neg(from_rep(a))); }
    Rep mul(const Rep& a, const Rep& b) const override { return to_rep(A->mul(from_rep(a), from_rep(b))); }
  };

  RingPtr build_ring() const {
    auto M = std::make_shared<Model>();
    M->A = shared_from_this();
    std::string label = (spec.name.empty() ? std::string("D") : spec.name) + "/m^" + std::to_string(level);
    return FiniteRing::build(M, E->residue, level, d == 1, label);
  }
};

// Public context at level r d.
inline AlgebraPtr make_algebra(const CyclicAlgebraSpec& s, uint32_t level) {
  if (s.degree < 1 || level % s.degree != 0) fail(ErrorKind::BadLevel, "algebra level must be a multiple of d");
  return CyclicAlgebra::build(s, level);
}
// Any level, including those not divisible by d.
inline AlgebraPtr make_algebra_truncation(const CyclicAlgebraSpec& s, uint32_t level) {
  return CyclicAlgebra::build(s, level);
}

inline void same_algebra(const AlgebraElem& x, const AlgebraElem& y) {
  if (x.algebra != y.algebra) fail(ErrorKind::MixedContexts, "elements belong to different algebras");
}
inline AlgebraElem alg_add(const AlgebraElem& x, const AlgebraElem& y) {
  same_algebra(x, y);
  return {x.algebra, x.algebra->add(x.coords, y.coords)};
}
inline AlgebraElem alg_mul(const AlgebraElem& x, const AlgebraElem& y) {
  same_algebra(x, y);
  return {x.algebra, x.algebra->mul(x.coords, y.coords)};
}
inline Matrix embed_matrix(const AlgebraElem& x) { return x.algebra->embed_matrix(x.coords); }
inline uint32_t alg_val(const AlgebraElem& x) { return x.algebra->val(x.coords); }

// Nrd of a 2 x 2 matrix over O_D, as an element of O_K / m_K^r.
inline RingElem reduced_norm(const std::vector<AlgebraElem>& g) {
  if (g.size() != 4) fail(ErrorKind::WrongShape, "reduced norm takes a 2 x 2 matrix");
  const auto& A = g[0].algebra;
  std::vector<std::vector<uint32_t>> c;
  for (const auto& x : g) {
    same_algebra(g[0], x);
    c.push_back(x.coords);
  }
  return {A->K.ring, A->reduced_norm(c, 2)};
}

inline bool same_field_spec(const LocalFieldSpec& a, const LocalFieldSpec& b) {
  if (a.tag != b.tag || a.p != b.p || a.n != b.n || a.e != b.e || a.res_poly != b.res_poly) return false;
  if (a.eisenstein.size() != b.eisenstein.size()) return false;
  for (size_t i = 0; i < a.eisenstein.size(); ++i) {
    const auto& x = a.eisenstein[i];
    const auto& y = b.eisenstein[i];
    if (x.is_integer != y.is_integer || x.integer != y.integer || x.digits != y.digits) return false;
  }
  return true;
}

// Largest level at which both base fields are tabulable and within precision.
inline uint32_t comparison_level(const LocalFieldSpec& a, const LocalFieldSpec& b) {
  uint32_t cap = std::min(a.radius_cap(), b.radius_cap());
  uint32_t q = std::max(a.residue_cardinality(), b.residue_cardinality());
  uint32_t L = 0;
  uint64_t size = 1;
  while (L < cap && size * q <= kMaxRingSize) {
    size *= q;
    ++L;
  }
  return L;
}

// Same degree, hasse = +-hasse mod d, and isomorphic base rings.
inline bool hasse_equivalent(const CyclicAlgebraSpec& a, const CyclicAlgebraSpec& b) {
  if (a.degree != b.degree || a.degree < 1) return false;
  int64_t d = a.degree;
  int64_t ha = ((a.hasse % d) + d) % d, hb = ((b.hasse % d) + d) % d;
  if (ha != hb && ha != (d - hb) % d) return false;
  if (same_field_spec(a.base, b.base)) return true;
  if (a.base.residue_cardinality() != b.base.residue_cardinality() || a.base.p != b.base.p) return false;
  uint32_t L = comparison_level(a.base, b.base);
  if (L == 0) return false;
  return ring_iso_search(make_ring(a.base, L), make_ring(b.base, L)).has_value();
}

}  // namespace btlab
