#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_field.hpp"
#include "finite_ring.hpp"

namespace btlab {

// One coefficient of an Eisenstein polynomial: either an integer (image of Z) or
// a finite Teichmuller digit expansion, each digit a length-n coordinate vector.
struct Coefficient {
  bool is_integer = false;
  int64_t integer = 0;
  std::vector<std::vector<int64_t>> digits;

  static Coefficient from_int(int64_t k) { return Coefficient{true, k, {}}; }
  static Coefficient from_digits(std::vector<std::vector<int64_t>> d) { return Coefficient{false, 0, std::move(d)}; }
};

// A local field K: Q_p-type (mixed_char) or F_q((X))-type (equal_char), given by its
// residue field and an Eisenstein polynomial E(T) = T^e + sum c_i T^i.
struct LocalFieldSpec {
  enum class Tag { mixed_char, equal_char };
  Tag tag = Tag::mixed_char;
  uint32_t p = 2;
  uint32_t n = 1;
  std::vector<int64_t> res_poly{0, 1};
  uint32_t e = 1;
  std::vector<Coefficient> eisenstein;  // c_0 .. c_{e-1}; empty for e = 1 means T - p
  uint32_t precision = 8;
  std::string name;

  uint32_t radius_cap() const { return e * precision; }
  uint32_t residue_cardinality() const { return FiniteField::ipow(p, n); }

  static LocalFieldSpec q_p(uint32_t p, uint32_t precision = 8) {
    LocalFieldSpec s;
    s.tag = Tag::mixed_char;
    s.p = p;
    s.precision = precision;
    s.name = "Q" + std::to_string(p);
    return s;
  }
  // Unramified extension of Q_p of degree n with residue polynomial f.
  static LocalFieldSpec unramified_qp(uint32_t p, std::vector<int64_t> f, uint32_t precision = 8) {
    LocalFieldSpec s = q_p(p, precision);
    s.n = static_cast<uint32_t>(f.size() - 1);
    s.res_poly = std::move(f);
    s.name = "Q" + std::to_string(p) + "^" + std::to_string(s.n);
    return s;
  }
  // Q_p(p^(1/k)): E(T) = T^k - p.
  static LocalFieldSpec root_of_p(uint32_t p, uint32_t k, uint32_t precision = 8) {
    LocalFieldSpec s = q_p(p, precision);
    s.e = k;
    s.eisenstein.assign(k, Coefficient::from_int(0));
    s.eisenstein[0] = Coefficient::from_int(-static_cast<int64_t>(p));
    s.name = k == 1 ? "Q" + std::to_string(p) : "Q" + std::to_string(p) + "(" + std::to_string(p) + "^1/" + std::to_string(k) + ")";
    return s;
  }
  // F_q((X)) with q = p^n given by the residue polynomial.
  static LocalFieldSpec laurent(uint32_t p, std::vector<int64_t> f = {0, 1}, uint32_t precision = 16) {
    LocalFieldSpec s;
    s.tag = Tag::equal_char;
    s.p = p;
    s.n = static_cast<uint32_t>(f.size() - 1);
    s.res_poly = std::move(f);
    s.precision = precision;
    s.name = "F" + std::to_string(s.residue_cardinality()) + "((X))";
    return s;
  }
};

namespace detail {

inline uint32_t ceil_div(int64_t a, int64_t b) { return a <= 0 ? 0 : static_cast<uint32_t>((a + b - 1) / b); }

// Unramified Witt-type ring W_N = (Z/p^N)[x]/(f).
struct WittRing {
  uint32_t p, n, N;
  int64_t modulus;
  std::vector<int64_t> f;  // monic lift, low-to-high, length n+1

  WittRing(uint32_t p_, const std::vector<int64_t>& res_poly, uint32_t N_) : p(p_), N(N_) {
    std::vector<int64_t> g = res_poly;
    while (g.size() > 1 && FiniteField::mod(g.back(), p) == 0) g.pop_back();
    n = static_cast<uint32_t>(g.size() - 1);
    modulus = 1;
    for (uint32_t i = 0; i < N; ++i) {
      if (modulus > (int64_t(1) << 40) / p) fail(ErrorKind::BudgetExceeded, "p-adic working precision too large");
      modulus *= p;
    }
    int64_t li = FiniteField::inv_mod(FiniteField::mod(g.back(), p), p);
    // Lift the inverse of the leading coefficient to Z/p^N by Newton iteration.
    int64_t lead = FiniteField::mod(g.back(), modulus);
    for (uint32_t i = 0; i < 8; ++i) li = FiniteField::mod(li * FiniteField::mod(2 - lead * li, modulus), modulus);
    f.resize(n + 1);
    for (uint32_t i = 0; i <= n; ++i) f[i] = FiniteField::mod(FiniteField::mod(g[i], modulus) * li, modulus);
    f[n] = 1;
  }
  using Elem = std::vector<int64_t>;
  Elem zero() const { return Elem(n, 0); }
  Elem from_int(int64_t k) const {
    Elem r(n, 0);
    r[0] = FiniteField::mod(k, modulus);
    return r;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(n);
    for (uint32_t i = 0; i < n; ++i) r[i] = (a[i] + b[i]) % modulus;
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(n);
    for (uint32_t i = 0; i < n; ++i) r[i] = FiniteField::mod(-a[i], modulus);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    std::vector<int64_t> c(2 * n, 0);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j])) % modulus;
    for (int64_t k = 2 * static_cast<int64_t>(n) - 2; k >= static_cast<int64_t>(n); --k) {
      int64_t t = c[k];
      if (!t) continue;
      for (uint32_t i = 0; i <= n; ++i) c[k - n + i] = FiniteField::mod(c[k - n + i] - mulmod(t, f[i]), modulus);
    }
    c.resize(n);
    return c;
  }
  int64_t mulmod(int64_t a, int64_t b) const { return static_cast<int64_t>((__int128)a * b % modulus); }
  Elem pow(Elem a, uint64_t e) const {
    Elem r = from_int(1);
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  // Teichmuller lift of a residue field element given by its coordinates.
  Elem teich(const std::vector<int64_t>& coords) const {
    Elem x(n, 0);
    for (uint32_t i = 0; i < n && i < coords.size(); ++i) x[i] = FiniteField::mod(coords[i], p);
    uint64_t q = FiniteField::ipow(p, n);
    for (uint32_t i = 0; i <= N; ++i) x = pow(x, q);
    return x;
  }
  Elem from_coefficient(const Coefficient& c) const {
    if (c.is_integer) return from_int(c.integer);
    Elem acc = zero(), ppow = from_int(1);
    for (const auto& d : c.digits) {
      acc = add(acc, mul(ppow, teich(d)));
      ppow = mul(ppow, from_int(p));
    }
    return acc;
  }
  // p-adic valuation of an element, capped at N.
  uint32_t val(const Elem& a) const {
    uint32_t v = N;
    for (int64_t x : a) {
      if (x == 0) continue;
      uint32_t k = 0;
      while (x % p == 0) x /= p, ++k;
      v = std::min(v, k);
    }
    return v;
  }
};

// O_K / m^rho for K of characteristic zero: W_N[pi]/(E(pi)), pi^rho = 0.
class MixedModel : public RingModel {
 public:
  MixedModel(const LocalFieldSpec& s, uint32_t rho)
      : W_(s.p, s.res_poly, std::max<uint32_t>(1, ceil_div(rho, s.e))), e_(s.e), rho_(rho), F_(nullptr) {
    n_ = W_.n;
    c_.resize(e_);
    if (s.eisenstein.empty()) {
      c_[0] = W_.from_int(-static_cast<int64_t>(s.p));
      for (uint32_t i = 1; i < e_; ++i) c_[i] = W_.zero();
    } else {
      for (uint32_t i = 0; i < e_; ++i) c_[i] = W_.from_coefficient(s.eisenstein[i]);
    }
    modj_.resize(e_);
    for (uint32_t j = 0; j < e_; ++j) {
      int64_t m = 1;
      for (uint32_t i = 0; i < ceil_div(static_cast<int64_t>(rho) - j, e_); ++i) m *= s.p;
      modj_[j] = m;
    }
  }
  void set_residue(const FiniteField* F) { F_ = F; }

  Rep zero() const override { return Rep(e_ * n_, 0); }
  Rep one() const override {
    Rep r = zero();
    r[0] = 1;
    return normal(r);
  }
  Rep teich(uint32_t a) const override {
    Rep r = zero();
    auto t = W_.teich(F_->coords(a));
    for (uint32_t i = 0; i < n_; ++i) r[i] = t[i];
    return normal(r);
  }
  Rep unif() const override {
    Rep r = zero();
    if (e_ == 1) {
      auto u = W_.neg(c_[0]);
      for (uint32_t i = 0; i < n_; ++i) r[i] = u[i];
    } else {
      r[n_] = 1;
    }
    return normal(r);
  }
  Rep add(const Rep& a, const Rep& b) const override {
    Rep r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return normal(r);
  }
  Rep neg(const Rep& a) const override {
    Rep r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return normal(r);
  }
  Rep mul(const Rep& a, const Rep& b) const override {
    std::vector<WittRing::Elem> C(2 * e_ - 1, W_.zero());
    for (uint32_t i = 0; i < e_; ++i)
      for (uint32_t j = 0; j < e_; ++j) C[i + j] = W_.add(C[i + j], W_.mul(part(a, i), part(b, j)));
    for (int64_t k = 2 * static_cast<int64_t>(e_) - 2; k >= static_cast<int64_t>(e_); --k) {
      WittRing::Elem t = C[k];
      for (uint32_t i = 0; i < e_; ++i) C[k - e_ + i] = W_.add(C[k - e_ + i], W_.neg(W_.mul(t, c_[i])));
    }
    Rep r = zero();
    for (uint32_t j = 0; j < e_; ++j)
      for (uint32_t i = 0; i < n_; ++i) r[j * n_ + i] = C[j][i];
    return normal(r);
  }

  const WittRing& witt() const { return W_; }
  const std::vector<WittRing::Elem>& coefficients() const { return c_; }

 private:
  WittRing W_;
  uint32_t e_, rho_, n_ = 1;
  const FiniteField* F_;
  std::vector<WittRing::Elem> c_;
  std::vector<int64_t> modj_;

  WittRing::Elem part(const Rep& a, uint32_t j) const {
    return WittRing::Elem(a.begin() + j * n_, a.begin() + (j + 1) * n_);
  }
  Rep normal(Rep r) const {
    for (uint32_t j = 0; j < e_; ++j)
      for (uint32_t i = 0; i < n_; ++i) r[j * n_ + i] = FiniteField::mod(r[j * n_ + i], modj_[j]);
    return r;
  }
};

// F_q[pi]/(pi^rho): representations are digit vectors of field codes.
class EqualModel : public RingModel {
 public:
  EqualModel(FieldPtr F, uint32_t rho) : F_(std::move(F)), rho_(rho) {}
  Rep zero() const override { return Rep(rho_, 0); }
  Rep one() const override { return teich(1); }
  Rep teich(uint32_t a) const override {
    Rep r = zero();
    if (rho_) r[0] = a;
    return r;
  }
  Rep unif() const override {
    Rep r = zero();
    if (rho_ > 1) r[1] = 1;
    return r;
  }
  Rep add(const Rep& a, const Rep& b) const override {
    Rep r(rho_);
    for (uint32_t i = 0; i < rho_; ++i) r[i] = F_->add(static_cast<uint32_t>(a[i]), static_cast<uint32_t>(b[i]));
    return r;
  }
  Rep neg(const Rep& a) const override {
    Rep r(rho_);
    for (uint32_t i = 0; i < rho_; ++i) r[i] = F_->neg(static_cast<uint32_t>(a[i]));
    return r;
  }
  Rep mul(const Rep& a, const Rep& b) const override {
    Rep r = zero();
    for (uint32_t i = 0; i < rho_; ++i) {
      if (!a[i]) continue;
      for (uint32_t j = 0; i + j < rho_; ++j)
        r[i + j] = F_->add(static_cast<uint32_t>(r[i + j]), F_->mul(static_cast<uint32_t>(a[i]), static_cast<uint32_t>(b[j])));
    }
    return r;
  }

 private:
  FieldPtr F_;
  uint32_t rho_;
};

inline void check_eisenstein(const LocalFieldSpec& s, const FieldPtr& F) {
  if (s.e == 0) fail(ErrorKind::NonEisensteinPolynomial, "ramification index must be positive");
  if (s.eisenstein.empty()) {
    if (s.e != 1 && s.tag == LocalFieldSpec::Tag::mixed_char)
      fail(ErrorKind::NonEisensteinPolynomial, "missing Eisenstein coefficients");
    if (s.e != 1 && s.tag == LocalFieldSpec::Tag::equal_char)
      fail(ErrorKind::NonEisensteinPolynomial, "missing Eisenstein coefficients");
    return;
  }
  if (s.eisenstein.size() != s.e) fail(ErrorKind::NonEisensteinPolynomial, "expected e coefficients");
  if (s.tag == LocalFieldSpec::Tag::mixed_char) {
    WittRing W(s.p, s.res_poly, 3);
    for (uint32_t i = 0; i < s.e; ++i) {
      uint32_t v = W.val(W.from_coefficient(s.eisenstein[i]));
      if (v < 1) fail(ErrorKind::NonEisensteinPolynomial, "coefficient c_" + std::to_string(i) + " is a unit");
      if (i == 0 && v != 1) fail(ErrorKind::NonEisensteinPolynomial, "constant term must have valuation 1");
    }
  } else {
    for (uint32_t i = 0; i < s.e; ++i) {
      const Coefficient& c = s.eisenstein[i];
      auto digit = [&](size_t k) -> uint32_t {
        if (c.is_integer) return k == 0 ? F->from_int(c.integer) : 0;
        return k < c.digits.size() ? F->from_coords(c.digits[k]) : 0;
      };
      if (digit(0) != 0) fail(ErrorKind::NonEisensteinPolynomial, "coefficient c_" + std::to_string(i) + " is a unit");
      if (i == 0 && digit(1) == 0)
        fail(ErrorKind::NonEisensteinPolynomial, "constant term must have valuation 1");
    }
  }
}

}  // namespace detail

// O_K / m_K^r with its spec; omega(own uniformizer) = 1.
struct TruncRing {
  LocalFieldSpec spec;
  uint32_t r = 0;
  RingPtr ring;
  uint64_t cardinality() const { return ring->size; }
};

inline FieldPtr residue_field(const LocalFieldSpec& s) { return FiniteField::prime_extension(s.p, s.res_poly); }

inline TruncRing make_ring(const LocalFieldSpec& s, uint32_t r) {
  if (r < 1 || r > s.radius_cap())
    fail(ErrorKind::RadiusExceedsPrecision,
         "radius " + std::to_string(r) + " outside [1, " + std::to_string(s.radius_cap()) + "] for " + s.name);
  FieldPtr F = residue_field(s);
  detail::check_eisenstein(s, F);
  std::shared_ptr<RingModel> model;
  if (s.tag == LocalFieldSpec::Tag::mixed_char) {
    auto m = std::make_shared<detail::MixedModel>(s, r);
    m->set_residue(F.get());
    model = m;
  } else {
    model = std::make_shared<detail::EqualModel>(F, r);
  }
  std::string label = (s.name.empty() ? std::string("K") : s.name) + "/m^" + std::to_string(r);
  // The model keeps a raw pointer to F; the ring owns F through its residue field.
  return TruncRing{s, r, FiniteRing::build(model, F, r, true, label)};
}

// Element of a truncated ring, carrying its context.
struct RingElem {
  RingPtr ring;
  uint32_t code = 0;

  std::vector<uint32_t> digits() const { return ring->digits(code); }
  bool operator==(const RingElem& o) const { return ring == o.ring && code == o.code; }
  bool operator!=(const RingElem& o) const { return !(*this == o); }
};

inline void same_context(const RingElem& x, const RingElem& y) {
  if (x.ring != y.ring) fail(ErrorKind::MixedContexts, "elements belong to different rings");
}
inline RingElem ring_add(const RingElem& x, const RingElem& y) {
  same_context(x, y);
  return {x.ring, x.ring->add(x.code, y.code)};
}
inline RingElem ring_mul(const RingElem& x, const RingElem& y) {
  same_context(x, y);
  return {x.ring, x.ring->mul(x.code, y.code)};
}
inline RingElem ring_neg(const RingElem& x) { return {x.ring, x.ring->neg(x.code)}; }
inline RingElem ring_inv(const RingElem& x) { return {x.ring, x.ring->inv(x.code)}; }
inline uint32_t ring_val(const RingElem& x) { return x.ring->val(x.code); }
inline RingElem elem_from_int(const TruncRing& R, int64_t k) { return {R.ring, R.ring->from_int(k)}; }
inline RingElem elem_from_digits(const TruncRing& R, const std::vector<uint32_t>& d) {
  return {R.ring, R.ring->from_digits(d)};
}
inline RingElem teichmuller(uint32_t residue_code, const TruncRing& R) { return {R.ring, R.ring->teich(residue_code)}; }
inline std::vector<uint32_t> digits(const RingElem& x) { return x.digits(); }
inline std::vector<RingElem> enumerate(const TruncRing& R) {
  std::vector<RingElem> out;
  out.reserve(R.ring->size);
  for (uint32_t c = 0; c < R.ring->size; ++c) out.push_back({R.ring, c});
  return out;
}

struct IsoWitness {
  RingElem image_of_residue_generator;
  RingElem image_of_uniformizer;
  bool equivariant = false;
  std::vector<uint32_t> map;
};

inline std::optional<IsoWitness> ring_iso_search(const TruncRing& R1, const TruncRing& R2) {
  auto iso = ring_iso_search_raw(*R1.ring, *R2.ring);
  if (!iso) return std::nullopt;
  return IsoWitness{{R2.ring, iso->residue_generator_image}, {R2.ring, iso->uniformizer_image}, false, iso->map};
}

}  // namespace btlab
