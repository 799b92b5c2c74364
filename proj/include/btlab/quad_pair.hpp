#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "extension.hpp"
#include "finite_ring.hpp"
#include "trunc_ring.hpp"

namespace btlab {

enum class PairKind { unramified, ramified_odd, ramified_dyadic, inseparable };

inline const char* pair_kind_name(PairKind k) {
  switch (k) {
    case PairKind::unramified: return "unramified";
    case PairKind::ramified_odd: return "ramified_odd";
    case PairKind::ramified_dyadic: return "ramified_dyadic";
    case PairKind::inseparable: return "inseparable";
  }
  return "?";
}

// L = K[t]/(t^2 - alpha t + beta); alpha or beta may be omitted (treated as 0, or X
// for the inseparable beta).
struct QuadPairSpec {
  PairKind kind = PairKind::unramified;
  LocalFieldSpec base;
  std::optional<Coefficient> alpha;
  std::optional<Coefficient> beta;
  std::string name;
};

struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

// Code in a truncated ring of a spec coefficient (integer or digit expansion).
inline uint32_t coefficient_code(const FiniteRing& R, const Coefficient& c) {
  if (c.is_integer) return R.from_int(c.integer);
  std::vector<uint32_t> d;
  for (const auto& v : c.digits) d.push_back(R.residue->from_coords(v));
  return R.from_digits(d);
}

// O_L / m_L^rho with conjugation and the embedding of O_K / m_K^k.
struct ConjContext {
  uint32_t rho = 0;
  TruncRing K;  // base at level k
  RingPtr L;
  std::vector<uint32_t> conj;
  uint32_t alpha = 0, beta = 0;  // codes in K
  uint32_t t = 0;                // code of the generator t in L

  // (x1, x2) with x = x1 + t x2, as K codes.
  std::pair<uint32_t, uint32_t> coords(uint32_t x) const {
    const auto& r = L->rep(x);
    return {static_cast<uint32_t>(r[0]), static_cast<uint32_t>(r[1])};
  }
  uint32_t from_coords(uint32_t x1, uint32_t x2) const {
    auto& M = static_cast<const ExtensionModel&>(L->model());
    return L->lookup(M.normal({static_cast<int64_t>(x1), static_cast<int64_t>(x2)}));
  }
  uint32_t embed(uint32_t k) const { return from_coords(k, 0); }
  std::optional<uint32_t> project(uint32_t x) const {
    auto [x1, x2] = coords(x);
    if (x2 != 0) return std::nullopt;
    return x1;
  }
  uint32_t conjugate(uint32_t x) const { return conj[x]; }
  uint32_t norm_l(uint32_t x) const { return L->mul(x, conj[x]); }
  uint32_t trace_l(uint32_t x) const { return L->add(x, conj[x]); }
  uint32_t norm(uint32_t x) const { return *project(norm_l(x)); }
  uint32_t trace(uint32_t x) const { return *project(trace_l(x)); }
};

class QuadPair {
 public:
  QuadPairSpec spec;
  Rational gamma;              // in units omega(pi_K) = 1; unset means infinite
  bool gamma_infinite = false;
  std::optional<uint32_t> i0;  // nullopt means infinite

  bool ramified() const { return spec.kind != PairKind::unramified; }
  bool dyadic() const { return spec.kind == PairKind::ramified_dyadic; }
  uint32_t base_level(uint32_t rho) const { return ExtensionModel::base_level(rho, 2, ramified()); }
  uint32_t radius_cap() const {
    uint32_t c = spec.base.radius_cap();
    return ramified() ? 2 * c : c;
  }

  // Truncation O_L / m_L^rho (cached).
  std::shared_ptr<const ConjContext> context(uint32_t rho) const {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = cache_->find(rho);
    if (it != cache_->end()) return it->second;
    auto c = build(rho);
    (*cache_)[rho] = c;
    return c;
  }

  // Dyadic reduced trace Tr/pi^i0 : O_L/m_L^(2s) -> O_K/m_K^s. pi is a uniformizer of
  // O_K given at level s + i0 (defaults to the digit uniformizer).
  uint32_t reduced_trace(uint32_t x, uint32_t s, std::optional<uint32_t> pi = std::nullopt) const {
    if (!dyadic() || !i0) fail(ErrorKind::NotDyadic, "reduced trace needs a dyadic ramified pair");
    uint32_t lift_level = 2 * (s + *i0);
    if (lift_level > radius_cap()) fail(ErrorKind::InsufficientPrecision, "reduced trace needs level " + std::to_string(lift_level));
    auto C = context(lift_level);
    const FiniteRing& K = *C->K.ring;
    if (x >= C->L->qpow(2 * s)) fail(ErrorKind::BadInput, "element is not at level 2s");
    uint32_t c = C->trace(x);
    uint32_t p = pi ? *pi : K.uniformizer();
    if (K.val(p) != 1) fail(ErrorKind::BadInput, "reduced trace needs a uniformizer");
    uint32_t w = K.shift_down(p, 1);
    uint32_t d = K.shift_down(c, *i0);
    uint32_t winv = K.inv(w);
    uint32_t r = K.mul(d, K.pow(winv, *i0));
    return K.trunc(r, s);
  }
  // Variant with the divisor given as an element b of valuation 1 raised to i0
  // (used with b = N(t)).
  uint32_t reduced_trace_by(uint32_t x, uint32_t s, uint32_t b) const { return reduced_trace(x, s, b); }

  explicit QuadPair(QuadPairSpec s) : spec(std::move(s)) {}

 private:
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<uint32_t, std::shared_ptr<const ConjContext>>> cache_ =
      std::make_shared<std::map<uint32_t, std::shared_ptr<const ConjContext>>>();

  std::shared_ptr<const ConjContext> build(uint32_t rho) const {
    if (rho < 1 || rho > radius_cap())
      fail(ErrorKind::RadiusExceedsPrecision, "pair level " + std::to_string(rho) + " outside [1, " + std::to_string(radius_cap()) + "]");
    auto C = std::make_shared<ConjContext>();
    C->rho = rho;
    C->K = make_ring(spec.base, base_level(rho));
    const FiniteRing& K = *C->K.ring;
    C->alpha = spec.alpha ? coefficient_code(K, *spec.alpha) : 0;
    C->beta = spec.beta ? coefficient_code(K, *spec.beta) : K.uniformizer();
    // t^2 - alpha t + beta
    std::vector<uint32_t> g{C->beta, K.neg(C->alpha), 1};
    std::string label = (spec.name.empty() ? std::string("L") : spec.name) + "/m^" + std::to_string(rho);
    C->L = build_extension(C->K.ring, g, ramified(), rho, label);
    C->t = C->from_coords(0, 1);
    C->conj.resize(C->L->size);
    for (uint32_t x = 0; x < C->L->size; ++x) {
      auto [x1, x2] = C->coords(x);
      // conj(x1 + t x2) = (x1 + alpha x2) - t x2
      C->conj[x] = C->from_coords(K.add(x1, K.mul(C->alpha, x2)), K.neg(x2));
    }
    return C;
  }
};

// Builds a pair, checking the kind constraints and computing gamma and i0.
inline QuadPair make_pair(const QuadPairSpec& s) {
  QuadPair P(s);
  const LocalFieldSpec& b = s.base;
  bool equal = b.tag == LocalFieldSpec::Tag::equal_char;
  uint32_t depth = std::max<uint32_t>(4, b.e + 2);
  for (const auto& c : {s.alpha, s.beta})
    if (c && !c->is_integer) depth = std::max<uint32_t>(depth, static_cast<uint32_t>(c->digits.size()) + 1);
  TruncRing K = make_ring(b, std::min<uint32_t>(b.radius_cap(), depth));
  const FiniteRing& R = *K.ring;
  uint32_t a = s.alpha ? coefficient_code(R, *s.alpha) : 0;
  uint32_t be = s.beta ? coefficient_code(R, *s.beta) : R.uniformizer();
  uint32_t va = R.val(a), vb = R.val(be);
  bool alpha_zero = a == 0;
  uint32_t v2 = equal && b.p == 2 ? R.levels : R.val(R.from_int(2));
  auto violated = [](const std::string& m) { fail(ErrorKind::KindConstraintViolated, m); };
  switch (s.kind) {
    case PairKind::unramified: {
      if (vb != 0) violated("unramified pair needs a unit beta");
      FieldPoly gbar{R.digit(be, 0), R.residue->neg(R.digit(a, 0)), 1};
      if (!R.residue->is_irreducible(gbar)) fail(ErrorKind::ReducibleExtension, "t^2 - alpha t + beta splits mod m");
      P.gamma = {0, 1};
      P.i0 = 0;
      break;
    }
    case PairKind::ramified_odd:
      if (b.p == 2) violated("ramified_odd needs odd residue characteristic");
      if (vb != 1) violated("beta must be a uniformizer");
      if (va < 1) violated("alpha must lie in the maximal ideal");
      P.gamma = {0, 1};
      P.i0 = 0;
      break;
    case PairKind::ramified_dyadic:
      if (b.p != 2) violated("ramified_dyadic needs residue characteristic 2");
      if (vb != 1) violated("beta must be a uniformizer");
      if (alpha_zero) {
        if (equal) violated("alpha = 0 in characteristic 2 gives the inseparable pair");
        P.gamma = {static_cast<int64_t>(v2), 2};
        P.i0 = v2;
      } else {
        if (va < 1 || va > v2) violated("need 1 <= omega(alpha) <= omega(2)");
        P.gamma = {2 * static_cast<int64_t>(va) - 1, 4};
        P.i0 = va;
      }
      break;
    case PairKind::inseparable:
      if (!equal || b.p != 2 || b.e != 1) violated("inseparable pair lives over F_(2^n)((X))");
      if (!alpha_zero) violated("inseparable pair has alpha = 0");
      if (vb != 1) violated("beta must be a uniformizer");
      P.gamma_infinite = true;
      P.i0 = std::nullopt;
      break;
  }
  return P;
}

inline QuadPair make_pair(PairKind kind, const LocalFieldSpec& base, std::optional<Coefficient> alpha,
                          std::optional<Coefficient> beta, std::string name = "") {
  return make_pair(QuadPairSpec{kind, base, std::move(alpha), std::move(beta), std::move(name)});
}

// Digit-expansion coefficient sum_k d_k pi^k for a prime residue field.
inline Coefficient digits_coefficient(std::vector<int64_t> d) {
  std::vector<std::vector<int64_t>> v;
  for (int64_t x : d) v.push_back({x});
  return Coefficient::from_digits(v);
}
// The monomial X^k (or p^k) as a coefficient.
inline Coefficient monomial(uint32_t k) {
  std::vector<int64_t> d(k + 1, 0);
  d[k] = 1;
  return digits_coefficient(d);
}

// Equivariant ring isomorphism O_L1/m^r -> O_L2/m^r.
inline std::optional<IsoWitness> pair_iso_search(const QuadPair& P1, const QuadPair& P2, uint32_t r) {
  auto C1 = P1.context(r);
  auto C2 = P2.context(r);
  IsoConstraint eq = [&](uint32_t level, const std::vector<uint32_t>& phi) {
    uint32_t N = C1->L->qpow(level);
    for (uint32_t x = 0; x < N; ++x) {
      uint32_t lhs = phi[C1->L->trunc(C1->conj[x], level)];
      uint32_t rhs = C2->L->trunc(C2->conj[phi[x]], level);
      if (lhs != rhs) return false;
    }
    return true;
  };
  auto iso = ring_iso_search_raw(*C1->L, *C2->L, eq);
  if (!iso) return std::nullopt;
  return IsoWitness{{C2->L, iso->residue_generator_image}, {C2->L, iso->uniformizer_image}, true, iso->map};
}

// Checks conj2 o phi = phi o conj1 on every element.
inline bool verify_equivariant(const ConjContext& C1, const ConjContext& C2, const std::vector<uint32_t>& phi) {
  for (uint32_t x = 0; x < C1.L->size; ++x)
    if (phi[C1.conj[x]] != C2.conj[phi[x]]) return false;
  return true;
}

}  // namespace btlab
