#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyclic_algebra.hpp"
#include "errors.hpp"
#include "finite_ring.hpp"
#include "matrix.hpp"
#include "quad_pair.hpp"

namespace btlab {

enum class GroupFamily { SL2D, SU3_unram, SU3_ram_odd, SU3_dyadic_small, SU3_dyadic_large, SL2_insep, SU3_dyadic_integral };

inline const char* family_name(GroupFamily f) {
  switch (f) {
    case GroupFamily::SL2D: return "SL2D";
    case GroupFamily::SU3_unram: return "SU3_unram";
    case GroupFamily::SU3_ram_odd: return "SU3_ram_odd";
    case GroupFamily::SU3_dyadic_small: return "SU3_dyadic_small";
    case GroupFamily::SU3_dyadic_large: return "SU3_dyadic_large";
    case GroupFamily::SL2_insep: return "SL2_insep";
    case GroupFamily::SU3_dyadic_integral: return "SU3_dyadic_integral";
  }
  return "?";
}

inline GroupFamily parse_family(const std::string& s) {
  for (auto f : {GroupFamily::SL2D, GroupFamily::SU3_unram, GroupFamily::SU3_ram_odd, GroupFamily::SU3_dyadic_small,
                 GroupFamily::SU3_dyadic_large, GroupFamily::SL2_insep, GroupFamily::SU3_dyadic_integral})
    if (s == family_name(f)) return f;
  fail(ErrorKind::BadInput, "unknown group family " + s);
}

// Enumeration budget: BTLAB_BUDGET or 10^6 elements.
inline uint64_t default_budget() {
  if (const char* e = std::getenv("BTLAB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end != e && v > 0) return v;
  }
  return 1000000;
}

struct GroupCarrier {
  std::optional<CyclicAlgebraSpec> algebra;
  std::shared_ptr<const QuadPair> pair;
};

// x -> sign * x + shift on vertex positions.
struct AffineMap {
  int sign = 1;
  int64_t shift = 0;
  int64_t apply(int64_t x) const { return sign * x + shift; }
};

struct MatrixHash {
  size_t operator()(const Matrix& m) const {
    uint64_t h = 1469598103934665603ull ^ m.n;
    for (uint32_t x : m.a) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// All elements in canonical order (lexicographic on digit lists, row-major) plus a
// generating set.
struct GroupElements {
  std::vector<Matrix> elems;
  std::unordered_map<Matrix, uint32_t, MatrixHash> index;
  std::vector<Matrix> gens;
  std::optional<uint32_t> find(const Matrix& g) const {
    auto it = index.find(g);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

class LocalGroup;
using GroupPtr = std::shared_ptr<const LocalGroup>;

class LocalGroup : public std::enable_shared_from_this<LocalGroup> {
 public:
  GroupFamily family;
  uint32_t radius = 0;
  uint32_t dim = 2;
  GroupCarrier carrier;
  RingPtr R;
  AlgebraPtr algebra;
  std::shared_ptr<const ConjContext> ctx;
  // dyadic data
  uint32_t i0 = 0;
  std::shared_ptr<const ConjContext> ctx_hi;  // level radius + 2 i0
  uint32_t t_hi = 0;                          // chosen uniformizer t of O_L
  uint32_t beta_hi = 0;                       // N(t) in O_K at level radius/2 + i0
  uint32_t winv_pow = 0;                      // (beta / pi)^(-i0)
  uint32_t beta_i0 = 0;                       // beta^i0 as an element of O_L / m^radius
  bool gamma_shift = false;                   // dyadic 3 x 3 bounds shifted by gamma - i0

  static GroupPtr make(GroupFamily f, const GroupCarrier& c, uint32_t radius, std::optional<uint32_t> t = std::nullopt,
                       bool gamma_shift = false) {
    auto G = std::shared_ptr<LocalGroup>(new LocalGroup());
    G->family = f;
    G->gamma_shift = gamma_shift;
    G->radius = radius;
    G->carrier = c;
    if (radius < 1) fail(ErrorKind::BadLevel, "group radius must be positive");
    auto need_pair = [&](std::initializer_list<PairKind> kinds) {
      if (!c.pair) fail(ErrorKind::RegimeMismatch, std::string(family_name(f)) + " needs a quadratic pair carrier");
      for (auto k : kinds)
        if (c.pair->spec.kind == k) return;
      fail(ErrorKind::RegimeMismatch, std::string(family_name(f)) + " does not accept a " + pair_kind_name(c.pair->spec.kind) + " pair");
    };
    switch (f) {
      case GroupFamily::SL2D: {
        if (!c.algebra) fail(ErrorKind::RegimeMismatch, "SL2D needs an algebra carrier");
        G->algebra = make_algebra(*c.algebra, radius);
        G->R = G->algebra->ring();
        G->dim = 2;
        break;
      }
      case GroupFamily::SU3_unram:
        need_pair({PairKind::unramified});
        G->dim = 3;
        break;
      case GroupFamily::SU3_ram_odd:
        need_pair({PairKind::ramified_odd});
        G->dim = 3;
        break;
      case GroupFamily::SL2_insep:
        need_pair({PairKind::inseparable});
        G->dim = 2;
        break;
      case GroupFamily::SU3_dyadic_small:
      case GroupFamily::SU3_dyadic_large:
      case GroupFamily::SU3_dyadic_integral: {
        need_pair({PairKind::ramified_dyadic});
        if (radius % 2) fail(ErrorKind::RegimeMismatch, "dyadic local models have even radius");
        G->i0 = *c.pair->i0;
        if (f == GroupFamily::SU3_dyadic_small && radius > 2 * G->i0)
          fail(ErrorKind::RegimeMismatch, "small regime needs radius <= 2 i0");
        if (f == GroupFamily::SU3_dyadic_large && radius <= 2 * G->i0)
          fail(ErrorKind::RegimeMismatch, "large regime needs radius > 2 i0");
        G->dim = f == GroupFamily::SU3_dyadic_small ? 2 : 3;
        break;
      }
    }
    if (c.pair) {
      G->ctx = c.pair->context(radius);
      G->R = G->ctx->L;
    }
    if (G->dim == 3 && (f == GroupFamily::SU3_dyadic_large || f == GroupFamily::SU3_dyadic_integral)) {
      uint32_t hi = radius + 2 * G->i0;
      if (hi > c.pair->radius_cap()) fail(ErrorKind::InsufficientPrecision, "dyadic model needs the pair at level " + std::to_string(hi));
      G->ctx_hi = c.pair->context(hi);
      G->t_hi = t ? *t : G->ctx_hi->t;
      if (G->t_hi >= G->ctx_hi->L->size || G->ctx_hi->L->val(G->t_hi) != 1) fail(ErrorKind::BadInput, "t must be a uniformizer of O_L");
      const FiniteRing& Kh = *G->ctx_hi->K.ring;
      G->beta_hi = G->ctx_hi->norm(G->t_hi);
      uint32_t w = Kh.shift_down(G->beta_hi, 1);
      G->winv_pow = Kh.pow(Kh.inv(w), G->i0);
      uint32_t b = Kh.trunc(Kh.pow(G->beta_hi, G->i0), radius / 2);
      G->beta_i0 = G->ctx->embed(b);
    }
    return G;
  }

  bool sl2_type() const { return dim == 2; }
  // Levels between consecutive enumerable radii.
  uint32_t step() const {
    if (family == GroupFamily::SL2D) return carrier.algebra->degree;
    if (is_dyadic()) return 2;
    return 1;
  }
  uint32_t base_radius() const { return step(); }
  bool is_dyadic() const {
    return family == GroupFamily::SU3_dyadic_small || family == GroupFamily::SU3_dyadic_large ||
           family == GroupFamily::SU3_dyadic_integral;
  }

  // Same carrier at another radius; dyadic 3 x 3 models stay on the integral-point equations.
  GroupPtr at_radius(uint32_t r, bool keep_regime = false) const {
    GroupFamily f = family;
    if (!keep_regime && dim == 3 && is_dyadic()) f = GroupFamily::SU3_dyadic_integral;
    std::optional<uint32_t> t;
    if (ctx_hi) t = t_hi;
    if (ctx_hi && r + 2 * i0 > ctx_hi->rho) t = std::nullopt;
    return make(f, carrier, r, t ? std::optional<uint32_t>(ctx_hi->L->trunc(*t, r + 2 * i0)) : std::nullopt, gamma_shift);
  }

  Matrix identity() const { return mat_identity(dim); }
  Matrix mul(const Matrix& a, const Matrix& b) const { return mat_mul(*R, a, b); }
  Matrix pow(Matrix g, uint64_t e) const {
    Matrix r = identity();
    while (e) {
      if (e & 1) r = mul(r, g);
      g = mul(g, g);
      e >>= 1;
    }
    return r;
  }
  Matrix inverse(const Matrix& g) const {
    if ((family == GroupFamily::SU3_unram || family == GroupFamily::SU3_ram_odd)) return s_conj(g);
    if (dim == 2 && R->commutative) return Matrix(2, {g(1, 1), R->neg(g(0, 1)), R->neg(g(1, 0)), g(0, 0)});
    Matrix h = g, prev = identity();
    for (uint64_t k = 0; k < 100000000ull; ++k) {
      if (h == identity()) return prev;
      prev = h;
      h = mul(h, g);
    }
    fail(ErrorKind::BudgetExceeded, "element order too large");
  }

  void check_shape(const Matrix& g) const {
    if (g.n != dim) fail(ErrorKind::WrongShape, std::string(family_name(family)) + " expects " + std::to_string(dim) + " x " + std::to_string(dim) + " matrices");
    for (uint32_t v : g.a)
      if (v >= R->size) fail(ErrorKind::WrongShape, "matrix entry outside the carrier ring");
  }

  // (^S g-bar)_(ij) = conj(g_(n-1-j, n-1-i)).
  Matrix s_conj(const Matrix& g) const {
    Matrix s(dim);
    for (uint32_t i = 0; i < dim; ++i)
      for (uint32_t j = 0; j < dim; ++j) s(i, j) = ctx->conjugate(g(dim - 1 - j, dim - 1 - i));
    return s;
  }

  // Tr / beta^i0 : O_L / m^radius -> O_K / m^(radius/2).
  uint32_t reduced_trace(uint32_t x) const {
    const FiniteRing& Kh = *ctx_hi->K.ring;
    uint32_t c = ctx_hi->trace(x);
    uint32_t d = Kh.shift_down(c, i0);
    return Kh.trunc(Kh.mul(d, winv_pow), radius / 2);
  }

  bool contains(const Matrix& g) const {
    check_shape(g);
    switch (family) {
      case GroupFamily::SL2D: {
        std::vector<std::vector<uint32_t>> c;
        for (uint32_t v : g.a) c.push_back(algebra->coords_of(v));
        return algebra->reduced_norm(c, 2) == 1;
      }
      case GroupFamily::SU3_dyadic_small:
      case GroupFamily::SL2_insep:
        return det(*R, g) == 1;
      case GroupFamily::SU3_unram:
      case GroupFamily::SU3_ram_odd:
        return det(*R, g) == 1 && mul(s_conj(g), g) == identity();
      case GroupFamily::SU3_dyadic_large:
      case GroupFamily::SU3_dyadic_integral: {
        if (det(*R, g) != 1) return false;
        Matrix D = identity();
        D(1, 1) = beta_i0;
        if (mul(s_conj(g), mul(D, g)) != D) return false;
        const FiniteRing& K = *ctx->K.ring;
        uint32_t lhs1 = reduced_trace(R->mul(ctx->conjugate(g(2, 0)), g(0, 0)));
        if (lhs1 != K.neg(ctx->norm(g(1, 0)))) return false;
        uint32_t lhs2 = reduced_trace(R->mul(ctx->conjugate(g(2, 2)), g(0, 2)));
        return lhs2 == K.neg(ctx->norm(g(1, 2)));
      }
    }
    return false;
  }

  // ceil of the valuation bound at vertex index x (omega(pi_L) = 1).
  std::vector<int64_t> bound(int64_t x) const {
    if (dim == 2) return {0, -x, x, 0};
    // entries scaled by 4; the optional shift is 4 (gamma - i0) in omega(pi_L) units
    int64_t s = 0;
    if (gamma_shift && ctx_hi) {
      const auto& g = carrier.pair->gamma;
      s = 8 * g.num / g.den - 4 * static_cast<int64_t>(i0);
    }
    std::vector<int64_t> b4{0, -2 * x - s, -4 * x, 2 * x + s, 0, -2 * x + s, 4 * x, 2 * x - s, 0};
    std::vector<int64_t> b;
    for (int64_t v : b4) b.push_back(v >= 0 ? (v + 3) / 4 : -((-v) / 4));
    return b;
  }

  bool in_Px(const Matrix& g, int64_t x) const {
    check_shape(g);
    if (x < -static_cast<int64_t>(radius) || x > static_cast<int64_t>(radius))
      fail(ErrorKind::IndexOutOfRange, "vertex index " + std::to_string(x) + " outside [-" + std::to_string(radius) + ", " + std::to_string(radius) + "]");
    auto b = bound(x);
    for (uint32_t k = 0; k < g.a.size(); ++k)
      if (static_cast<int64_t>(R->val(g.a[k])) < b[k]) return false;
    return true;
  }

  // Antidiagonal unit element: [[0,-1],[1,0]] or antidiag(1,-1,1).
  Matrix m_std() const {
    Matrix m(dim);
    if (dim == 2) {
      m(0, 1) = R->neg(1);
      m(1, 0) = 1;
    } else {
      m(0, 2) = 1;
      m(1, 1) = R->neg(1);
      m(2, 0) = 1;
    }
    return m;
  }
  // Diagonal element of H attached to a unit x.
  Matrix h_element(uint32_t x) const {
    if (!R->is_unit(x)) fail(ErrorKind::NonUnitInverse, "H elements need a unit");
    Matrix h(dim);
    if (dim == 2) {
      h(0, 0) = x;
      h(1, 1) = R->inv(x);
    } else {
      uint32_t xb = ctx->conjugate(x);
      h(0, 0) = x;
      h(1, 1) = R->mul(xb, R->inv(x));
      h(2, 2) = R->inv(xb);
    }
    return h;
  }
  // nu on N: diagonal elements act trivially, antidiagonal ones reflect through 0.
  AffineMap nu(const Matrix& g) const {
    check_shape(g);
    bool diag = true, anti = true;
    for (uint32_t i = 0; i < dim; ++i)
      for (uint32_t j = 0; j < dim; ++j) {
        if (i != j && g(i, j)) diag = false;
        if (i + j != dim - 1 && g(i, j)) anti = false;
      }
    if (diag) return {1, 0};
    if (anti) return {-1, 0};
    fail(ErrorKind::BadInput, "element is not in N");
  }

  Matrix truncate(const Matrix& g, uint32_t r) const { return mat_trunc(*R, g, r); }

  const GroupElements& elements(uint64_t budget = default_budget()) const {
    std::lock_guard<std::recursive_mutex> lock(*mutex_);
    if (!elements_) elements_ = std::make_shared<GroupElements>(enumerate(budget));
    return *elements_;
  }
  uint64_t order(uint64_t budget = default_budget()) const { return elements(budget).elems.size(); }

  // Closure of a generating set under multiplication (BFS), in discovery order.
  std::vector<Matrix> closure(const std::vector<Matrix>& gens, uint64_t budget = default_budget()) const {
    std::unordered_map<Matrix, uint32_t, MatrixHash> seen;
    std::vector<Matrix> out{identity()};
    seen.emplace(identity(), 0);
    for (size_t i = 0; i < out.size(); ++i)
      for (const auto& s : gens) {
        Matrix n = mul(out[i], s);
        if (seen.emplace(n, static_cast<uint32_t>(out.size())).second) {
          out.push_back(std::move(n));
          if (out.size() > budget) fail(ErrorKind::BudgetExceeded, "subgroup exceeds the budget");
        }
      }
    return out;
  }

  // Elements Id + E with E in M_n(m^lo), lying in the group.
  std::vector<Matrix> kernel_to(uint32_t lo) const {
    std::vector<Matrix> out;
    scan_offsets(lo, identity(), [&](const Matrix& g) {
      out.push_back(g);
      return false;
    });
    return out;
  }

 private:
  std::shared_ptr<std::recursive_mutex> mutex_ = std::make_shared<std::recursive_mutex>();
  mutable std::shared_ptr<GroupElements> elements_;
  LocalGroup() = default;

  // Visits base + E (E entries in m^lo) that lie in the group; stops when f returns true.
  template <class F>
  bool scan_offsets(uint32_t lo, const Matrix& base, F&& f) const {
    uint32_t cells = dim * dim;
    uint64_t per = R->size / R->qpow(lo);
    long double total = 1;
    for (uint32_t i = 0; i < cells; ++i) total *= per;
    if (total > (1ull << 27)) fail(ErrorKind::BudgetExceeded, "fiber too large to scan");
    std::vector<uint32_t> idx(cells, 0);
    Matrix g = base;
    uint32_t step = R->qpow(lo);
    while (true) {
      for (uint32_t i = 0; i < cells; ++i) g.a[i] = R->add(base.a[i], idx[i] * step);
      if (contains(g) && f(g)) return true;
      uint32_t k = 0;
      while (k < cells && ++idx[k] == per) idx[k++] = 0;
      if (k == cells) break;
    }
    return false;
  }

  std::optional<Matrix> fiber_member(uint32_t lo, const Matrix& h) const {
    std::optional<Matrix> found;
    scan_offsets(lo, h, [&](const Matrix& g) {
      found = g;
      return true;
    });
    return found;
  }

  std::vector<Matrix> greedy_generators(const std::vector<Matrix>& elems, uint64_t budget) const {
    std::vector<Matrix> gens;
    std::unordered_map<Matrix, char, MatrixHash> covered;
    covered.emplace(identity(), 1);
    for (const auto& e : elems) {
      if (covered.count(e)) continue;
      gens.push_back(e);
      covered.clear();
      for (auto& m : closure(gens, budget)) covered.emplace(std::move(m), 1);
    }
    return gens;
  }

  std::vector<uint32_t> sort_key(const Matrix& g) const {
    std::vector<uint32_t> k(g.a.size());
    for (size_t i = 0; i < g.a.size(); ++i) k[i] = R->lexkey(g.a[i]);
    return k;
  }

  void finalize(GroupElements& E) const {
    std::vector<std::pair<std::vector<uint32_t>, uint32_t>> keys;
    keys.reserve(E.elems.size());
    for (uint32_t i = 0; i < E.elems.size(); ++i) keys.emplace_back(sort_key(E.elems[i]), i);
    std::sort(keys.begin(), keys.end());
    std::vector<Matrix> sorted;
    sorted.reserve(E.elems.size());
    for (auto& kv : keys) sorted.push_back(std::move(E.elems[kv.second]));
    E.elems = std::move(sorted);
    E.index.clear();
    E.index.reserve(E.elems.size() * 2);
    for (uint32_t i = 0; i < E.elems.size(); ++i) E.index.emplace(E.elems[i], i);
  }

  GroupElements enumerate(uint64_t budget) const {
    GroupElements E;
    if (radius <= base_radius()) {
      uint32_t cells = dim * dim;
      long double total = 1;
      for (uint32_t i = 0; i < cells; ++i) total *= R->size;
      if (total > 5e7L) fail(ErrorKind::BudgetExceeded, "base level too large for brute force");
      E.elems = kernel_to(0);
      if (E.elems.size() > budget) fail(ErrorKind::BudgetExceeded, "group order exceeds the budget");
      finalize(E);
      E.gens = greedy_generators(E.elems, budget);
      return E;
    }
    uint32_t lo = radius > step() ? radius - step() : base_radius();
    if (lo < base_radius()) lo = base_radius();
    GroupPtr lower = at_radius(lo);
    const GroupElements& L = lower->elements(budget);
    std::vector<Matrix> K = kernel_to(lo);
    if (static_cast<long double>(L.elems.size()) * K.size() > budget)
      fail(ErrorKind::BudgetExceeded, std::string(family_name(family)) + " order exceeds the budget at radius " + std::to_string(radius));
    // lift generators
    std::vector<Matrix> lo_gens, hi_gens;
    for (const auto& h : L.gens)
      if (auto g = fiber_member(lo, h)) {
        lo_gens.push_back(h);
        hi_gens.push_back(*g);
      }
    std::vector<std::optional<Matrix>> lift(L.elems.size());
    uint32_t id = *L.find(lower->identity());
    lift[id] = identity();
    std::deque<uint32_t> queue{id};
    while (!queue.empty()) {
      uint32_t cur = queue.front();
      queue.pop_front();
      for (size_t j = 0; j < lo_gens.size(); ++j) {
        uint32_t nxt = *L.find(lower->mul(L.elems[cur], lo_gens[j]));
        if (lift[nxt]) continue;
        lift[nxt] = mul(*lift[cur], hi_gens[j]);
        queue.push_back(nxt);
      }
    }
    for (uint32_t i = 0; i < L.elems.size(); ++i)
      if (!lift[i]) lift[i] = fiber_member(lo, L.elems[i]);
    for (uint32_t i = 0; i < L.elems.size(); ++i) {
      if (!lift[i]) continue;
      for (const auto& k : K) E.elems.push_back(mul(*lift[i], k));
    }
    finalize(E);
    E.gens = hi_gens;
    auto kb = greedy_generators(K, budget);
    E.gens.insert(E.gens.end(), kb.begin(), kb.end());
    return E;
  }
};

inline GroupPtr make_group(GroupFamily f, const GroupCarrier& c, uint32_t radius, std::optional<uint32_t> t = std::nullopt,
                           bool gamma_shift = false) {
  return LocalGroup::make(f, c, radius, t, gamma_shift);
}

// Dyadic SU3 local model at even radius, choosing the regime from i0.
inline GroupPtr make_dyadic_group(const std::shared_ptr<const QuadPair>& P, uint32_t radius) {
  if (!P->i0) fail(ErrorKind::RegimeMismatch, "dyadic model needs finite i0");
  auto f = radius <= 2 * *P->i0 ? GroupFamily::SU3_dyadic_small : GroupFamily::SU3_dyadic_large;
  return make_group(f, GroupCarrier{std::nullopt, P}, radius);
}

inline bool same_carrier(const LocalGroup& a, const LocalGroup& b) {
  if (a.carrier.pair || b.carrier.pair) return a.carrier.pair == b.carrier.pair;
  if (!a.carrier.algebra || !b.carrier.algebra) return false;
  const auto& x = *a.carrier.algebra;
  const auto& y = *b.carrier.algebra;
  return x.degree == y.degree && x.hasse == y.hasse && same_field_spec(x.base, y.base);
}

// Coefficient projection G_high -> G_low; crossing the dyadic 2 i0 boundary takes the
// corner (g11 g13; g31 g33).
inline Matrix truncate_elem(const LocalGroup& hi, const Matrix& g, const LocalGroup& lo) {
  if (!same_carrier(hi, lo) || lo.radius > hi.radius) fail(ErrorKind::IncompatibleLevels, "groups are not truncations of each other");
  hi.check_shape(g);
  if (hi.dim == lo.dim) return hi.truncate(g, lo.radius);
  if (hi.dim == 3 && lo.dim == 2 && hi.is_dyadic()) {
    Matrix c(2, {g(0, 0), g(0, 2), g(2, 0), g(2, 2)});
    return hi.truncate(c, lo.radius);
  }
  fail(ErrorKind::IncompatibleLevels, "no truncation between these families");
}

struct DegenerationReport {
  uint64_t integral_order = 0;
  uint64_t image_size = 0;
  uint64_t target_order = 0;
  bool surjective = false;
  bool lands_in_target = true;
  std::vector<Matrix> kernel;
  bool kernel_shape = true;
};

// Corner map G_int(s) -> SL2(O_L / m^(2s)) for 2s <= 2 i0.
inline DegenerationReport su3_degeneration(const std::shared_ptr<const QuadPair>& P, uint32_t s) {
  if (!P->i0 || 2 * s > 2 * *P->i0) fail(ErrorKind::RegimeMismatch, "degeneration needs 2s <= 2 i0");
  GroupCarrier c{std::nullopt, P};
  auto Gint = make_group(GroupFamily::SU3_dyadic_integral, c, 2 * s);
  auto Sl = make_group(GroupFamily::SU3_dyadic_small, c, 2 * s);
  DegenerationReport rep;
  const auto& E = Gint->elements();
  const auto& T = Sl->elements();
  rep.integral_order = E.elems.size();
  rep.target_order = T.elems.size();
  std::vector<char> hit(T.elems.size(), 0);
  const FiniteRing& L = *Gint->R;
  for (const auto& g : E.elems) {
    Matrix img = truncate_elem(*Gint, g, *Sl);
    auto k = T.find(img);
    if (!k) {
      rep.lands_in_target = false;
      continue;
    }
    hit[*k] = 1;
    if (img == Sl->identity()) {
      rep.kernel.push_back(g);
      bool shape = g(0, 1) == 0 && g(2, 1) == 0 && g(1, 1) == 1 && L.mul(g(1, 0), g(1, 0)) == 0 &&
                   L.mul(g(1, 2), g(1, 2)) == 0;
      rep.kernel_shape = rep.kernel_shape && shape;
    }
  }
  for (char h : hit) rep.image_size += h;
  rep.surjective = rep.lands_in_target && rep.image_size == rep.target_order;
  return rep;
}

// Number of 3 x 3 matrices X over O_L / m^level with (^S op(X)) + sign X = 0 and
// tr X = 0, where op is conjugation or the identity.
inline uint64_t count_matrix_space(const ConjContext& C, uint32_t level, bool conjugate, int sign) {
  const FiniteRing& L = *C.L;
  uint32_t N = L.qpow(level);
  auto op = [&](uint32_t x) { return L.trunc(conjugate ? C.conjugate(x) : x, level); };
  auto ok_pair = [&](uint32_t xij, uint32_t xpartner) {
    // (^S op X)_(ij) = op(X_(2-j, 2-i)); condition op(partner) + sign X_ij = 0
    uint32_t s = sign > 0 ? xij : L.neg(xij);
    return L.trunc(L.add(op(xpartner), s), level) == 0;
  };
  // off-diagonal orbits of (i,j) -> (2-j, 2-i): two swapped pairs (0,1)<->(1,2) and
  // (1,0)<->(2,1), two fixed entries (0,2) and (2,0); every entry ranges over O_L / m^level
  uint64_t swapped = 0, fixed = 0;
  for (uint32_t x = 0; x < N; ++x) {
    fixed += ok_pair(x, x);
    for (uint32_t y = 0; y < N; ++y) swapped += ok_pair(x, y) && ok_pair(y, x);
  }
  uint64_t count = swapped * swapped * fixed * fixed;
  // diagonal: (0,0)<->(2,2), (1,1) fixed, plus the trace
  uint64_t c = 0;
  for (uint32_t a = 0; a < N; ++a)
    for (uint32_t b = 0; b < N; ++b)
      for (uint32_t m = 0; m < N; ++m)
        if (ok_pair(a, b) && ok_pair(b, a) && ok_pair(m, m) && L.trunc(L.add(L.add(a, b), m), level) == 0) ++c;
  return count * c;
}

}  // namespace btlab
