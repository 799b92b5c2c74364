#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "finite_field.hpp"

namespace btlab {

// Largest ring the table engine accepts.
inline constexpr uint32_t kMaxRingSize = 4096;

// Concrete arithmetic of a truncated local ring. Representations must be normal
// forms: equal ring elements have equal vectors.
struct RingModel {
  using Rep = std::vector<int64_t>;
  virtual ~RingModel() = default;
  virtual Rep zero() const = 0;
  virtual Rep one() const = 0;
  virtual Rep teich(uint32_t residue) const = 0;
  virtual Rep unif() const = 0;
  virtual Rep add(const Rep& a, const Rep& b) const = 0;
  virtual Rep neg(const Rep& a) const = 0;
  virtual Rep mul(const Rep& a, const Rep& b) const = 0;
};

struct RepHash {
  size_t operator()(const std::vector<int64_t>& v) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t x : v) {
      h ^= static_cast<uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// A finite local ring O/m^levels whose elements are coded by their digit
// expansion sum_k pi^k * tau(d_k), code = sum_k d_k * Q^k. Every ring here
// (base fields, quadratic extensions, cyclic algebras) uses this format, so
// valuation is the first nonzero digit and truncation is code mod Q^k.
class FiniteRing {
 public:
  FieldPtr residue;
  uint32_t Q = 0;
  uint32_t levels = 0;
  uint32_t size = 0;
  bool commutative = true;
  std::string label;

  static std::shared_ptr<const FiniteRing> build(std::shared_ptr<const RingModel> model, FieldPtr residue,
                                                 uint32_t levels, bool commutative, std::string label) {
    auto R = std::shared_ptr<FiniteRing>(new FiniteRing());
    R->model_ = std::move(model);
    R->residue = std::move(residue);
    R->Q = R->residue->q;
    R->levels = levels;
    R->commutative = commutative;
    R->label = std::move(label);
    uint64_t N = 1;
    R->qpow_.push_back(1);
    for (uint32_t i = 0; i < levels; ++i) {
      N *= R->Q;
      if (N > kMaxRingSize) fail(ErrorKind::BudgetExceeded, "ring " + R->label + " exceeds the table size limit");
      R->qpow_.push_back(static_cast<uint32_t>(N));
    }
    R->size = static_cast<uint32_t>(N);
    const RingModel& M = *R->model_;
    std::vector<RingModel::Rep> pipow{M.one()};
    for (uint32_t k = 1; k < levels; ++k) pipow.push_back(M.mul(pipow.back(), M.unif()));
    std::vector<RingModel::Rep> teich(R->Q);
    for (uint32_t a = 0; a < R->Q; ++a) teich[a] = M.teich(a);
    R->reps_.resize(N);
    R->index_.reserve(N * 2);
    for (uint32_t c = 0; c < N; ++c) {
      RingModel::Rep x = M.zero();
      uint32_t t = c;
      for (uint32_t k = 0; k < levels; ++k, t /= R->Q)
        if (t % R->Q) x = M.add(x, M.mul(pipow[k], teich[t % R->Q]));
      if (!R->index_.emplace(x, c).second)
        fail(ErrorKind::BadInput, "digit expansions of " + R->label + " are not unique");
      R->reps_[c] = std::move(x);
    }
    R->add_.reset(new std::atomic<uint16_t>[static_cast<size_t>(N) * N]);
    R->mul_.reset(new std::atomic<uint16_t>[static_cast<size_t>(N) * N]);
    for (size_t i = 0; i < static_cast<size_t>(N) * N; ++i) {
      R->add_[i].store(kUnset, std::memory_order_relaxed);
      R->mul_[i].store(kUnset, std::memory_order_relaxed);
    }
    R->neg_.resize(N);
    for (uint32_t c = 0; c < N; ++c) R->neg_[c] = R->lookup(M.neg(R->reps_[c]));
    return R;
  }

  uint32_t add(uint32_t a, uint32_t b) const {
    auto& slot = add_[static_cast<size_t>(a) * size + b];
    uint16_t v = slot.load(std::memory_order_relaxed);
    if (v == kUnset) {
      v = static_cast<uint16_t>(lookup(model_->add(reps_[a], reps_[b])));
      slot.store(v, std::memory_order_relaxed);
    }
    return v;
  }
  uint32_t mul(uint32_t a, uint32_t b) const {
    auto& slot = mul_[static_cast<size_t>(a) * size + b];
    uint16_t v = slot.load(std::memory_order_relaxed);
    if (v == kUnset) {
      v = static_cast<uint16_t>(lookup(model_->mul(reps_[a], reps_[b])));
      slot.store(v, std::memory_order_relaxed);
    }
    return v;
  }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t pow(uint32_t a, uint64_t e) const {
    uint32_t r = one(), b = a;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  bool is_unit(uint32_t a) const { return digit(a, 0) != 0; }
  uint32_t inv(uint32_t a) const {
    if (!is_unit(a)) fail(ErrorKind::NonUnitInverse, "element of positive valuation in " + label);
    uint64_t units = static_cast<uint64_t>(Q - 1) * (size / Q);
    return pow(a, units - 1);
  }

  uint32_t zero() const { return 0; }
  uint32_t one() const { return 1; }
  uint32_t teich(uint32_t residue_code) const { return residue_code; }
  uint32_t uniformizer() const { return levels > 1 ? Q : 0; }
  uint32_t from_int(int64_t k) const {
    bool negative = k < 0;
    uint64_t m = negative ? static_cast<uint64_t>(-k) : static_cast<uint64_t>(k);
    uint32_t r = 0, b = 1;
    while (m) {
      if (m & 1) r = add(r, b);
      b = add(b, b);
      m >>= 1;
    }
    return negative ? neg(r) : r;
  }

  uint32_t digit(uint32_t a, uint32_t i) const { return (a / qpow_[i]) % Q; }
  std::vector<uint32_t> digits(uint32_t a) const {
    std::vector<uint32_t> d(levels);
    for (uint32_t i = 0; i < levels; ++i, a /= Q) d[i] = a % Q;
    return d;
  }
  uint32_t from_digits(const std::vector<uint32_t>& d) const {
    uint32_t c = 0;
    for (size_t i = std::min<size_t>(d.size(), levels); i-- > 0;) c = c * Q + d[i] % Q;
    return c;
  }
  // First nonzero digit; levels for zero (standing for ">= levels").
  uint32_t val(uint32_t a) const {
    for (uint32_t i = 0; i < levels; ++i, a /= Q)
      if (a % Q) return i;
    return levels;
  }
  uint32_t trunc(uint32_t a, uint32_t L) const { return L >= levels ? a : a % qpow_[L]; }
  uint32_t qpow(uint32_t k) const { return qpow_[k]; }
  // Divides an element of valuation >= k by pi^k, returning the quotient modulo m^(levels-k).
  uint32_t shift_down(uint32_t a, uint32_t k) const {
    if (val(a) < k) fail(ErrorKind::BadInput, "element not divisible by the requested uniformizer power");
    return a / qpow_[k];
  }
  // Key whose numeric order is the lexicographic order of the digit list (low digit first).
  uint32_t lexkey(uint32_t a) const {
    uint32_t k = 0;
    for (uint32_t i = 0; i < levels; ++i, a /= Q) k = k * Q + a % Q;
    return k;
  }
  const RingModel::Rep& rep(uint32_t a) const { return reps_[a]; }
  uint32_t lookup(const RingModel::Rep& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) fail(ErrorKind::BadInput, "value outside the digit system of " + label);
    return it->second;
  }
  const RingModel& model() const { return *model_; }

 private:
  static constexpr uint16_t kUnset = 0xFFFF;
  std::shared_ptr<const RingModel> model_;
  std::vector<uint32_t> qpow_;
  std::vector<RingModel::Rep> reps_;
  std::unordered_map<RingModel::Rep, uint32_t, RepHash> index_;
  std::unique_ptr<std::atomic<uint16_t>[]> add_, mul_;
  std::vector<uint32_t> neg_;
  FiniteRing() = default;
};

using RingPtr = std::shared_ptr<const FiniteRing>;

// Unital ring isomorphism between two digit-coded rings, determined by the images
// y of tau(g) (g the primitive residue element) and v of the uniformizer.
struct RingIso {
  uint32_t residue_generator_image = 0;
  uint32_t uniformizer_image = 0;
  std::vector<uint32_t> map;
  bool equivariant = false;
};

// Extra per-level constraint on a candidate map (used for conjugation equivariance).
using IsoConstraint = std::function<bool(uint32_t level, const std::vector<uint32_t>& phi)>;

namespace detail {

struct IsoSearch {
  const FiniteRing& R1;
  const FiniteRing& R2;
  const IsoConstraint& extra;
  bool exhaustive;
  uint32_t y = 0;
  std::vector<uint32_t> ypow;
  std::vector<uint32_t> phi;

  // Map at the given level for uniformizer image v (codes below Q^level only).
  void build_phi(uint32_t v, uint32_t level) {
    const FiniteField& F = *R1.residue;
    std::vector<uint32_t> vpow(level);
    vpow[0] = 1;
    for (uint32_t k = 1; k < level; ++k) vpow[k] = R2.mul(vpow[k - 1], v);
    uint32_t N = R1.qpow(level);
    phi.assign(N, 0);
    for (uint32_t c = 1; c < N; ++c) {
      uint32_t acc = 0, t = c;
      for (uint32_t k = 0; k < level; ++k, t /= R1.Q) {
        uint32_t b = t % R1.Q;
        if (b) acc = R2.add(acc, R2.mul(vpow[k], ypow[F.log(b)]));
      }
      phi[c] = R2.trunc(acc, level);
    }
  }

  bool hom_at(uint32_t level) {
    uint32_t N = R1.qpow(level);
    for (uint32_t k = 0; k < level; ++k)
      for (uint32_t b = 1; b < R1.Q; ++b) {
        uint32_t m = b * R1.qpow(k);
        for (uint32_t x = 0; x < N; ++x) {
          uint32_t s = R1.trunc(R1.add(x, m), level);
          if (phi[s] != R2.trunc(R2.add(phi[x], phi[m]), level)) return false;
          uint32_t p = R1.trunc(R1.mul(x, m), level);
          if (phi[p] != R2.trunc(R2.mul(phi[x], phi[m]), level)) return false;
        }
      }
    return !extra || extra(level, phi);
  }

  bool bijective() const {
    std::vector<char> hit(R2.size, 0);
    for (uint32_t c : phi) {
      if (hit[c]) return false;
      hit[c] = 1;
    }
    return true;
  }

  std::optional<uint32_t> dfs(uint32_t v, uint32_t level) {
    build_phi(v, level);
    if (!hom_at(level)) return std::nullopt;
    if (level == R1.levels) return bijective() ? std::optional<uint32_t>(v) : std::nullopt;
    for (uint32_t d = 0; d < R2.Q; ++d) {
      if (!exhaustive && level == 1 && d == 0) continue;  // uniformizer image has valuation 1
      uint32_t cand = v + d * R2.qpow(level);
      if (auto r = dfs(cand, level + 1)) return r;
    }
    return std::nullopt;
  }
};

}  // namespace detail

// Searches for a unital ring isomorphism R1 -> R2. The default search maps tau(g)
// to Teichmuller-type elements over roots of the minimal polynomial of g and
// builds the uniformizer image digit by digit, pruning any prefix that fails to
// be a homomorphism at its level. With exhaustive = true every pair of images
// (y, v) in R2 x R2 is admitted.
inline std::optional<RingIso> ring_iso_search_raw(const FiniteRing& R1, const FiniteRing& R2,
                                                  const IsoConstraint& extra = {}, bool exhaustive = false) {
  if (R1.Q != R2.Q || R1.levels != R2.levels || R1.residue->p != R2.residue->p) return std::nullopt;
  const FiniteField& F1 = *R1.residue;
  const FiniteField& F2 = *R2.residue;
  std::vector<uint32_t> ys;
  if (exhaustive && R1.Q == 2) {
    ys.push_back(1);  // tau(1) = 1 is forced
  } else if (exhaustive) {
    for (uint32_t y = 0; y < R2.size; ++y) ys.push_back(y);
  } else {
    auto roots = F2.roots_prime(F1.min_poly_prime(F1.primitive()));
    for (uint32_t y = 0; y < R2.size; ++y)
      if (std::find(roots.begin(), roots.end(), R2.digit(y, 0)) != roots.end() && R2.pow(y, R2.Q) == y)
        ys.push_back(y);
  }
  detail::IsoSearch S{R1, R2, extra, exhaustive, 0, {}, {}};
  for (uint32_t y : ys) {
    S.y = y;
    S.ypow.assign(R1.Q > 1 ? R1.Q - 1 : 1, 1);
    for (uint32_t j = 1; j + 1 < R1.Q; ++j) S.ypow[j] = R2.mul(S.ypow[j - 1], y);
    uint32_t start_digits = exhaustive ? R2.Q : 1;
    for (uint32_t d0 = 0; d0 < start_digits; ++d0) {
      auto v = S.dfs(d0, 1);
      if (!v) continue;
      S.build_phi(*v, R1.levels);
      return RingIso{y, *v, S.phi, static_cast<bool>(extra)};
    }
  }
  return std::nullopt;
}

// Re-verifies a map as a unital ring isomorphism by checking all pairs.
inline bool verify_ring_iso(const FiniteRing& R1, const FiniteRing& R2, const std::vector<uint32_t>& phi) {
  if (R1.size != R2.size || phi.size() != R1.size || phi[1] != 1) return false;
  std::vector<char> hit(R2.size, 0);
  for (uint32_t c : phi) {
    if (c >= R2.size || hit[c]) return false;
    hit[c] = 1;
  }
  for (uint32_t a = 0; a < R1.size; ++a)
    for (uint32_t b = 0; b < R1.size; ++b) {
      if (phi[R1.add(a, b)] != R2.add(phi[a], phi[b])) return false;
      if (phi[R1.mul(a, b)] != R2.mul(phi[a], phi[b])) return false;
    }
  return true;
}

}  // namespace btlab
