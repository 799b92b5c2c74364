#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyclic_algebra.hpp"
#include "errors.hpp"
#include "local_groups.hpp"
#include "local_tree.hpp"
#include "quad_pair.hpp"
#include "trunc_ring.hpp"

namespace btlab {

// A point of one of the metric spaces: a local field, a quadratic pair or a cyclic
// division algebra.
struct MetricPoint {
  std::variant<LocalFieldSpec, std::shared_ptr<const QuadPair>, CyclicAlgebraSpec> value;
  std::string name;

  static MetricPoint field(LocalFieldSpec s) {
    std::string n = s.name;
    return {std::move(s), n};
  }
  static MetricPoint pair(QuadPair P) {
    std::string n = P.spec.name;
    return {std::make_shared<const QuadPair>(std::move(P)), n};
  }
  static MetricPoint pair(std::shared_ptr<const QuadPair> P) {
    std::string n = P->spec.name;
    return {std::move(P), n};
  }
  static MetricPoint algebra(CyclicAlgebraSpec s) {
    std::string n = s.name;
    return {std::move(s), n};
  }

  bool is_field() const { return value.index() == 0; }
  bool is_pair() const { return value.index() == 1; }
  bool is_algebra() const { return value.index() == 2; }
  const LocalFieldSpec& as_field() const { return std::get<0>(value); }
  const std::shared_ptr<const QuadPair>& as_pair() const { return std::get<1>(value); }
  const CyclicAlgebraSpec& as_algebra() const { return std::get<2>(value); }

  // Residue cardinality of the ring whose truncations are compared.
  uint64_t residue_cardinality() const {
    if (is_field()) return as_field().residue_cardinality();
    if (is_pair()) {
      uint64_t q = as_pair()->spec.base.residue_cardinality();
      return as_pair()->ramified() ? q : q * q;
    }
    uint64_t q = as_algebra().base.residue_cardinality(), r = 1;
    for (uint32_t i = 0; i < as_algebra().degree; ++i) r *= q;
    return r;
  }
  // Largest comparison level: the spec precision, clipped to the table size limit.
  uint32_t precision_cap() const {
    uint32_t cap = is_field() ? as_field().radius_cap() : is_pair() ? as_pair()->radius_cap() : as_algebra().radius_cap();
    uint64_t q = residue_cardinality(), size = 1;
    uint32_t m = 0;
    while (m < cap && size * q <= kMaxRingSize) {
      size *= q;
      ++m;
    }
    return m;
  }
};

struct DistanceResult {
  uint32_t agree = 0;  // distance 2^-agree
  uint32_t cap = 0;
  bool capped = false;  // agreement reached the cap, so the distance is at most 2^-cap
  std::vector<uint32_t> chain;  // levels at which a witness was found
  std::optional<IsoWitness> witness;
};

namespace detail {

inline bool same_coefficient(const std::optional<Coefficient>& a, const std::optional<Coefficient>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->is_integer == b->is_integer && a->integer == b->integer && a->digits == b->digits;
}

inline bool same_point(const MetricPoint& a, const MetricPoint& b) {
  if (a.value.index() != b.value.index()) return false;
  if (a.is_field()) return same_field_spec(a.as_field(), b.as_field());
  if (a.is_pair()) {
    const auto& x = a.as_pair()->spec;
    const auto& y = b.as_pair()->spec;
    return a.as_pair() == b.as_pair() || (x.kind == y.kind && same_field_spec(x.base, y.base) &&
                                          same_coefficient(x.alpha, y.alpha) && same_coefficient(x.beta, y.beta));
  }
  const auto& x = a.as_algebra();
  const auto& y = b.as_algebra();
  return x.degree == y.degree && x.hasse == y.hasse && same_field_spec(x.base, y.base);
}

inline std::optional<IsoWitness> iso_at(const MetricPoint& a, const MetricPoint& b, uint32_t m) {
  if (a.is_field()) return ring_iso_search(make_ring(a.as_field(), m), make_ring(b.as_field(), m));
  if (a.is_pair()) return pair_iso_search(*a.as_pair(), *b.as_pair(), m);
  RingPtr R1 = make_algebra_truncation(a.as_algebra(), m)->ring();
  RingPtr R2 = make_algebra_truncation(b.as_algebra(), m)->ring();
  auto iso = ring_iso_search_raw(*R1, *R2);
  if (!iso) return std::nullopt;
  return IsoWitness{{R2, iso->residue_generator_image}, {R2, iso->uniformizer_image}, false, iso->map};
}

}  // namespace detail

// Largest m <= cap with an isomorphism of level-m truncations (equivariant for pairs).
// Agreement is monotone in m, so the search stops at the first failure.
inline DistanceResult krasner_distance(const MetricPoint& a, const MetricPoint& b, std::optional<uint32_t> cap = std::nullopt) {
  if (a.value.index() != b.value.index()) fail(ErrorKind::BadInput, "points live in different metric spaces");
  uint32_t limit = std::min(a.precision_cap(), b.precision_cap());
  uint32_t R = cap ? *cap : limit;
  if (R > limit) fail(ErrorKind::CapExceedsPrecision, "cap " + std::to_string(R) + " exceeds the comparable precision " + std::to_string(limit));
  DistanceResult res;
  res.cap = R;
  if (a.residue_cardinality() != b.residue_cardinality()) return res;
  bool same = detail::same_point(a, b);
  for (uint32_t m = 1; m <= R; ++m) {
    if (same) {
      res.agree = m;
      res.chain.push_back(m);
      continue;
    }
    auto w = detail::iso_at(a, b, m);
    if (!w) break;
    res.agree = m;
    res.chain.push_back(m);
    res.witness = std::move(w);
  }
  res.capped = res.agree == R;
  return res;
}

struct TransportResult {
  GroupPtr G1, G2;
  uint32_t level = 0;   // agreement level used
  uint32_t radius = 0;  // radius of the transported models
  std::vector<uint32_t> psi;  // element index map G1 -> G2
  LocalBall B1, B2;
  std::vector<uint32_t> f;    // vertex map B1 -> B2
  bool group_verified = false;
  bool ball_verified = false;
  bool exhaustive = false;    // ball equivariance checked on every (g, v)
  bool verified() const { return group_verified && ball_verified; }
};

// Default family for a point.
inline GroupFamily default_family(const MetricPoint& a, uint32_t m) {
  if (a.is_field() || a.is_algebra()) return GroupFamily::SL2D;
  const auto& P = *a.as_pair();
  switch (P.spec.kind) {
    case PairKind::unramified: return GroupFamily::SU3_unram;
    case PairKind::ramified_odd: return GroupFamily::SU3_ram_odd;
    case PairKind::inseparable: return GroupFamily::SL2_insep;
    case PairKind::ramified_dyadic: return m <= 2 * *P.i0 ? GroupFamily::SU3_dyadic_small : GroupFamily::SU3_dyadic_large;
  }
  return GroupFamily::SL2D;
}

inline constexpr uint64_t kExhaustiveTransportOrder = 100000;

namespace detail {

inline GroupCarrier carrier_of(const MetricPoint& a) {
  if (a.is_field()) return {CyclicAlgebraSpec{a.as_field(), 1, 1, a.as_field().name}, nullptr};
  if (a.is_algebra()) return {a.as_algebra(), nullptr};
  return {std::nullopt, a.as_pair()};
}

// Family used for the partner point: the inseparable pair stands in for the small
// dyadic regime.
inline GroupFamily partner_family(const MetricPoint& b, GroupFamily f, uint32_t radius) {
  if (!b.is_pair()) return f;
  const auto& P = *b.as_pair();
  if (f == GroupFamily::SU3_dyadic_small && P.spec.kind == PairKind::inseparable) return GroupFamily::SL2_insep;
  if (f == GroupFamily::SL2_insep && P.dyadic()) {
    if (radius > 2 * *P.i0) fail(ErrorKind::RegimeMismatch, "partner pair is not in the small dyadic regime");
    return GroupFamily::SU3_dyadic_small;
  }
  return f;
}

}  // namespace detail

// Transports the local model of a to the local model of b through an isomorphism of
// level-m truncations. Dyadic pairs with m > 2 i0 give models at radius m - 2 i0.
inline TransportResult transport(const MetricPoint& a, const MetricPoint& b, uint32_t m,
                                 std::optional<GroupFamily> family = std::nullopt, uint64_t budget = default_budget()) {
  if (a.value.index() != b.value.index()) fail(ErrorKind::RegimeMismatch, "points live in different metric spaces");
  if (m < 1) fail(ErrorKind::BadLevel, "transport level must be positive");
  GroupFamily f = family ? *family : default_family(a, m);
  if ((a.is_field() || a.is_algebra()) && f != GroupFamily::SL2D) fail(ErrorKind::RegimeMismatch, "fields and algebras carry SL2D");
  if (a.is_pair() && f == GroupFamily::SL2D) fail(ErrorKind::RegimeMismatch, "pairs do not carry SL2D");

  TransportResult T;
  T.level = m;
  T.radius = m;
  bool same = detail::same_point(a, b);
  std::optional<IsoWitness> w;
  if (!same) {
    w = detail::iso_at(a, b, m);
    if (!w) fail(ErrorKind::NoWitness, "no isomorphism at level " + std::to_string(m));
  }

  GroupCarrier c1 = detail::carrier_of(a), c2 = detail::carrier_of(b);
  std::optional<uint32_t> t2;
  if (f == GroupFamily::SU3_dyadic_large) {
    const auto& P1 = *a.as_pair();
    if (!b.as_pair()->dyadic() || b.as_pair()->i0 != P1.i0)
      fail(ErrorKind::RegimeMismatch, "large dyadic transport needs two dyadic pairs with the same i0");
    uint32_t i0 = *P1.i0;
    if (m <= 2 * i0) fail(ErrorKind::RegimeMismatch, "large regime needs agreement level > 2 i0");
    T.radius = m - 2 * i0;
    if (T.radius % 2) fail(ErrorKind::RegimeMismatch, "dyadic local models have even radius");
    if (T.radius > 2 * i0) {
      uint32_t t1 = P1.context(m)->t;
      t2 = same ? t1 : w->map[t1];
    } else {
      f = GroupFamily::SU3_dyadic_small;
    }
  }
  GroupFamily f2 = detail::partner_family(b, f, T.radius);
  T.G1 = make_group(f, c1, T.radius);
  T.G2 = make_group(f2, c2, T.radius, t2);
  if (T.G1->dim != T.G2->dim) fail(ErrorKind::RegimeMismatch, "models have different matrix sizes");

  const auto& E1 = T.G1->elements(budget);
  const auto& E2 = T.G2->elements(budget);
  if (E1.elems.size() != E2.elems.size()) fail(ErrorKind::NoWitness, "transported groups have different orders");
  const FiniteRing& R2 = *T.G2->R;
  T.psi.resize(E1.elems.size());
  for (uint32_t i = 0; i < E1.elems.size(); ++i) {
    Matrix g = E1.elems[i];
    if (!same)
      for (auto& v : g.a) v = R2.trunc(w->map[v], T.radius);
    auto j = E2.find(g);
    if (!j) fail(ErrorKind::NoWitness, "isomorphism does not carry the group onto its partner");
    T.psi[i] = *j;
  }
  T.group_verified = verify_group_iso(*T.G1, *T.G2, T.psi);

  T.B1 = build_ball(T.G1, T.radius, budget);
  T.B2 = build_ball(T.G2, T.radius, budget);
  T.exhaustive = E1.elems.size() <= kExhaustiveTransportOrder;
  if (T.B1.sphere_sizes() == T.B2.sphere_sizes()) {
    // the entrywise map sends the coset of a representative to the coset of its image
    T.f.resize(T.B1.vertices.size());
    for (uint32_t v = 0; v < T.B1.vertices.size(); ++v) {
      const auto& x = T.B1.vertices[v];
      T.f[v] = T.B2.vertex_id(x.level, T.B2.coset_of[x.level][T.psi[x.rep]]);
    }
    T.ball_verified = verify_equivariant_bijection(T.B1, T.B2, T.psi, T.f, T.exhaustive);
    if (!T.ball_verified) {
      auto g = ball_isomorphic(T.B1, T.B2, T.psi);
      if (g) {
        T.f = *g;
        T.ball_verified = verify_equivariant_bijection(T.B1, T.B2, T.psi, T.f, T.exhaustive);
      }
    }
  }
  return T;
}

struct TraceRow {
  uint32_t index = 0;
  DistanceResult distance;
  bool transported = false;  // a verified transport exists at the agreement level
  uint32_t radius = 0;       // radius of the transported models
  std::string note;
};

// Agreement of each point with the limit, plus a transport check at that level.
inline std::vector<TraceRow> convergence_trace(const std::vector<MetricPoint>& seq, const MetricPoint& limit,
                                               std::optional<uint32_t> cap = std::nullopt,
                                               std::optional<GroupFamily> family = std::nullopt,
                                               uint64_t budget = default_budget()) {
  std::vector<TraceRow> rows;
  for (uint32_t i = 0; i < seq.size(); ++i) {
    TraceRow row;
    row.index = i;
    row.distance = krasner_distance(seq[i], limit, cap);
    if (row.distance.agree > 0) {
      try {
        auto T = transport(seq[i], limit, row.distance.agree, family, budget);
        row.transported = T.verified();
        row.radius = T.radius;
      } catch (const Error& e) {
        row.note = e.what();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Catalog {
  std::vector<std::string> names;
  std::vector<std::vector<DistanceResult>> d;  // symmetric
};

inline Catalog catalog_distances(const std::vector<MetricPoint>& points, std::optional<uint32_t> cap = std::nullopt) {
  Catalog C;
  size_t n = points.size();
  C.d.assign(n, std::vector<DistanceResult>(n));
  for (size_t i = 0; i < n; ++i) {
    C.names.push_back(points[i].name);
    for (size_t j = i; j < n; ++j) {
      C.d[i][j] = krasner_distance(points[i], points[j], cap);
      if (j != i) {
        C.d[j][i] = C.d[i][j];
        C.d[j][i].witness.reset();
      }
    }
  }
  return C;
}

struct UltrametricReport {
  uint64_t triples = 0;
  uint64_t violations = 0;     // d(a,c) > max(d(a,b), d(b,c))
  uint64_t non_isosceles = 0;  // the two largest distances differ
};

// Checks every ordered triple of distinct points. Distances are 2^-agree, so the
// largest distance has the smallest agreement level.
inline UltrametricReport check_ultrametric(const Catalog& C) {
  UltrametricReport r;
  size_t n = C.d.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        ++r.triples;
        uint32_t ab = C.d[a][b].agree, bc = C.d[b][c].agree, ac = C.d[a][c].agree;
        if (ac < std::min(ab, bc)) ++r.violations;
        std::vector<uint32_t> s{ab, bc, ac};
        std::sort(s.begin(), s.end());
        if (s[0] != s[1]) ++r.non_isosceles;
      }
  return r;
}

// Q2(2^(1/k)) for k = 1..kmax plus F2((X)).
inline std::vector<MetricPoint> ramified_catalog(uint32_t kmax = 5) {
  std::vector<MetricPoint> pts;
  for (uint32_t k = 1; k <= kmax; ++k) {
    auto s = LocalFieldSpec::root_of_p(2, k);
    s.name = k == 1 ? "Q2" : "Q2(2^(1/" + std::to_string(k) + "))";
    pts.push_back(MetricPoint::field(s));
  }
  auto l = LocalFieldSpec::laurent(2);
  l.name = "F2((X))";
  pts.push_back(MetricPoint::field(l));
  return pts;
}

}  // namespace btlab
