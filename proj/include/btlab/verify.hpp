#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cyclic_algebra.hpp"
#include "errors.hpp"
#include "local_groups.hpp"
#include "local_tree.hpp"
#include "proximity.hpp"
#include "quad_pair.hpp"
#include "trunc_ring.hpp"

namespace btlab {

struct CheckResult {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string id;
  uint32_t criterion = 0;  // acceptance criterion number, 0 for auxiliary checks
  std::string title;
  std::function<CheckResult()> run;
};

namespace checks {

inline std::string join(const std::vector<uint32_t>& v) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

inline GroupPtr sl2_over(const LocalFieldSpec& s, uint32_t r) {
  return make_group(GroupFamily::SL2D, GroupCarrier{CyclicAlgebraSpec{s, 1, 1, s.name}, nullptr}, r);
}

inline std::shared_ptr<const QuadPair> share(QuadPair P) { return std::make_shared<const QuadPair>(std::move(P)); }

inline std::shared_ptr<const QuadPair> unramified_f4() {
  return share(make_pair(PairKind::unramified, LocalFieldSpec::laurent(2), Coefficient::from_int(1), Coefficient::from_int(1), "F4((X))/F2((X))"));
}
inline std::shared_ptr<const QuadPair> dyadic_x(uint32_t i) {
  return share(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::laurent(2), monomial(i), monomial(1), "alpha=X^" + std::to_string(i)));
}
inline std::shared_ptr<const QuadPair> inseparable_f2() {
  return share(make_pair(PairKind::inseparable, LocalFieldSpec::laurent(2), std::nullopt, monomial(1), "F2((sqrt X))"));
}
inline std::shared_ptr<const QuadPair> odd_f3() {
  return share(make_pair(PairKind::ramified_odd, LocalFieldSpec::laurent(3), Coefficient::from_int(0), monomial(1), "F3((sqrt X))"));
}

// Every vertex below the outer sphere has the given degree per level.
inline std::vector<uint32_t> interior_degrees(const LocalBall& B) {
  auto deg = B.degrees();
  std::vector<uint32_t> out;
  for (uint32_t x = 0; x + 1 < B.level_ids.size(); ++x) {
    std::set<uint32_t> s;
    for (uint32_t v : B.level_ids[x]) s.insert(deg[v]);
    out.push_back(s.size() == 1 ? *s.begin() : 0);
  }
  return out;
}

inline bool spheres_transitive(const LocalBall& B) {
  for (const auto& o : sphere_orbits(B))
    if (o.size() != 1) return false;
  return true;
}

// Truncation G_hi -> G_lo: surjective with every fiber of the given size.
inline bool constant_fibers(const LocalGroup& hi, const LocalGroup& lo, uint64_t fiber, std::string& why) {
  const auto& H = hi.elements();
  const auto& L = lo.elements();
  std::vector<uint64_t> count(L.elems.size(), 0);
  for (const auto& g : H.elems) {
    auto k = L.find(truncate_elem(hi, g, lo));
    if (!k) {
      why = "image outside the lower group";
      return false;
    }
    ++count[*k];
  }
  for (uint64_t c : count)
    if (c != fiber) {
      why = "fiber of size " + std::to_string(c);
      return false;
    }
  return true;
}

inline CheckResult krasner_q2sqrt2() {
  auto d = krasner_distance(MetricPoint::field(LocalFieldSpec::root_of_p(2, 2)), MetricPoint::field(LocalFieldSpec::laurent(2)), 4);
  return {d.agree == 2 && !d.capped, "agree=" + std::to_string(d.agree) + " cap=4"};
}

inline CheckResult krasner_ladder() {
  auto F = MetricPoint::field(LocalFieldSpec::laurent(2));
  std::vector<uint32_t> got;
  bool ok = true;
  for (uint32_t k = 1; k <= 3; ++k) {
    auto d = krasner_distance(MetricPoint::field(LocalFieldSpec::root_of_p(2, k)), F, 5);
    got.push_back(d.agree);
    ok = ok && d.agree == k && !d.capped;
  }
  return {ok, "agree " + join(got) + " for degrees 1,2,3 at cap 5"};
}

inline CheckResult catalog_ultrametric() {
  auto pts = ramified_catalog(5);
  auto C = catalog_distances(pts, 6);
  auto U = check_ultrametric(C);
  bool ok = U.violations == 0 && U.non_isosceles == 0;
  uint32_t wrong = 0;
  // points 0..4 are Q2(2^(1/k)), k = index + 1; point 5 is F2((X))
  for (uint32_t a = 0; a < 5; ++a)
    for (uint32_t b = a + 1; b < 6; ++b)
      if (C.d[a][b].agree != a + 1) ++wrong;
  ok = ok && wrong == 0;
  return {ok, std::to_string(U.triples) + " triples, " + std::to_string(U.violations) + " ultrametric violations, " +
                  std::to_string(U.non_isosceles) + " non-isosceles, " + std::to_string(wrong) + " off-ladder distances"};
}

inline CheckResult ball_shape() {
  auto B1 = build_ball(sl2_over(LocalFieldSpec::q_p(2), 2));
  auto B2 = build_ball(make_group(GroupFamily::SU3_unram, {std::nullopt, unramified_f4()}, 2));
  auto s1 = B1.sphere_sizes(), s2 = B2.sphere_sizes();
  auto d1 = interior_degrees(B1), d2 = interior_degrees(B2);
  bool ok = s1 == std::vector<uint32_t>{1, 3, 6} && d1 == std::vector<uint32_t>{3, 3} &&
            s2 == std::vector<uint32_t>{1, 9, 18} && d2 == std::vector<uint32_t>{9, 3};
  return {ok, "SL2 spheres " + join(s1) + " degrees " + join(d1) + "; SU3 unram spheres " + join(s2) + " degrees " + join(d2)};
}

inline CheckResult truncation_surjectivity() {
  auto q2 = LocalFieldSpec::q_p(2);
  auto G3 = sl2_over(q2, 3), G2 = sl2_over(q2, 2), G1 = sl2_over(q2, 1);
  std::string why;
  bool a = constant_fibers(*G3, *G2, 8, why) && constant_fibers(*G2, *G1, 8, why);
  auto U = unramified_f4();
  auto H2 = make_group(GroupFamily::SU3_unram, {std::nullopt, U}, 2);
  auto H1 = make_group(GroupFamily::SU3_unram, {std::nullopt, U}, 1);
  bool b = a && constant_fibers(*H2, *H1, 256, why);
  std::ostringstream os;
  os << "SL2 orders " << G1->order() << "," << G2->order() << "," << G3->order() << "; SU3 unram orders " << H1->order() << ","
     << H2->order();
  if (!why.empty()) os << "; " << why;
  return {a && b, os.str()};
}

inline CheckResult kernel_order_odd() {
  auto P = odd_f3();
  auto C2 = P->context(2), C1 = P->context(1);
  uint64_t fg = count_matrix_space(*C2, 2, true, 1);
  uint64_t f = count_matrix_space(*C1, 1, false, -1);
  uint64_t g = count_matrix_space(*C1, 1, false, 1);
  bool ok = fg == 6561 && f == 243 && g == 27 && fg == f * g;
  return {ok, "|ker fg|=" + std::to_string(fg) + " |ker f|=" + std::to_string(f) + " |ker g|=" + std::to_string(g)};
}

inline CheckResult dyadic_degeneration() {
  auto P = dyadic_x(1);
  auto rep = su3_degeneration(P, 1);
  // small-regime membership against det = 1 on every 2 x 2 matrix over O_L / m^2
  auto S = make_group(GroupFamily::SU3_dyadic_small, {std::nullopt, P}, 2);
  const FiniteRing& L = *S->R;
  uint64_t mismatches = 0, members = 0;
  for (uint32_t a = 0; a < L.size; ++a)
    for (uint32_t b = 0; b < L.size; ++b)
      for (uint32_t c = 0; c < L.size; ++c)
        for (uint32_t d = 0; d < L.size; ++d) {
          bool sl2 = L.sub(L.mul(a, d), L.mul(b, c)) == 1;
          members += sl2;
          if (S->contains(Matrix(2, {a, b, c, d})) != sl2) ++mismatches;
        }
  bool ok = rep.surjective && rep.image_size == 48 && rep.target_order == 48 && mismatches == 0 && members == 48;
  return {ok, "integral " + std::to_string(rep.integral_order) + " -> image " + std::to_string(rep.image_size) + " of " +
                  std::to_string(rep.target_order) + "; membership mismatches " + std::to_string(mismatches)};
}

inline CheckResult collapse_witness() {
  auto P = dyadic_x(2);
  auto I = inseparable_f2();
  bool at4 = pair_iso_search(*P, *I, 4).has_value();
  bool at5 = pair_iso_search(*P, *I, 5).has_value();
  auto T = transport(MetricPoint::pair(P), MetricPoint::pair(I), 4);
  bool ok = P->i0 == 2u && at4 && !at5 && T.verified() && T.exhaustive && T.radius == 4 &&
            T.G1->family == GroupFamily::SU3_dyadic_small && T.G2->family == GroupFamily::SL2_insep;
  return {ok, std::string("level 4 ") + (at4 ? "iso" : "none") + ", level 5 " + (at5 ? "iso" : "none") + "; transport radius " +
                  std::to_string(T.radius) + " spheres " + join(T.B1.sphere_sizes()) + (T.verified() ? " verified" : " unverified")};
}

inline CheckResult algebra_laws() {
  std::mt19937 rng(20240601);
  uint64_t bad = 0;
  // exhaustive multiplicativity of phi, d = 2 over F2, level 2
  auto A = make_algebra(CyclicAlgebraSpec{LocalFieldSpec::laurent(2), 2, 1, "D"}, 2);
  auto R = A->ring();
  for (uint32_t x = 0; x < R->size; ++x)
    for (uint32_t y = 0; y < R->size; ++y) {
      auto cx = A->coords_of(x), cy = A->coords_of(y);
      if (A->embed_matrix(A->mul(cx, cy)) != mat_mul(*A->E, A->embed_matrix(cx), A->embed_matrix(cy))) ++bad;
    }
  // Nrd multiplicativity on random 2 x 2 matrices
  std::vector<CyclicAlgebraSpec> configs{{LocalFieldSpec::laurent(2), 2, 1, ""}, {LocalFieldSpec::q_p(2), 2, 1, ""},
                                         {LocalFieldSpec::laurent(2), 3, 1, ""}, {LocalFieldSpec::laurent(2), 3, 2, ""}};
  std::vector<uint32_t> levels{4, 4, 3, 3};
  uint64_t nrd_bad = 0;
  for (size_t c = 0; c < configs.size(); ++c) {
    auto D = make_algebra(configs[c], levels[c]);
    auto RD = D->ring();
    std::uniform_int_distribution<uint32_t> pick(0, RD->size - 1);
    for (int k = 0; k < 200; ++k) {
      Matrix g(2), h(2);
      for (auto& v : g.a) v = pick(rng);
      for (auto& v : h.a) v = pick(rng);
      Matrix gh = mat_mul(*RD, g, h);
      auto coords = [&](const Matrix& m) {
        std::vector<std::vector<uint32_t>> out;
        for (uint32_t v : m.a) out.push_back(D->coords_of(v));
        return out;
      };
      const FiniteRing& K = *D->K.ring;
      if (D->reduced_norm(coords(gh), 2) != K.mul(D->reduced_norm(coords(g), 2), D->reduced_norm(coords(h), 2))) ++nrd_bad;
    }
  }
  // phi(u) against the displayed matrix: ones below the diagonal, pi_K in the corner
  uint64_t u_bad = 0;
  for (uint32_t d : {2u, 3u}) {
    for (int64_t hs : {1, -1}) {
      auto D = make_algebra(CyclicAlgebraSpec{LocalFieldSpec::laurent(2), d, hs, ""}, d);
      Matrix expect(d);
      for (uint32_t i = 0; i + 1 < d; ++i) expect(i + 1, i) = 1;
      expect(0, d - 1) = D->pi;
      if (D->embed_matrix(D->u().coords) != expect) ++u_bad;
    }
  }
  bool ok = bad == 0 && nrd_bad == 0 && u_bad == 0;
  return {ok, "phi failures " + std::to_string(bad) + "/" + std::to_string(R->size * R->size) + ", Nrd failures " +
                  std::to_string(nrd_bad) + "/800, phi(u) mismatches " + std::to_string(u_bad)};
}

inline CheckResult opposite_algebras() {
  CyclicAlgebraSpec a{LocalFieldSpec::laurent(2), 3, 1, "D1"}, b{LocalFieldSpec::laurent(2), 3, 2, "D2"};
  auto R1 = make_algebra_truncation(a, 2)->ring();
  auto R2 = make_algebra_truncation(b, 2)->ring();
  bool iso = ring_iso_search_raw(*R1, *R2, {}, true).has_value();
  bool self = ring_iso_search_raw(*R1, *make_algebra_truncation(a, 2)->ring(), {}, true).has_value();
  bool eq = hasse_equivalent(a, b);
  return {!iso && self && eq, std::string("hasse 1 vs 2 at level 2: ") + (iso ? "isomorphic" : "no isomorphism") +
                                  "; self-isomorphism " + (self ? "found" : "missing") + "; hasse_equivalent " + (eq ? "true" : "false")};
}

inline CheckResult action_sanity() {
  auto G = sl2_over(LocalFieldSpec::q_p(2), 2);
  auto B = build_ball(G);
  auto ker = action_kernel(B);
  const auto& E = B.elements();
  const FiniteRing& R = *G->R;
  std::set<uint32_t> expect;
  for (uint32_t l = 0; l < R.size; ++l)
    if (R.mul(l, l) == 1) expect.insert(*E.find(Matrix(2, {l, 0, 0, l})));
  bool kernel_ok = std::set<uint32_t>(ker.begin(), ker.end()) == expect && expect.size() == 2;

  std::vector<std::pair<std::string, LocalBall>> balls;
  balls.emplace_back("SL2 Z/4", std::move(B));
  balls.emplace_back("SL2 Z/8", build_ball(sl2_over(LocalFieldSpec::q_p(2), 3)));
  balls.emplace_back("SU3 unram", build_ball(make_group(GroupFamily::SU3_unram, {std::nullopt, unramified_f4()}, 2)));
  balls.emplace_back("SU3 odd", build_ball(make_group(GroupFamily::SU3_ram_odd, {std::nullopt, odd_f3()}, 3)));
  balls.emplace_back("SL2(D) d=2", build_ball(make_group(GroupFamily::SL2D, {CyclicAlgebraSpec{LocalFieldSpec::laurent(2), 2, 1, ""}, nullptr}, 2)));
  balls.emplace_back("SU3 dyadic small", build_ball(make_dyadic_group(dyadic_x(2), 4)));
  balls.emplace_back("SL2 insep", build_ball(make_group(GroupFamily::SL2_insep, {std::nullopt, inseparable_f2()}, 4)));
  balls.emplace_back("SU3 dyadic large", build_ball(make_dyadic_group(dyadic_x(1), 4)));
  std::string bad;
  for (const auto& [name, b] : balls)
    if (!spheres_transitive(b)) bad += (bad.empty() ? "" : ", ") + name;
  return {kernel_ok && bad.empty(), "kernel size " + std::to_string(ker.size()) + (kernel_ok ? " = {+-Id}" : " != {+-Id}") + "; " +
                                        std::to_string(balls.size()) + " balls, non-transitive: " + (bad.empty() ? "none" : bad)};
}

}  // namespace checks

inline const std::vector<Check>& check_registry() {
  static const std::vector<Check> reg{
      {"krasner-ladder", 1, "Krasner ladder Q2, Q2(sqrt2), Q2(2^(1/3)) vs F2((X))", checks::krasner_ladder},
      {"catalog-ultrametric", 2, "non-archimedean 6-point catalog", checks::catalog_ultrametric},
      {"ball-shape", 3, "ball shapes SL2 Z/4 and SU3 unramified", checks::ball_shape},
      {"truncation-surjectivity", 4, "truncation maps surjective with constant fibers", checks::truncation_surjectivity},
      {"kernel-order-odd", 5, "kernel-order identity over F3((X))", checks::kernel_order_odd},
      {"dyadic-degeneration", 6, "dyadic degeneration onto SL2(O_L/m^2)", checks::dyadic_degeneration},
      {"collapse-witness", 7, "alpha = X^2 against the inseparable pair", checks::collapse_witness},
      {"algebra-laws", 8, "cyclic algebra embedding and reduced norm", checks::algebra_laws},
      {"opposite-algebras", 9, "opposite degree-3 algebras", checks::opposite_algebras},
      {"action-sanity", 10, "action kernels and sphere transitivity", checks::action_sanity},
      {"krasner-q2sqrt2", 0, "Q2(sqrt2) vs F2((X)) agree at level 2", checks::krasner_q2sqrt2},
  };
  return reg;
}

inline const Check& find_check(const std::string& id) {
  for (const auto& c : check_registry())
    if (c.id == id) return c;
  fail(ErrorKind::UnknownCheck, "no check named " + id);
}

// Runs a check, turning library errors into a failing result.
inline CheckResult run_check(const Check& c) {
  try {
    return c.run();
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

}  // namespace btlab
