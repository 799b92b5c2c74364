#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include <btlab/proximity.hpp>

using namespace btlab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::BadInput;
}

MetricPoint root(uint32_t k) { return MetricPoint::field(LocalFieldSpec::root_of_p(2, k)); }
MetricPoint laurent() { return MetricPoint::field(LocalFieldSpec::laurent(2)); }
MetricPoint dyadic_x(uint32_t i) {
  return MetricPoint::pair(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::laurent(2), monomial(i), monomial(1)));
}
MetricPoint inseparable() { return MetricPoint::pair(make_pair(PairKind::inseparable, LocalFieldSpec::laurent(2), std::nullopt, monomial(1))); }

// Truncations of a characteristic 0 ring and of F_q[[X]] can only agree while 2 = 0,
// so the agreement level is at most omega(2).
uint32_t omega_of_two(const LocalFieldSpec& s, uint32_t cap) { return ring_val(elem_from_int(make_ring(s, cap), 2)); }

}  // namespace

TEST_CASE("distance to F2((X)) is the valuation of 2") {
  for (uint32_t k = 1; k <= 4; ++k) {
    auto d = krasner_distance(root(k), laurent(), 6);
    CHECK(d.agree == omega_of_two(LocalFieldSpec::root_of_p(2, k), 6));
    CHECK(d.agree == k);
    CHECK_FALSE(d.capped);
    CHECK(d.chain.size() == k);
    REQUIRE(d.witness);
    CHECK(ring_val(d.witness->image_of_uniformizer) == 1);
  }
  CHECK(krasner_distance(root(1), laurent(), 4).agree == 1);
  CHECK(krasner_distance(root(2), laurent(), 4).agree == 2);
}

TEST_CASE("distance is symmetric and capped for identical points") {
  for (uint32_t a = 1; a <= 3; ++a)
    for (uint32_t b = 1; b <= 3; ++b)
      CHECK(krasner_distance(root(a), root(b), 5).agree == krasner_distance(root(b), root(a), 5).agree);
  auto d = krasner_distance(root(2), root(2), 5);
  CHECK(d.agree == 5);
  CHECK(d.capped);
  auto q3 = MetricPoint::field(LocalFieldSpec::q_p(3));
  CHECK(krasner_distance(q3, laurent(), 3).agree == 0);
}

TEST_CASE("pair distances") {
  // alpha = X^k against the inseparable pair: agreement 2k
  for (uint32_t k = 1; k <= 3; ++k) CHECK(krasner_distance(dyadic_x(k), inseparable(), 7).agree == 2 * k);
  auto s = MetricPoint::pair(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::q_p(2), std::nullopt, Coefficient::from_int(2)));
  CHECK(krasner_distance(s, inseparable(), 5).agree == 2);
  // alpha = pi over Q2(2^(1/k)) against alpha = X: agreement 2 omega(2)
  for (uint32_t k = 2; k <= 3; ++k) {
    auto b = MetricPoint::pair(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::root_of_p(2, k, 4), monomial(1), monomial(1)));
    CHECK(krasner_distance(dyadic_x(1), b, 7).agree == 2 * k);
  }
}

TEST_CASE("algebra distances scale with the degree") {
  for (uint32_t k = 1; k <= 2; ++k) {
    auto a = MetricPoint::algebra({LocalFieldSpec::root_of_p(2, k), 2, 1, ""});
    auto b = MetricPoint::algebra({LocalFieldSpec::laurent(2), 2, 1, ""});
    CHECK(krasner_distance(a, b, 5).agree == 2 * k);
  }
}

TEST_CASE("transport of SL2 through Q2(sqrt2) and F2((X))") {
  auto T = transport(root(2), laurent(), 2);
  CHECK(T.radius == 2);
  CHECK(T.group_verified);
  CHECK(T.ball_verified);
  CHECK(T.exhaustive);
  CHECK(T.G1->order() == T.G2->order());
  CHECK(T.B1.sphere_sizes() == std::vector<uint32_t>{1, 3, 6});
  // the vertex map commutes with the parent map
  for (uint32_t v = 0; v < T.f.size(); ++v) CHECK(T.f[T.B1.vertices[v].parent] == T.B2.vertices[T.f[v]].parent);
}

TEST_CASE("identity transport") {
  auto T = transport(root(3), root(3), 2);
  CHECK(T.verified());
  for (uint32_t i = 0; i < T.psi.size(); ++i) CHECK(T.psi[i] == i);
  for (uint32_t v = 0; v < T.f.size(); ++v) CHECK(T.f[v] == v);
}

TEST_CASE("dyadic transport shifts the radius by 2 i0") {
  auto a = dyadic_x(1);
  auto b = MetricPoint::pair(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::root_of_p(2, 3, 4), monomial(1), monomial(1)));
  auto small = transport(a, b, 4);
  CHECK(small.radius == 2);
  CHECK(small.G1->family == GroupFamily::SU3_dyadic_small);
  CHECK(small.verified());
  auto large = transport(a, b, 6);
  CHECK(large.radius == 4);
  CHECK(large.G1->family == GroupFamily::SU3_dyadic_large);
  CHECK(large.G2->family == GroupFamily::SU3_dyadic_large);
  CHECK(large.verified());
  CHECK(large.exhaustive);
}

TEST_CASE("dyadic to inseparable transport lands in SL2") {
  auto T = transport(dyadic_x(2), inseparable(), 4);
  CHECK(T.G1->family == GroupFamily::SU3_dyadic_small);
  CHECK(T.G2->family == GroupFamily::SL2_insep);
  CHECK(T.verified());
}

TEST_CASE("convergence traces") {
  auto rows = convergence_trace({root(1), root(2), root(3)}, laurent(), 5);
  REQUIRE(rows.size() == 3);
  for (uint32_t i = 0; i < 3; ++i) {
    CHECK(rows[i].distance.agree == i + 1);
    CHECK(rows[i].transported);
    CHECK(rows[i].radius == i + 1);
  }
  auto prow = convergence_trace({dyadic_x(1), dyadic_x(2), dyadic_x(3)}, inseparable(), 7);
  std::vector<uint32_t> agree;
  for (const auto& r : prow) agree.push_back(r.distance.agree);
  CHECK(agree == std::vector<uint32_t>{2, 4, 6});
  auto flat = convergence_trace({root(2), root(2)}, root(2), 3);
  for (const auto& r : flat) {
    CHECK(r.distance.capped);
    CHECK(r.transported);
  }
}

TEST_CASE("catalog is an ultrametric space") {
  auto C = catalog_distances(ramified_catalog(5), 6);
  REQUIRE(C.d.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(C.d[i][i].capped);
    for (size_t j = 0; j < 6; ++j) CHECK(C.d[i][j].agree == C.d[j][i].agree);
  }
  for (size_t a = 0; a < 5; ++a)
    for (size_t b = a + 1; b < 6; ++b) CHECK(C.d[a][b].agree == a + 1);
  auto U = check_ultrametric(C);
  CHECK(U.triples == 120);
  CHECK(U.violations == 0);
  CHECK(U.non_isosceles == 0);
}

TEST_CASE("ultrametric checker detects violations") {
  Catalog C;
  C.names = {"a", "b", "c"};
  C.d.assign(3, std::vector<DistanceResult>(3));
  C.d[0][1].agree = C.d[1][0].agree = 3;
  C.d[1][2].agree = C.d[2][1].agree = 3;
  C.d[0][2].agree = C.d[2][0].agree = 1;
  auto U = check_ultrametric(C);
  CHECK(U.violations > 0);
  CHECK(U.non_isosceles > 0);
}

TEST_CASE("precision caps") {
  CHECK(root(1).precision_cap() == 8);
  CHECK(laurent().precision_cap() == 12);
  CHECK(MetricPoint::field(LocalFieldSpec::q_p(3)).precision_cap() == 7);
  CHECK(MetricPoint::algebra({LocalFieldSpec::laurent(2), 2, 1, ""}).precision_cap() == 6);
}

TEST_CASE("proximity errors") {
  CHECK(kind_of([] { krasner_distance(root(2), laurent(), 99); }) == ErrorKind::CapExceedsPrecision);
  CHECK(kind_of([] { krasner_distance(root(2), inseparable(), 2); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { transport(root(1), laurent(), 2); }) == ErrorKind::NoWitness);
  CHECK(kind_of([] { transport(root(1), inseparable(), 1); }) == ErrorKind::RegimeMismatch);
  CHECK(kind_of([] { transport(root(2), laurent(), 2, GroupFamily::SU3_unram); }) == ErrorKind::RegimeMismatch);
  auto rows = convergence_trace({root(1)}, laurent(), 3, GroupFamily::SU3_unram);
  CHECK(rows[0].note.find("RegimeMismatch") != std::string::npos);
}
