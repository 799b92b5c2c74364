#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include <btlab/cyclic_algebra.hpp>

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

CyclicAlgebraSpec spec(LocalFieldSpec base, uint32_t d, int64_t h) { return CyclicAlgebraSpec{std::move(base), d, h, ""}; }

// E = (Z/2^r)[w]/(w^2 + w + 1) with elements a + b w; codes of K are integers mod 2^r.
struct EisensteinOracle {
  const CyclicAlgebra& A;
  int64_t mod;
  std::pair<int64_t, int64_t> ab(uint32_t e) const {
    const auto& rep = A.E->rep(e);
    return {rep[0], rep[1]};
  }
  int64_t norm(uint32_t e) const {
    auto [a, b] = ab(e);
    return (((a * a - a * b + b * b) % mod) + mod) % mod;
  }
  std::pair<int64_t, int64_t> frob(uint32_t e) const {
    auto [a, b] = ab(e);
    return {((a - b) % mod + mod) % mod, (mod - b) % mod};
  }
};

}  // namespace

TEST_CASE("unramified degree two extension over Q2") {
  auto A = make_algebra(spec(LocalFieldSpec::q_p(2), 2, 1), 6);
  REQUIRE(A->r == 3);
  REQUIRE(A->E->size == 64);
  EisensteinOracle O{*A, 8};
  for (uint32_t e = 0; e < A->E->size; ++e) {
    CHECK(O.frob(e) == O.ab(A->sigma(e)));
    CHECK(A->sigma(A->sigma(e)) == e);
  }
}

TEST_CASE("commutation rule and u^d = pi") {
  for (uint32_t d : {2u, 3u}) {
    for (int64_t h : {1, -1}) {
      auto A = make_algebra(spec(LocalFieldSpec::q_p(2), d, h), 2 * d);
      INFO("d=" << d << " h=" << h);
      auto u = A->u();
      auto ud = A->one();
      for (uint32_t i = 0; i < d; ++i) ud = alg_mul(ud, u);
      CHECK(ud == A->embed(A->pi));
      for (uint32_t e = 0; e < A->E->size; ++e) {
        auto x = A->embed(e);
        CHECK(alg_mul(x, u) == alg_mul(u, A->embed(A->sigma(e, A->h))));
      }
    }
  }
}

TEST_CASE("(u a)(u b) = pi sigma(a) b for d = 2") {
  auto A = make_algebra(spec(LocalFieldSpec::q_p(2), 2, 1), 4);
  for (uint32_t a = 0; a < A->E->size; ++a)
    for (uint32_t b = 0; b < A->E->size; ++b) {
      auto ua = alg_mul(A->u(), A->embed(a));
      auto ub = alg_mul(A->u(), A->embed(b));
      auto z = alg_mul(ua, ub);
      CHECK(z.coords[1] == 0);
      CHECK(z.coords[0] == A->E->trunc(A->E->mul(A->pi, A->E->mul(A->sigma(a), b)), A->coord_level[0]));
      // u e = sigma(e) u
      CHECK(alg_mul(A->u(), A->embed(a)) == alg_mul(A->embed(A->sigma(a)), A->u()));
    }
}

TEST_CASE("O_D is an associative ring") {
  auto A = make_algebra(spec(LocalFieldSpec::laurent(2), 2, 1), 2);
  auto R = A->ring();
  REQUIRE(R->size == 16);
  CHECK_FALSE(R->commutative);
  bool noncommutative = false;
  for (uint32_t x = 0; x < R->size; ++x)
    for (uint32_t y = 0; y < R->size; ++y) {
      noncommutative |= R->mul(x, y) != R->mul(y, x);
      for (uint32_t z = 0; z < R->size; ++z) {
        CHECK(R->mul(R->mul(x, y), z) == R->mul(x, R->mul(y, z)));
        CHECK(R->mul(x, R->add(y, z)) == R->add(R->mul(x, y), R->mul(x, z)));
      }
    }
  CHECK(noncommutative);
  CHECK(R->uniformizer() == A->code(A->u().coords));
}

TEST_CASE("phi display and multiplicativity") {
  auto A = make_algebra(spec(LocalFieldSpec::q_p(2), 2, 1), 4);
  const FiniteRing& E = *A->E;
  for (uint32_t x1 = 0; x1 < E.size; x1 += 3)
    for (uint32_t x2 = 0; x2 < E.size; x2 += 2) {
      auto x = A->from_coords({x1, x2});
      Matrix M = embed_matrix(x);
      CHECK(M(0, 0) == x.coords[0]);
      CHECK(M(1, 0) == x.coords[1]);
      CHECK(M(1, 1) == A->sigma(x.coords[0]));
      CHECK(M(0, 1) == E.mul(A->pi, A->sigma(x.coords[1])));
    }
  for (uint32_t x = 0; x < A->ring()->size; x += 7)
    for (uint32_t y = 0; y < A->ring()->size; y += 5) {
      auto cx = A->coords_of(x), cy = A->coords_of(y);
      Matrix lhs = A->embed_matrix(A->mul(cx, cy));
      Matrix rhs = mat_mul(E, A->embed_matrix(cx), A->embed_matrix(cy));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("reduced norm") {
  auto A = make_algebra(spec(LocalFieldSpec::q_p(2), 2, 1), 6);
  EisensteinOracle O{*A, 8};
  auto u = A->u();
  auto z = A->zero();
  CHECK(reduced_norm({u, z, z, u}) == elem_from_int(A->K, 4));
  for (uint32_t e = 0; e < A->E->size; ++e) {
    auto n = reduced_norm({A->embed(e), z, z, A->one()});
    CHECK(static_cast<int64_t>(n.code) == O.norm(e));
  }
  // Degree one: Nrd is the usual determinant.
  auto B = make_algebra(spec(LocalFieldSpec::q_p(2), 1, 0), 3);
  for (uint32_t a = 0; a < 8; ++a)
    for (uint32_t b = 0; b < 8; b += 3)
      for (uint32_t c = 0; c < 8; c += 5)
        for (uint32_t d = 0; d < 8; ++d) {
          auto n = reduced_norm({B->embed(a), B->embed(b), B->embed(c), B->embed(d)});
          CHECK(n.code == static_cast<uint32_t>(((int64_t(a) * d - int64_t(b) * c) % 8 + 8) % 8));
        }
}

TEST_CASE("reduced norm is multiplicative") {
  std::mt19937 rng(7);
  for (auto [s, level] : {std::pair{spec(LocalFieldSpec::q_p(2), 2, 1), 4u}, std::pair{spec(LocalFieldSpec::q_p(3), 2, 1), 2u},
                          std::pair{spec(LocalFieldSpec::laurent(2), 3, 1), 3u}, std::pair{spec(LocalFieldSpec::laurent(2), 3, -1), 3u}}) {
    auto A = make_algebra(s, level);
    auto R = A->ring();
    std::uniform_int_distribution<uint32_t> pick(0, R->size - 1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<uint32_t> g(4), k(4), gk(4);
      for (auto& v : g) v = pick(rng);
      for (auto& v : k) v = pick(rng);
      for (uint32_t i = 0; i < 2; ++i)
        for (uint32_t j = 0; j < 2; ++j)
          gk[i * 2 + j] = R->add(R->mul(g[i * 2], k[j]), R->mul(g[i * 2 + 1], k[2 + j]));
      auto as_elems = [&](const std::vector<uint32_t>& m) {
        std::vector<AlgebraElem> out;
        for (uint32_t c : m) out.push_back(A->from_coords(A->coords_of(c)));
        return out;
      };
      auto ng = reduced_norm(as_elems(g)), nk = reduced_norm(as_elems(k)), ngk = reduced_norm(as_elems(gk));
      CHECK(ring_mul(ng, nk) == ngk);
    }
  }
}

TEST_CASE("hasse equivalence") {
  auto q2 = LocalFieldSpec::q_p(2);
  CHECK(hasse_equivalent(spec(q2, 3, 1), spec(q2, 3, 2)));
  CHECK(hasse_equivalent(spec(q2, 3, 1), spec(q2, 3, -1)));
  CHECK_FALSE(hasse_equivalent(spec(q2, 5, 1), spec(q2, 5, 2)));
  CHECK_FALSE(hasse_equivalent(spec(q2, 2, 1), spec(q2, 3, 1)));
  CHECK_FALSE(hasse_equivalent(spec(q2, 2, 1), spec(LocalFieldSpec::q_p(3), 2, 1)));
  CHECK_FALSE(hasse_equivalent(spec(q2, 2, 1), spec(LocalFieldSpec::laurent(2), 2, 1)));
  CHECK(hasse_equivalent(spec(LocalFieldSpec::laurent(2), 2, 1), spec(LocalFieldSpec::laurent(2, {0, 1}, 8), 2, 1)));
}

TEST_CASE("valuation on O_D") {
  auto A = make_algebra(spec(LocalFieldSpec::q_p(2), 3, 1), 6);
  CHECK(alg_val(A->one()) == 0);
  CHECK(alg_val(A->u()) == 1);
  CHECK(alg_val(alg_mul(A->u(), A->u())) == 2);
  CHECK(alg_val(A->embed(A->pi)) == 3);
  CHECK(alg_val(A->zero()) == 6);
}

TEST_CASE("cyclic algebra errors") {
  auto q2 = LocalFieldSpec::q_p(2);
  CHECK(kind_of([&] { make_algebra(spec(q2, 4, 2), 4); }) == ErrorKind::BadHasse);
  CHECK(kind_of([&] { make_algebra(spec(q2, 2, 0), 4); }) == ErrorKind::BadHasse);
  CHECK(kind_of([&] { make_algebra(spec(q2, 2, 1), 3); }) == ErrorKind::BadLevel);
  CHECK(kind_of([&] { make_algebra_truncation(spec(q2, 2, 1), 0); }) == ErrorKind::BadLevel);
  CHECK(make_algebra_truncation(spec(q2, 2, 1), 3)->coord_level == std::vector<uint32_t>{2, 1});
  auto a = make_algebra(spec(q2, 2, 1), 2);
  auto b = make_algebra(spec(q2, 2, 1), 2);
  CHECK(kind_of([&] { alg_mul(a->u(), b->u()); }) == ErrorKind::MixedContexts);
  CHECK(kind_of([&] { reduced_norm({a->u(), a->u(), a->u()}); }) == ErrorKind::WrongShape);
}
