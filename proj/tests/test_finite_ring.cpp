#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <btlab/finite_field.hpp>
#include <btlab/finite_ring.hpp>
#include <btlab/trunc_ring.hpp>

using namespace btlab;

TEST_CASE("F4 tables match polynomial arithmetic mod x^2+x+1") {
  auto F = FiniteField::prime_extension(2, {1, 1, 1});
  REQUIRE(F->q == 4);
  // Oracle: codes are bit vectors (a0 + a1 x); multiply and reduce by x^2 = x + 1.
  auto oracle = [](uint32_t a, uint32_t b) {
    uint32_t c = 0;
    for (int i = 0; i < 2; ++i)
      if (b >> i & 1) c ^= a << i;
    if (c & 4) c ^= 0b111;
    return c;
  };
  for (uint32_t a = 0; a < 4; ++a)
    for (uint32_t b = 0; b < 4; ++b) {
      CHECK(F->add(a, b) == (a ^ b));
      CHECK(F->mul(a, b) == oracle(a, b));
    }
  for (uint32_t a = 1; a < 4; ++a) CHECK(F->mul(a, F->inv(a)) == 1);
  CHECK(F->frob(2) == 3);
  CHECK(F->frob(F->frob(2)) == 2);
}

TEST_CASE("prime fields and primitive elements") {
  auto F5 = FiniteField::prime_extension(5, {0, 1});
  REQUIRE(F5->q == 5);
  for (uint32_t a = 0; a < 5; ++a)
    for (uint32_t b = 0; b < 5; ++b) CHECK(F5->mul(a, b) == a * b % 5);
  uint32_t g = F5->primitive();
  std::set<uint32_t> seen;
  for (uint32_t k = 0; k < 4; ++k) seen.insert(F5->exp(k));
  CHECK(seen.size() == 4);
  CHECK(F5->log(g) == 1);
}

TEST_CASE("minimal polynomials and roots") {
  auto F = FiniteField::prime_extension(2, {1, 1, 1});
  auto mp = F->min_poly_prime(2);
  CHECK(mp == std::vector<uint32_t>{1, 1, 1});
  auto roots = F->roots_prime(mp);
  CHECK(roots == std::vector<uint32_t>{2, 3});
  auto F3 = FiniteField::prime_extension(3, {0, 1});
  CHECK(F3->is_irreducible({1, 0, 1}));
  CHECK_FALSE(F3->is_irreducible({2, 0, 1}));
}

TEST_CASE("residue field errors") {
  CHECK_THROWS_AS(FiniteField::prime_extension(2, {1, 0, 1}), Error);
  try {
    FiniteField::prime_extension(2, {1, 0, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReducibleExtension);
  }
  try {
    FiniteField::prime_extension(4, {0, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadInput);
  }
}

TEST_CASE("finite ring laws hold exhaustively on small rings") {
  for (auto spec : {LocalFieldSpec::q_p(2), LocalFieldSpec::q_p(3), LocalFieldSpec::laurent(2),
                    LocalFieldSpec::root_of_p(2, 2)}) {
    auto R = make_ring(spec, 3).ring;
    INFO(R->label);
    const uint32_t N = R->size;
    for (uint32_t a = 0; a < N; ++a) {
      CHECK(R->add(a, 0) == a);
      CHECK(R->mul(a, 1) == a);
      CHECK(R->add(a, R->neg(a)) == 0);
      for (uint32_t b = 0; b < N; ++b) {
        CHECK(R->add(a, b) == R->add(b, a));
        CHECK(R->mul(a, b) == R->mul(b, a));
        for (uint32_t c = 0; c < N; c += 3) {
          CHECK(R->mul(a, R->add(b, c)) == R->add(R->mul(a, b), R->mul(a, c)));
          CHECK(R->mul(R->mul(a, b), c) == R->mul(a, R->mul(b, c)));
        }
      }
    }
  }
}

TEST_CASE("valuation, truncation and shifting use the digit code") {
  auto R = make_ring(LocalFieldSpec::q_p(2), 4).ring;
  CHECK(R->val(0) == 4);
  CHECK(R->val(1) == 0);
  CHECK(R->val(12) == 2);
  CHECK(R->trunc(13, 2) == 1);
  CHECK(R->shift_down(12, 2) == 3);
  CHECK_THROWS_AS(R->shift_down(6, 2), Error);
  CHECK(R->uniformizer() == 2);
  for (uint32_t a = 1; a < 16; a += 2) CHECK(R->mul(a, R->inv(a)) == 1);
  CHECK_THROWS_AS(R->inv(2), Error);
}

TEST_CASE("verify_ring_iso rejects non-maps") {
  auto R = make_ring(LocalFieldSpec::q_p(2), 2).ring;
  std::vector<uint32_t> id{0, 1, 2, 3};
  CHECK(verify_ring_iso(*R, *R, id));
  CHECK_FALSE(verify_ring_iso(*R, *R, {0, 1, 3, 2}));
  CHECK_FALSE(verify_ring_iso(*R, *R, {0, 1, 1, 3}));
}

TEST_CASE("table size limit") {
  CHECK_THROWS_AS(make_ring(LocalFieldSpec::q_p(2, 16), 13), Error);
}
