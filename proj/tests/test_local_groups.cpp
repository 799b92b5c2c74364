#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <map>

#include <btlab/local_groups.hpp>

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

std::shared_ptr<const QuadPair> share(QuadPair P) { return std::make_shared<const QuadPair>(std::move(P)); }

GroupPtr sl2(const LocalFieldSpec& s, uint32_t r) {
  return make_group(GroupFamily::SL2D, GroupCarrier{CyclicAlgebraSpec{s, 1, 1, s.name}, nullptr}, r);
}
auto unramified_f4() {
  return share(make_pair(PairKind::unramified, LocalFieldSpec::laurent(2), Coefficient::from_int(1), Coefficient::from_int(1)));
}
auto dyadic_x(uint32_t i) { return share(make_pair(PairKind::ramified_dyadic, LocalFieldSpec::laurent(2), monomial(i), monomial(1))); }
auto odd_f3() { return share(make_pair(PairKind::ramified_odd, LocalFieldSpec::laurent(3), Coefficient::from_int(0), monomial(1))); }

// |SL2(Z/p^r)| = p^(3r) (1 - 1/p^2)
uint64_t sl2_order(uint64_t p, uint32_t r) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < r; ++i) q *= p;
  return q * q * q / (p * p) * (p * p - 1);
}

}  // namespace

TEST_CASE("SL2 over Z/2^r against the order formula and brute force") {
  auto q2 = LocalFieldSpec::q_p(2);
  for (uint32_t r = 1; r <= 3; ++r) CHECK(sl2(q2, r)->order() == sl2_order(2, r));
  CHECK(sl2(LocalFieldSpec::q_p(3), 2)->order() == sl2_order(3, 2));
  // brute force over integers mod 4
  auto G = sl2(q2, 2);
  uint64_t count = 0;
  for (uint32_t a = 0; a < 4; ++a)
    for (uint32_t b = 0; b < 4; ++b)
      for (uint32_t c = 0; c < 4; ++c)
        for (uint32_t d = 0; d < 4; ++d) {
          bool member = (a * d + 4 * 4 - b * c) % 4 == 1;
          count += member;
          CHECK(G->contains(Matrix(2, {a, b, c, d})) == member);
        }
  CHECK(count == 48);
}

TEST_CASE("SU3 over F4/F2 has order q^3 (q^2 - 1) (q^3 + 1)") {
  auto G = make_group(GroupFamily::SU3_unram, {std::nullopt, unramified_f4()}, 1);
  uint64_t q = 2;
  CHECK(G->order() == q * q * q * (q * q - 1) * (q * q * q + 1));
  CHECK(G->contains(G->m_std()));
  for (const auto& g : G->elements().elems) {
    CHECK(G->mul(g, G->inverse(g)) == G->identity());
  }
}

TEST_CASE("SU3 unramified at radius 2") {
  auto G = make_group(GroupFamily::SU3_unram, {std::nullopt, unramified_f4()}, 2);
  CHECK(G->order() == 55296);
}

TEST_CASE("dyadic small regime is SL2 over O_L / m^2") {
  auto P = dyadic_x(2);
  auto G = make_group(GroupFamily::SU3_dyadic_small, {std::nullopt, P}, 2);
  // O_L / m^2 = F2[e]/e^2 and |SL2(F2[e]/e^2)| = |SL2(F2)| * |sl2(F2)| = 6 * 8
  CHECK(G->order() == 48);
  CHECK(G->dim == 2);
}

TEST_CASE("membership in P_x") {
  auto G = sl2(LocalFieldSpec::q_p(2), 3);
  Matrix u(2, {1, 1, 0, 1});
  for (int64_t x = -3; x <= 3; ++x) CHECK(G->in_Px(u, x) == (x >= 0));
  Matrix l(2, {1, 0, 1, 1});
  for (int64_t x = -3; x <= 3; ++x) CHECK(G->in_Px(l, x) == (x <= 0));
  Matrix l2(2, {1, 0, 2, 1});
  CHECK(G->in_Px(l2, 1));
  CHECK_FALSE(G->in_Px(l2, 2));
}

TEST_CASE("dyadic bounds with and without the gamma shift") {
  auto P = dyadic_x(1);
  auto G = make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, P}, 4);
  auto S = make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, P}, 4, std::nullopt, true);
  // literal bound [[0,-x/2,-x],[x/2,0,-x/2],[x,x/2,0]] rounded up
  CHECK(G->bound(1) == std::vector<int64_t>{0, 0, -1, 1, 0, 0, 1, 1, 0});
  CHECK(G->bound(2) == std::vector<int64_t>{0, -1, -2, 1, 0, -1, 2, 1, 0});
  // gamma = 1/4, i0 = 1: shift of 4 (2 gamma - i0) = -2 in quarter units
  CHECK(S->bound(0) == std::vector<int64_t>{0, 1, 0, 0, 0, -0, 0, 1, 0});
}

TEST_CASE("nu and truncation") {
  auto G = sl2(LocalFieldSpec::q_p(2), 3);
  auto m = G->nu(G->m_std());
  CHECK(m.apply(3) == -3);
  CHECK(G->nu(G->h_element(3)).apply(2) == 2);
  auto G2 = sl2(LocalFieldSpec::q_p(2), 2);
  Matrix g(2, {3, 2, 4, 3});
  REQUIRE(G->contains(g));
  CHECK(truncate_elem(*G, g, *G2) == Matrix(2, {3, 2, 0, 3}));
  CHECK(G2->contains(truncate_elem(*G, g, *G2)));
}

TEST_CASE("closure of the generators is the whole group") {
  for (auto G : {sl2(LocalFieldSpec::q_p(2), 2), make_group(GroupFamily::SU3_ram_odd, {std::nullopt, odd_f3()}, 2)}) {
    const auto& E = G->elements();
    auto C = G->closure(E.gens);
    CHECK(C.size() == E.elems.size());
    for (const auto& g : C) CHECK(E.find(g));
    for (size_t i = 0; i < E.elems.size(); i += 7)
      for (size_t j = 0; j < E.elems.size(); j += 11) CHECK(E.find(G->mul(E.elems[i], E.elems[j])));
  }
}

TEST_CASE("truncation maps have constant fibers") {
  auto hi = sl2(LocalFieldSpec::q_p(3), 2);
  auto lo = sl2(LocalFieldSpec::q_p(3), 1);
  std::map<Matrix, uint64_t> fibers;
  for (const auto& g : hi->elements().elems) ++fibers[truncate_elem(*hi, g, *lo)];
  CHECK(fibers.size() == lo->order());
  for (const auto& kv : fibers) CHECK(kv.second == 27);
  auto P = odd_f3();
  auto O2 = make_group(GroupFamily::SU3_ram_odd, {std::nullopt, P}, 2);
  auto O1 = make_group(GroupFamily::SU3_ram_odd, {std::nullopt, P}, 1);
  std::map<Matrix, uint64_t> f2;
  for (const auto& g : O2->elements().elems) ++f2[truncate_elem(*O2, g, *O1)];
  CHECK(f2.size() == O1->order());
  CHECK(O2->order() % O1->order() == 0);
  for (const auto& kv : f2) CHECK(kv.second == O2->order() / O1->order());
}

TEST_CASE("the kernel of truncation is determined by its Lie algebra") {
  // Id + E lies in SL2(Z/p^2) with E in pM_2 iff tr E = 0 mod p^2: |ker| = p^3.
  auto G = sl2(LocalFieldSpec::q_p(3), 2);
  CHECK(G->kernel_to(1).size() == 27);
  // injectivity: distinct lifts of the identity differ by distinct kernel elements
  auto K = G->kernel_to(1);
  std::set<Matrix> s(K.begin(), K.end());
  CHECK(s.size() == K.size());
}

TEST_CASE("dyadic large model does not depend on t up to conjugation") {
  auto P = dyadic_x(1);
  auto C = P->context(6);
  const FiniteRing& Lh = *C->L;
  uint32_t t = C->t;
  uint32_t t2 = Lh.mul(t, Lh.add(1, t));  // t (1 + t)
  auto G = make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, P}, 4, t);
  auto H = make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, P}, 4, t2);
  REQUIRE(G->order() == H->order());
  CHECK(G->order() == 49152);
  // D = diag(1, t^-1 t', 1) = diag(1, 1 + t, 1)
  const FiniteRing& L = *G->R;
  uint32_t c = L.add(1, L.trunc(t, 4));
  Matrix D = G->identity(), Di = G->identity();
  D(1, 1) = c;
  Di(1, 1) = L.inv(c);
  const auto& E = G->elements().elems;
  for (size_t i = 0; i < E.size(); i += 13) CHECK(H->contains(G->mul(D, G->mul(E[i], Di))));
}

TEST_CASE("degeneration of the integral model onto the small regime") {
  auto rep = su3_degeneration(dyadic_x(1), 1);
  CHECK(rep.integral_order == 192);
  CHECK(rep.target_order == 48);
  CHECK(rep.surjective);
  CHECK(rep.kernel_shape);
  CHECK(rep.kernel.size() * rep.image_size == rep.integral_order);
}

TEST_CASE("Lie algebra kernel spaces for the odd ramified case") {
  auto P = odd_f3();
  CHECK(count_matrix_space(*P->context(2), 2, true, 1) == 6561);
  CHECK(count_matrix_space(*P->context(1), 1, false, -1) == 243);
  CHECK(count_matrix_space(*P->context(1), 1, false, 1) == 27);
}

TEST_CASE("local group errors") {
  auto U = unramified_f4();
  auto D = dyadic_x(1);
  CHECK(kind_of([&] { make_group(GroupFamily::SU3_unram, {std::nullopt, D}, 2); }) == ErrorKind::RegimeMismatch);
  CHECK(kind_of([&] { make_group(GroupFamily::SU3_dyadic_small, {std::nullopt, D}, 4); }) == ErrorKind::RegimeMismatch);
  CHECK(kind_of([&] { make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, D}, 2); }) == ErrorKind::RegimeMismatch);
  CHECK(kind_of([&] { make_group(GroupFamily::SU3_dyadic_large, {std::nullopt, D}, 3); }) == ErrorKind::RegimeMismatch);
  CHECK(kind_of([&] { make_group(GroupFamily::SL2D, {std::nullopt, U}, 2); }) == ErrorKind::RegimeMismatch);
  auto G = sl2(LocalFieldSpec::q_p(2), 2);
  CHECK(kind_of([&] { G->contains(mat_identity(3)); }) == ErrorKind::WrongShape);
  CHECK(kind_of([&] { G->contains(Matrix(2, {1, 0, 0, 9})); }) == ErrorKind::WrongShape);
  CHECK(kind_of([&] { G->in_Px(G->identity(), 3); }) == ErrorKind::IndexOutOfRange);
  auto G3 = sl2(LocalFieldSpec::q_p(2), 3);
  CHECK(kind_of([&] { truncate_elem(*G, G->identity(), *G3); }) == ErrorKind::IncompatibleLevels);
  auto S = make_group(GroupFamily::SU3_unram, {std::nullopt, U}, 1);
  CHECK(kind_of([&] { truncate_elem(*S, S->identity(), *G); }) == ErrorKind::IncompatibleLevels);
  CHECK(kind_of([&] { sl2(LocalFieldSpec::q_p(2), 3)->elements(10); }) == ErrorKind::BudgetExceeded);
}
