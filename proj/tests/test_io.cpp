#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <string>

#include <btlab/io.hpp>
#include <btlab/local_tree.hpp>

using namespace btlab;

namespace {

const std::string kDir = BTLAB_EXAMPLES_DIR;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::BadInput;
}

}  // namespace

TEST_CASE("field specs round trip") {
  for (auto s : {LocalFieldSpec::q_p(2), LocalFieldSpec::root_of_p(2, 3), LocalFieldSpec::laurent(3, {1, 0, 1}),
                 LocalFieldSpec::unramified_qp(2, {1, 1, 1})}) {
    auto back = field_from_json(field_to_json(s));
    CHECK(same_field_spec(s, back));
    CHECK(back.precision == s.precision);
    CHECK(back.name == s.name);
    CHECK(field_to_json(back) == field_to_json(s));
  }
}

TEST_CASE("field defaults") {
  auto s = field_from_json(json::parse(R"({"tag": "equal_char", "p": 3})"));
  CHECK(s.tag == LocalFieldSpec::Tag::equal_char);
  CHECK(s.precision == 16);
  CHECK(s.res_poly == std::vector<int64_t>{0, 1});
  CHECK(s.name == "F3((X))");
  auto m = field_from_json(json::parse("{}"));
  CHECK(m.tag == LocalFieldSpec::Tag::mixed_char);
  CHECK(m.p == 2);
  CHECK(m.precision == 8);
}

TEST_CASE("coefficients accept integers and digit lists") {
  auto a = coefficient_from_json(json::parse("[0, 1]"), 1);
  auto b = coefficient_from_json(json::parse("[[0], [1]]"), 1);
  CHECK(a.digits == b.digits);
  CHECK(coefficient_from_json(json::parse("-2"), 1).integer == -2);
  CHECK(coefficient_from_json(json::parse("[[1]]"), 2).digits == std::vector<std::vector<int64_t>>{{1, 0}});
  CHECK(kind_of([] { coefficient_from_json(json::parse("[[1, 0, 1]]"), 2); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { coefficient_from_json(json::parse("\"x\""), 1); }) == ErrorKind::BadInput);
}

TEST_CASE("pairs, algebras and points round trip") {
  auto P = make_pair(PairKind::ramified_dyadic, LocalFieldSpec::laurent(2), monomial(2), monomial(1), "alpha=X^2");
  auto Pj = pair_to_json(P.spec);
  auto Q = pair_from_json(Pj);
  CHECK(pair_to_json(Q.spec) == Pj);
  CHECK(Q.i0 == P.i0);
  CyclicAlgebraSpec A{LocalFieldSpec::q_p(3), 3, -1, "D"};
  auto B = algebra_from_json(algebra_to_json(A));
  CHECK(B.degree == 3);
  CHECK(B.hasse == -1);
  CHECK(point_from_json(Pj).is_pair());
  CHECK(point_from_json(algebra_to_json(A)).is_algebra());
  CHECK(point_from_json(field_to_json(LocalFieldSpec::q_p(2))).is_field());
  CHECK(point_to_json(point_from_json(Pj)) == Pj);
}

TEST_CASE("ring elements and matrices round trip") {
  auto R = make_ring(LocalFieldSpec::unramified_qp(2, {1, 1, 1}), 2).ring;
  for (uint32_t x = 0; x < R->size; ++x) CHECK(elem_from_json(*R, elem_to_json(*R, x)) == x);
  CHECK(elem_from_json(*R, json::parse("[[1, 1]]")) == 3);
  CHECK(elem_from_json(*R, json::parse("[1]")) == 1);
  Matrix m(2, {1, 5, 0, 15});
  CHECK(matrix_from_json(*R, matrix_to_json(*R, m), 2) == m);
  CHECK(kind_of([&] { matrix_from_json(*R, json::parse("[[1]]"), 2); }) == ErrorKind::WrongShape);
  CHECK(kind_of([&] { elem_from_json(*R, json::parse("[1, 0, 0]")); }) == ErrorKind::BadInput);
}

TEST_CASE("example files load") {
  auto q2 = field_from_json(read_json_file(kDir + "/q2.json"));
  CHECK(same_field_spec(q2, LocalFieldSpec::q_p(2)));
  auto lau = field_from_json(read_json_file(kDir + "/f2_laurent.json"));
  CHECK(same_field_spec(lau, LocalFieldSpec::laurent(2)));
  auto s2 = field_from_json(read_json_file(kDir + "/q2_sqrt2.json"));
  CHECK(s2.e == 2);
  // the digit expansion of -2 gives the same ring as T^2 - 2
  auto w = ring_iso_search(make_ring(s2, 8), make_ring(LocalFieldSpec::root_of_p(2, 2), 8));
  CHECK(w);
  CHECK(krasner_distance(MetricPoint::field(s2), MetricPoint::field(lau), 4).agree == 2);

  auto x2 = point_from_json(read_json_file(kDir + "/dyadic_x2.json"));
  auto ins = point_from_json(read_json_file(kDir + "/inseparable.json"));
  CHECK(krasner_distance(x2, ins, 6).agree == 4);

  auto g = group_spec_from_json(read_json_file(kDir + "/sl2_z4.json"));
  auto G = make_group(g);
  CHECK(G->order() == 48);
  auto m = matrix_from_json(*G->R, read_json_file(kDir + "/sl2_element.json"), 2);
  CHECK(m == Matrix(2, {1, 1, 0, 1}));
  CHECK(G->contains(m));
  auto u = group_spec_from_json(read_json_file(kDir + "/su3_unramified.json"));
  CHECK(u.family == GroupFamily::SU3_unram);
  CHECK(make_group(u, 1)->order() == 216);
  CHECK(group_spec_from_json(group_spec_to_json(u)).family == GroupFamily::SU3_unram);

  auto t = read_json_file(kDir + "/dyadic_trace.json");
  CHECK(t["sequence"].size() == 3);
  CHECK(point_from_json(t["limit"]).as_pair()->spec.kind == PairKind::inseparable);
}

TEST_CASE("report serialization") {
  auto G = make_group(group_spec_from_json(read_json_file(kDir + "/sl2_z4.json")));
  auto j = ball_to_json(build_ball(G));
  CHECK(j["spheres"] == json::parse("[1, 3, 6]"));
  CHECK(j["vertices"].size() == 10);
  CHECK(j["edges"].size() == 9);
  CHECK(j["degrees"]["0"] == 3);
  CHECK(j["family"] == "SL2D");
  auto C = catalog_distances(ramified_catalog(2), 3);
  auto cj = catalog_to_json(C);
  CHECK(cj["pairs"].size() == 3);
  CHECK(cj["cap"] == 3);
  auto d = distance_to_json(krasner_distance(MetricPoint::field(LocalFieldSpec::q_p(2)), MetricPoint::field(LocalFieldSpec::q_p(2)), 3));
  CHECK(d["capped"] == true);
}

TEST_CASE("io errors") {
  CHECK(kind_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { field_from_json(json::parse(R"({"tag": "weird"})")); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { field_from_json(json::parse(R"({"p": "two"})")); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { pair_from_json(json::parse(R"({"kind": "odd", "base": {}})")); }) == ErrorKind::BadInput);
  CHECK(kind_of([] { group_spec_from_json(json::parse(R"({"family": "SL2D"})")); }) == ErrorKind::BadInput);
}
