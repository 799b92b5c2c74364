#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cyclic_algebra.hpp"
#include "errors.hpp"
#include "local_groups.hpp"
#include "local_tree.hpp"
#include "proximity.hpp"
#include "quad_pair.hpp"
#include "trunc_ring.hpp"

namespace btlab {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::BadInput, path + ": " + e.what());
  }
}

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key) || j[key].is_null()) return def;
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::BadInput, std::string("field ") + key + ": " + e.what());
  }
}

inline std::vector<int64_t> pad(std::vector<int64_t> v, uint32_t n) {
  if (v.size() > n) fail(ErrorKind::BadInput, "digit vector longer than the residue degree");
  v.resize(n, 0);
  return v;
}

}  // namespace detail

// A coefficient is an integer, a list of digit vectors, or (prime residue field) a list
// of integers read as one-coordinate digits.
inline Coefficient coefficient_from_json(const json& j, uint32_t n) {
  if (j.is_number_integer()) return Coefficient::from_int(j.get<int64_t>());
  if (!j.is_array()) fail(ErrorKind::BadInput, "coefficient must be an integer or a digit list");
  std::vector<std::vector<int64_t>> d;
  for (const auto& x : j) {
    if (x.is_number_integer()) d.push_back(detail::pad({x.get<int64_t>()}, n));
    else if (x.is_array()) d.push_back(detail::pad(x.get<std::vector<int64_t>>(), n));
    else fail(ErrorKind::BadInput, "digit must be an integer or a coordinate vector");
  }
  return Coefficient::from_digits(d);
}

inline json coefficient_to_json(const Coefficient& c) {
  if (c.is_integer) return c.integer;
  return c.digits;
}

inline LocalFieldSpec field_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::BadInput, "field spec must be an object");
  LocalFieldSpec s;
  std::string tag = detail::get_or<std::string>(j, "tag", "mixed_char");
  if (tag == "mixed_char") s.tag = LocalFieldSpec::Tag::mixed_char;
  else if (tag == "equal_char") s.tag = LocalFieldSpec::Tag::equal_char;
  else fail(ErrorKind::BadInput, "unknown tag " + tag);
  s.p = detail::get_or<uint32_t>(j, "p", 2);
  s.n = detail::get_or<uint32_t>(j, "n", 1);
  s.res_poly = detail::get_or<std::vector<int64_t>>(j, "res_poly", s.n == 1 ? std::vector<int64_t>{0, 1} : std::vector<int64_t>{});
  if (s.res_poly.size() != s.n + 1) fail(ErrorKind::BadInput, "res_poly must have degree n");
  s.e = detail::get_or<uint32_t>(j, "e", 1);
  s.precision = detail::get_or<uint32_t>(j, "precision", s.tag == LocalFieldSpec::Tag::equal_char ? 16 : 8);
  if (j.contains("eisenstein") && !j["eisenstein"].is_null())
    for (const auto& c : j["eisenstein"]) s.eisenstein.push_back(coefficient_from_json(c, s.n));
  s.name = detail::get_or<std::string>(j, "name", "");
  if (s.name.empty()) {
    if (s.tag == LocalFieldSpec::Tag::equal_char) s.name = LocalFieldSpec::laurent(s.p, s.res_poly).name;
    else s.name = "K";
  }
  return s;
}

inline json field_to_json(const LocalFieldSpec& s) {
  json j;
  j["tag"] = s.tag == LocalFieldSpec::Tag::mixed_char ? "mixed_char" : "equal_char";
  j["p"] = s.p;
  j["n"] = s.n;
  j["res_poly"] = s.res_poly;
  j["e"] = s.e;
  json e = json::array();
  for (const auto& c : s.eisenstein) e.push_back(coefficient_to_json(c));
  j["eisenstein"] = e;
  j["precision"] = s.precision;
  if (!s.name.empty()) j["name"] = s.name;
  return j;
}

inline PairKind parse_pair_kind(const std::string& s) {
  for (auto k : {PairKind::unramified, PairKind::ramified_odd, PairKind::ramified_dyadic, PairKind::inseparable})
    if (s == pair_kind_name(k)) return k;
  fail(ErrorKind::BadInput, "unknown pair kind " + s);
}

inline QuadPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("base")) fail(ErrorKind::BadInput, "pair spec needs a base field");
  QuadPairSpec s;
  s.kind = parse_pair_kind(detail::get_or<std::string>(j, "kind", ""));
  s.base = field_from_json(j["base"]);
  if (j.contains("alpha") && !j["alpha"].is_null()) s.alpha = coefficient_from_json(j["alpha"], s.base.n);
  if (j.contains("beta") && !j["beta"].is_null()) s.beta = coefficient_from_json(j["beta"], s.base.n);
  s.name = detail::get_or<std::string>(j, "name", "");
  return make_pair(s);
}

inline json pair_to_json(const QuadPairSpec& s) {
  json j;
  j["kind"] = pair_kind_name(s.kind);
  j["base"] = field_to_json(s.base);
  j["alpha"] = s.alpha ? coefficient_to_json(*s.alpha) : json(nullptr);
  j["beta"] = s.beta ? coefficient_to_json(*s.beta) : json(nullptr);
  if (!s.name.empty()) j["name"] = s.name;
  return j;
}

inline CyclicAlgebraSpec algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("base")) fail(ErrorKind::BadInput, "algebra spec needs a base field");
  CyclicAlgebraSpec s;
  s.base = field_from_json(j["base"]);
  s.degree = detail::get_or<uint32_t>(j, "degree", 1);
  s.hasse = detail::get_or<int64_t>(j, "hasse", 1);
  s.name = detail::get_or<std::string>(j, "name", "");
  return s;
}

inline json algebra_to_json(const CyclicAlgebraSpec& s) {
  json j;
  j["base"] = field_to_json(s.base);
  j["degree"] = s.degree;
  j["hasse"] = s.hasse;
  if (!s.name.empty()) j["name"] = s.name;
  return j;
}

// A pair has "kind", an algebra has "degree", anything else is a field.
inline MetricPoint point_from_json(const json& j) {
  if (j.contains("kind")) return MetricPoint::pair(pair_from_json(j));
  if (j.contains("degree")) return MetricPoint::algebra(algebra_from_json(j));
  return MetricPoint::field(field_from_json(j));
}

inline json point_to_json(const MetricPoint& p) {
  if (p.is_field()) return field_to_json(p.as_field());
  if (p.is_pair()) return pair_to_json(p.as_pair()->spec);
  return algebra_to_json(p.as_algebra());
}

struct GroupSpec {
  GroupFamily family = GroupFamily::SL2D;
  GroupCarrier carrier;
  uint32_t radius = 1;
  bool gamma_shift = false;
};

// A field carrier stands for the degree-1 algebra (SL2 over O_K).
inline GroupSpec group_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("carrier")) fail(ErrorKind::BadInput, "group spec needs a carrier");
  GroupSpec g;
  g.family = parse_family(detail::get_or<std::string>(j, "family", ""));
  g.radius = detail::get_or<uint32_t>(j, "radius", 1);
  g.gamma_shift = detail::get_or<bool>(j, "gamma_shift", false);
  auto P = point_from_json(j["carrier"]);
  if (P.is_pair()) g.carrier.pair = P.as_pair();
  else if (P.is_algebra()) g.carrier.algebra = P.as_algebra();
  else g.carrier.algebra = CyclicAlgebraSpec{P.as_field(), 1, 1, P.as_field().name};
  return g;
}

inline GroupPtr make_group(const GroupSpec& g, std::optional<uint32_t> radius = std::nullopt) {
  return make_group(g.family, g.carrier, radius ? *radius : g.radius, std::nullopt, g.gamma_shift);
}

inline json group_spec_to_json(const GroupSpec& g) {
  json j;
  j["family"] = family_name(g.family);
  j["carrier"] = g.carrier.pair ? pair_to_json(g.carrier.pair->spec) : algebra_to_json(*g.carrier.algebra);
  j["radius"] = g.radius;
  if (g.gamma_shift) j["gamma_shift"] = true;
  return j;
}

// Ring elements as digit lists, each digit a residue coordinate vector.
inline json elem_to_json(const FiniteRing& R, uint32_t x) {
  json d = json::array();
  for (uint32_t c : R.digits(x)) d.push_back(R.residue->coords(c));
  return d;
}

inline uint32_t elem_from_json(const FiniteRing& R, const json& j) {
  if (!j.is_array() || j.size() > R.levels) fail(ErrorKind::BadInput, "element must be a digit list of length <= " + std::to_string(R.levels));
  std::vector<uint32_t> d;
  for (const auto& x : j) {
    std::vector<int64_t> c = x.is_array() ? x.get<std::vector<int64_t>>() : std::vector<int64_t>{x.get<int64_t>()};
    c = detail::pad(c, R.residue->n);
    for (auto& v : c) v = ((v % R.residue->p) + R.residue->p) % R.residue->p;
    d.push_back(R.residue->from_coords(c));
  }
  d.resize(R.levels, 0);
  return R.from_digits(d);
}

inline json matrix_to_json(const FiniteRing& R, const Matrix& m) {
  json j = json::array();
  for (uint32_t v : m.a) j.push_back(elem_to_json(R, v));
  return j;
}

inline Matrix matrix_from_json(const FiniteRing& R, const json& j, uint32_t n) {
  if (!j.is_array() || j.size() != n * n) fail(ErrorKind::WrongShape, "matrix must list " + std::to_string(n * n) + " entries row by row");
  Matrix m(n);
  for (uint32_t i = 0; i < n * n; ++i) m.a[i] = elem_from_json(R, j[i]);
  return m;
}

inline json ball_to_json(const LocalBall& B) {
  json j;
  json vs = json::array();
  for (uint32_t v = 0; v < B.vertices.size(); ++v) vs.push_back({{"id", v}, {"level", B.vertices[v].level}, {"coset", B.vertices[v].coset}});
  j["vertices"] = vs;
  json es = json::array();
  for (auto [a, b] : B.edges) es.push_back({a, b});
  j["edges"] = es;
  auto deg = B.degrees();
  json d = json::object();
  for (uint32_t v = 0; v < deg.size(); ++v) d[std::to_string(v)] = deg[v];
  j["degrees"] = d;
  j["spheres"] = B.sphere_sizes();
  j["radius"] = B.rho;
  j["family"] = family_name(B.G->family);
  return j;
}

inline json distance_to_json(const DistanceResult& d) {
  return {{"agree", d.agree}, {"capped", d.capped}, {"cap", d.cap}};
}

inline json catalog_to_json(const Catalog& C) {
  json j;
  j["points"] = C.names;
  json ps = json::array();
  for (size_t a = 0; a < C.d.size(); ++a)
    for (size_t b = a + 1; b < C.d.size(); ++b)
      ps.push_back({{"a", a}, {"b", b}, {"agree", C.d[a][b].agree}, {"capped", C.d[a][b].capped}});
  j["pairs"] = ps;
  if (!C.d.empty()) j["cap"] = C.d[0][0].cap;
  return j;
}

inline json trace_to_json(const std::vector<TraceRow>& rows) {
  json j = json::array();
  for (const auto& r : rows) {
    json x{{"index", r.index}, {"agree", r.distance.agree}, {"capped", r.distance.capped}, {"transported", r.transported},
           {"radius", r.radius}};
    if (!r.note.empty()) x["note"] = r.note;
    j.push_back(x);
  }
  return {{"rows", j}};
}

}  // namespace btlab
