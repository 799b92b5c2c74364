#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "btlab/btlab.hpp"

using namespace btlab;

namespace {

enum class Format { json, dot, text };

struct Options {
  std::string format = "text";
  std::optional<uint64_t> budget;
  std::optional<uint32_t> radius;
  std::optional<uint32_t> cap;
  std::vector<std::string> files;
  std::string check;
  std::string element;
  std::optional<std::string> family;
};

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "dot") return Format::dot;
  if (s == "text") return Format::text;
  fail(ErrorKind::BadInput, "unknown format " + s);
}

void need_format(Format f, std::initializer_list<Format> ok, const std::string& cmd) {
  for (auto x : ok)
    if (x == f) return;
  fail(ErrorKind::BadInput, cmd + " does not support this output format");
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string digits_text(const FiniteRing& R, uint32_t x) { return elem_to_json(R, x).dump(); }

int cmd_ring(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "ring");
  auto P = point_from_json(read_json_file(o.files.at(0)));
  uint32_t r = o.radius ? *o.radius : 1;
  RingPtr R;
  if (P.is_field()) R = make_ring(P.as_field(), r).ring;
  else if (P.is_pair()) R = P.as_pair()->context(r)->L;
  else R = make_algebra_truncation(P.as_algebra(), r)->ring();
  uint32_t units = 0, char_order = 1;
  for (uint32_t x = 0; x < R->size; ++x) units += R->is_unit(x);
  for (uint32_t s = 1; s != 0; s = R->add(s, 1)) ++char_order;
  json j{{"ring", R->label},
         {"radius", r},
         {"size", R->size},
         {"residue_cardinality", R->Q},
         {"units", units},
         {"additive_order_of_one", char_order},
         {"commutative", R->commutative},
         {"uniformizer", elem_to_json(*R, R->uniformizer())}};
  if (P.is_pair()) {
    const auto& Q = *P.as_pair();
    j["kind"] = pair_kind_name(Q.spec.kind);
    if (Q.gamma_infinite) j["gamma"] = "infinity";
    else j["gamma"] = std::to_string(Q.gamma.num) + "/" + std::to_string(Q.gamma.den);
    if (Q.i0) j["i0"] = *Q.i0;
    else j["i0"] = "infinity";
  }
  if (f == Format::json) {
    print_json(j);
  } else {
    std::cout << R->label << ": " << R->size << " elements, residue field of " << R->Q << " elements, " << units << " units, 1 has additive order "
              << char_order << (R->commutative ? "" : ", noncommutative") << "\n";
    std::cout << "uniformizer digits " << digits_text(*R, R->uniformizer()) << "\n";
    if (P.is_pair()) std::cout << "gamma " << j["gamma"].get<std::string>() << ", i0 " << j["i0"].dump() << "\n";
  }
  return 0;
}

int cmd_dist(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "dist");
  if (o.files.size() != 2) fail(ErrorKind::BadInput, "dist takes two spec files");
  auto a = point_from_json(read_json_file(o.files[0]));
  auto b = point_from_json(read_json_file(o.files[1]));
  auto d = krasner_distance(a, b, o.cap);
  if (f == Format::json) print_json(distance_to_json(d));
  else std::cout << "agree " << d.agree << " (distance 2^-" << d.agree << ")" << (d.capped ? ", capped" : "") << ", cap " << d.cap << "\n";
  return 0;
}

GroupPtr load_group(const Options& o) {
  auto spec = group_spec_from_json(read_json_file(o.files.at(0)));
  return make_group(spec, o.radius);
}

uint64_t budget_of(const Options& o) { return o.budget ? *o.budget : default_budget(); }

int cmd_ball(const Options& o, Format f) {
  auto G = load_group(o);
  auto B = build_ball(G, std::nullopt, budget_of(o));
  if (f == Format::dot) {
    std::cout << ball_to_dot(B);
  } else if (f == Format::json) {
    print_json(ball_to_json(B));
  } else {
    std::cout << family_name(G->family) << " radius " << B.rho << ", group order " << G->order() << "\n";
    auto s = B.sphere_sizes();
    std::cout << "spheres";
    for (auto x : s) std::cout << " " << x;
    std::cout << "\nvertices " << B.vertices.size() << ", edges " << B.edges.size() << "\n";
  }
  return 0;
}

int cmd_act(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "act");
  auto G = load_group(o);
  auto B = build_ball(G, std::nullopt, budget_of(o));
  std::vector<Matrix> gens;
  if (!o.element.empty()) {
    auto m = matrix_from_json(*G->R, read_json_file(o.element), G->dim);
    if (!G->contains(m)) fail(ErrorKind::BadInput, "element does not lie in the group");
    gens.push_back(m);
  } else {
    gens = B.elements().gens;
  }
  json out = json::array();
  for (const auto& g : gens) {
    std::vector<uint32_t> perm;
    for (uint32_t v = 0; v < B.vertices.size(); ++v) perm.push_back(B.act(g, v));
    out.push_back({{"matrix", matrix_to_json(*G->R, g)}, {"permutation", perm}});
  }
  if (f == Format::json) {
    print_json({{"actions", out}});
  } else {
    for (const auto& a : out) {
      std::cout << a["matrix"].dump() << " ->";
      for (const auto& v : a["permutation"]) std::cout << " " << v.get<uint32_t>();
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_trace(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "trace");
  auto j = read_json_file(o.files.at(0));
  if (!j.contains("sequence") || !j.contains("limit")) fail(ErrorKind::BadInput, "trace file needs sequence and limit");
  std::vector<MetricPoint> seq;
  for (const auto& p : j["sequence"]) seq.push_back(point_from_json(p));
  auto limit = point_from_json(j["limit"]);
  std::optional<uint32_t> cap = o.cap;
  if (!cap && j.contains("cap")) cap = j["cap"].get<uint32_t>();
  std::optional<GroupFamily> fam;
  if (o.family) fam = parse_family(*o.family);
  else if (j.contains("family")) fam = parse_family(j["family"].get<std::string>());
  auto rows = convergence_trace(seq, limit, cap, fam, budget_of(o));
  if (f == Format::json) {
    print_json(trace_to_json(rows));
  } else {
    for (const auto& r : rows)
      std::cout << r.index << ": agree " << r.distance.agree << (r.distance.capped ? " (capped)" : "") << ", transport "
                << (r.transported ? "verified" : "none") << " at radius " << r.radius << "\n";
  }
  return 0;
}

int cmd_catalog(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "catalog");
  std::vector<MetricPoint> pts;
  if (o.files.empty()) {
    pts = ramified_catalog(5);
  } else {
    auto j = read_json_file(o.files[0]);
    const json& arr = j.is_array() ? j : j.at("points");
    for (const auto& p : arr) pts.push_back(point_from_json(p));
  }
  std::optional<uint32_t> cap = o.cap;
  if (!cap && o.files.empty()) cap = 6;
  auto C = catalog_distances(pts, cap);
  auto U = check_ultrametric(C);
  if (f == Format::json) {
    auto j = catalog_to_json(C);
    j["ultrametric_violations"] = U.violations;
    j["non_isosceles"] = U.non_isosceles;
    print_json(j);
  } else {
    for (size_t a = 0; a < C.d.size(); ++a) {
      std::cout << a << " " << C.names[a] << ":";
      for (size_t b = 0; b < C.d.size(); ++b) std::cout << " " << C.d[a][b].agree << (C.d[a][b].capped ? "*" : "");
      std::cout << "\n";
    }
    std::cout << "cap " << C.d[0][0].cap << " (* = capped); " << U.triples << " triples, " << U.violations << " ultrametric violations, "
              << U.non_isosceles << " non-isosceles\n";
  }
  return U.violations == 0 && U.non_isosceles == 0 ? 0 : 1;
}

int cmd_verify(const Options& o, Format f) {
  need_format(f, {Format::json, Format::text}, "verify");
  std::vector<const Check*> todo;
  if (o.check == "all") {
    for (const auto& c : check_registry()) todo.push_back(&c);
  } else {
    todo.push_back(&find_check(o.check));
  }
  bool all = true;
  json out = json::array();
  for (const Check* c : todo) {
    auto r = run_check(*c);
    all = all && r.pass;
    if (f == Format::json) out.push_back({{"id", c->id}, {"criterion", c->criterion}, {"pass", r.pass}, {"detail", r.detail}});
    else std::cout << (r.pass ? "PASS " : "FAIL ") << c->id << ": " << r.detail << "\n";
  }
  if (f == Format::json) print_json({{"checks", out}, {"pass", all}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"btlab: truncated local models of Bruhat-Tits trees and the Krasner metric"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "output format: json, dot or text")->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--budget", o.budget, "enumeration budget (overrides BTLAB_BUDGET)");

  auto* ring = app.add_subcommand("ring", "describe a truncated ring of a field, pair or algebra spec");
  ring->add_option("spec", o.files, "spec file")->required()->expected(1);
  ring->add_option("--radius", o.radius, "truncation level");

  auto* dist = app.add_subcommand("dist", "Krasner agreement level of two specs");
  dist->add_option("specs", o.files, "two spec files")->required()->expected(2);
  dist->add_option("--cap", o.cap, "largest level compared");

  auto* ball = app.add_subcommand("ball", "local ball of a group spec");
  ball->add_option("group", o.files, "group spec file")->required()->expected(1);
  ball->add_option("--radius", o.radius, "ball radius");

  auto* act = app.add_subcommand("act", "vertex permutations of generators or of one element");
  act->add_option("group", o.files, "group spec file")->required()->expected(1);
  act->add_option("--radius", o.radius, "ball radius");
  act->add_option("--element", o.element, "matrix file (row-major digit lists)");

  auto* trace = app.add_subcommand("trace", "convergence trace of a sequence towards a limit");
  trace->add_option("spec", o.files, "trace file {sequence, limit, cap, family}")->required()->expected(1);
  trace->add_option("--cap", o.cap, "largest level compared");
  trace->add_option("--family", o.family, "group family for the transport check");

  auto* catalog = app.add_subcommand("catalog", "pairwise distances of a point catalog");
  catalog->add_option("points", o.files, "catalog file (default: Q2(2^(1/k)), k<=5, and F2((X)))")->expected(0, 1);
  catalog->add_option("--cap", o.cap, "largest level compared");

  auto* verify = app.add_subcommand("verify", "run a named check, or all of them");
  verify->add_option("check", o.check, "check id or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (o.budget) setenv("BTLAB_BUDGET", std::to_string(*o.budget).c_str(), 1);

  try {
    Format f = parse_format(o.format);
    if (*ring) return cmd_ring(o, f);
    if (*dist) return cmd_dist(o, f);
    if (*ball) return cmd_ball(o, f);
    if (*act) return cmd_act(o, f);
    if (*trace) return cmd_trace(o, f);
    if (*catalog) return cmd_catalog(o, f);
    if (*verify) return cmd_verify(o, f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
