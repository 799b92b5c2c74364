#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "local_groups.hpp"
#include "matrix.hpp"

namespace btlab {

// The local tree: vertices are the cosets P0 / P_x for x = 0..rho (negative positions
// folded by m_std), an edge joins a coset of P_(x+1) to the coset of P_x containing it.
struct LocalBall {
  struct Vertex {
    uint32_t level = 0;
    uint32_t coset = 0;   // index within its level
    uint32_t rep = 0;     // canonical representative (element index)
    uint32_t parent = 0;  // vertex id; the root is its own parent
  };

  GroupPtr G;
  uint32_t rho = 0;
  std::vector<Vertex> vertices;
  std::vector<std::vector<uint32_t>> level_ids;  // vertex ids per level
  std::vector<std::vector<uint32_t>> coset_of;   // per level: element index -> coset index
  std::vector<std::pair<uint32_t, uint32_t>> edges;

  uint32_t root() const { return 0; }
  uint32_t vertex_id(uint32_t level, uint32_t coset) const { return level_ids.at(level).at(coset); }
  std::vector<uint32_t> sphere_sizes() const {
    std::vector<uint32_t> s;
    for (const auto& l : level_ids) s.push_back(static_cast<uint32_t>(l.size()));
    return s;
  }
  std::vector<uint32_t> degrees() const {
    std::vector<uint32_t> d(vertices.size(), 0);
    for (auto [a, b] : edges) {
      ++d[a];
      ++d[b];
    }
    return d;
  }
  const GroupElements& elements() const { return G->elements(); }

  uint32_t act_index(uint32_t g, uint32_t v) const {
    const Vertex& x = vertices[v];
    if (x.level == 0) return root();
    const auto& E = elements();
    uint32_t prod = *E.find(G->mul(E.elems[g], E.elems[x.rep]));
    return vertex_id(x.level, coset_of[x.level][prod]);
  }
  uint32_t act(const Matrix& g, uint32_t v) const {
    const Vertex& x = vertices.at(v);
    if (x.level == 0) return root();
    const auto& E = elements();
    auto prod = E.find(G->mul(g, E.elems[x.rep]));
    if (!prod) fail(ErrorKind::BadInput, "element does not lie in the group");
    return vertex_id(x.level, coset_of[x.level][*prod]);
  }
};

inline LocalBall build_ball(const GroupPtr& G, std::optional<uint32_t> rho_opt = std::nullopt,
                            uint64_t budget = default_budget()) {
  uint32_t rho = rho_opt ? *rho_opt : G->radius;
  if (rho > G->radius) fail(ErrorKind::IndexOutOfRange, "ball radius exceeds the group radius");
  LocalBall B;
  B.G = G;
  B.rho = rho;
  const auto& E = G->elements(budget);
  uint32_t N = static_cast<uint32_t>(E.elems.size());
  B.vertices.push_back({0, 0, *E.find(G->identity()), 0});
  B.level_ids.push_back({0});
  B.coset_of.push_back(std::vector<uint32_t>(N, 0));
  for (uint32_t x = 1; x <= rho; ++x) {
    std::vector<uint32_t> px;
    for (uint32_t i = 0; i < N; ++i)
      if (G->in_Px(E.elems[i], x)) px.push_back(i);
    std::vector<uint32_t> coset(N, UINT32_MAX);
    std::vector<uint32_t> ids;
    uint32_t next = 0;
    for (uint32_t i = 0; i < N; ++i) {
      if (coset[i] != UINT32_MAX) continue;
      for (uint32_t p : px) coset[*E.find(G->mul(E.elems[i], E.elems[p]))] = next;
      uint32_t parent = B.level_ids[x - 1][B.coset_of[x - 1][i]];
      uint32_t id = static_cast<uint32_t>(B.vertices.size());
      B.vertices.push_back({x, next, i, parent});
      B.edges.emplace_back(parent, id);
      ids.push_back(id);
      ++next;
    }
    B.level_ids.push_back(std::move(ids));
    B.coset_of.push_back(std::move(coset));
  }
  return B;
}

// Orbit sizes on each sphere (generator BFS), sorted descending.
inline std::vector<std::vector<uint32_t>> sphere_orbits(const LocalBall& B) {
  const auto& E = B.elements();
  std::vector<uint32_t> gens;
  for (const auto& g : E.gens) gens.push_back(*E.find(g));
  std::vector<std::vector<uint32_t>> out;
  std::vector<char> seen(B.vertices.size(), 0);
  for (const auto& level : B.level_ids) {
    std::vector<uint32_t> sizes;
    for (uint32_t v : level) {
      if (seen[v]) continue;
      std::vector<uint32_t> orbit{v};
      seen[v] = 1;
      for (size_t i = 0; i < orbit.size(); ++i)
        for (uint32_t g : gens) {
          uint32_t w = B.act_index(g, orbit[i]);
          if (!seen[w]) {
            seen[w] = 1;
            orbit.push_back(w);
          }
        }
      sizes.push_back(static_cast<uint32_t>(orbit.size()));
    }
    std::sort(sizes.rbegin(), sizes.rend());
    out.push_back(sizes);
  }
  return out;
}

// Elements fixing every vertex (checked on the outer sphere, which determines the rest).
inline std::vector<uint32_t> action_kernel(const LocalBall& B) {
  const auto& E = B.elements();
  const auto& outer = B.level_ids.back();
  std::vector<uint32_t> out;
  for (uint32_t g = 0; g < E.elems.size(); ++g) {
    bool fixes = true;
    for (uint32_t v : outer)
      if (B.act_index(g, v) != v) {
        fixes = false;
        break;
      }
    if (fixes) out.push_back(g);
  }
  return out;
}

// Checks that psi (element index map G1 -> G2) is a group isomorphism: bijective and
// psi(g s) = psi(g) psi(s) for every g and every generator s.
inline bool verify_group_iso(const LocalGroup& G1, const LocalGroup& G2, const std::vector<uint32_t>& psi) {
  const auto& E1 = G1.elements();
  const auto& E2 = G2.elements();
  if (psi.size() != E1.elems.size() || E1.elems.size() != E2.elems.size()) return false;
  std::vector<char> hit(E2.elems.size(), 0);
  for (uint32_t j : psi) {
    if (j >= hit.size() || hit[j]) return false;
    hit[j] = 1;
  }
  for (const auto& s : E1.gens) {
    uint32_t si = *E1.find(s);
    for (uint32_t g = 0; g < E1.elems.size(); ++g) {
      auto gs = E1.find(G1.mul(E1.elems[g], s));
      if (!gs) return false;
      if (E2.elems[psi[*gs]] != G2.mul(E2.elems[psi[g]], E2.elems[psi[si]])) return false;
    }
  }
  return true;
}

// f(g v) = psi(g) f(v) for all generators g (all elements when exhaustive).
inline bool verify_equivariant_bijection(const LocalBall& B1, const LocalBall& B2, const std::vector<uint32_t>& psi,
                                         const std::vector<uint32_t>& f, bool exhaustive) {
  if (f.size() != B1.vertices.size() || B1.vertices.size() != B2.vertices.size()) return false;
  std::vector<char> hit(f.size(), 0);
  for (uint32_t v = 0; v < f.size(); ++v) {
    if (f[v] >= hit.size() || hit[f[v]]) return false;
    hit[f[v]] = 1;
    if (B1.vertices[v].level != B2.vertices[f[v]].level) return false;
    if (f[B1.vertices[v].parent] != B2.vertices[f[v]].parent) return false;
  }
  const auto& E1 = B1.elements();
  std::vector<uint32_t> gs;
  if (exhaustive) {
    for (uint32_t g = 0; g < E1.elems.size(); ++g) gs.push_back(g);
  } else {
    for (const auto& s : E1.gens) gs.push_back(*E1.find(s));
  }
  for (uint32_t g : gs)
    for (uint32_t v = 0; v < f.size(); ++v)
      if (f[B1.act_index(g, v)] != B2.act_index(psi[g], f[v])) return false;
  return true;
}

// Level-preserving psi-equivariant vertex bijection, matched orbit by orbit through
// stabilizers and parent compatibility.
inline std::optional<std::vector<uint32_t>> ball_isomorphic(const LocalBall& B1, const LocalBall& B2,
                                                            const std::vector<uint32_t>& psi) {
  if (B1.sphere_sizes() != B2.sphere_sizes()) return std::nullopt;
  const auto& E1 = B1.elements();
  if (psi.size() != E1.elems.size() || E1.elems.size() != B2.elements().elems.size()) return std::nullopt;
  std::vector<uint32_t> gens;
  for (const auto& g : E1.gens) gens.push_back(*E1.find(g));
  uint32_t V = static_cast<uint32_t>(B1.vertices.size());
  std::vector<uint32_t> f(V, UINT32_MAX);
  std::vector<char> used(V, 0);
  f[0] = 0;
  used[0] = 1;
  // Orbit representatives in vertex order.
  std::vector<uint32_t> reps;
  {
    std::vector<char> seen(V, 0);
    seen[0] = 1;
    for (uint32_t v = 1; v < V; ++v) {
      if (seen[v]) continue;
      reps.push_back(v);
      std::vector<uint32_t> orbit{v};
      seen[v] = 1;
      for (size_t i = 0; i < orbit.size(); ++i)
        for (uint32_t g : gens) {
          uint32_t w = B1.act_index(g, orbit[i]);
          if (!seen[w]) {
            seen[w] = 1;
            orbit.push_back(w);
          }
        }
    }
  }
  std::function<bool(size_t)> place = [&](size_t k) -> bool {
    if (k == reps.size()) return true;
    uint32_t v = reps[k];
    const auto& vx = B1.vertices[v];
    std::vector<uint32_t> stab;
    for (uint32_t g = 0; g < E1.elems.size(); ++g)
      if (B1.act_index(g, v) == v) stab.push_back(g);
    for (uint32_t w : B2.level_ids[vx.level]) {
      if (used[w] || B2.vertices[w].parent != f[vx.parent]) continue;
      bool ok = true;
      for (uint32_t s : stab)
        if (B2.act_index(psi[s], w) != w) {
          ok = false;
          break;
        }
      if (!ok) continue;
      // extend along the orbit: f(g v) = psi(g) w
      std::vector<uint32_t> orbit{v};
      std::vector<uint32_t> added{v};
      f[v] = w;
      used[w] = 1;
      bool clash = false;
      for (size_t i = 0; i < orbit.size() && !clash; ++i)
        for (uint32_t g : gens) {
          uint32_t a = B1.act_index(g, orbit[i]);
          uint32_t b = B2.act_index(psi[g], f[orbit[i]]);
          if (f[a] == UINT32_MAX) {
            if (used[b]) {
              clash = true;
              break;
            }
            f[a] = b;
            used[b] = 1;
            orbit.push_back(a);
            added.push_back(a);
          } else if (f[a] != b) {
            clash = true;
            break;
          }
        }
      if (!clash) {
        for (uint32_t a : added)
          if (f[B1.vertices[a].parent] == UINT32_MAX || f[B1.vertices[a].parent] != B2.vertices[f[a]].parent) clash = true;
      }
      if (!clash && place(k + 1)) return true;
      for (uint32_t a : added) {
        used[f[a]] = 0;
        f[a] = UINT32_MAX;
      }
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  if (!verify_equivariant_bijection(B1, B2, psi, f, false)) return std::nullopt;
  return f;
}

inline std::string ball_to_dot(const LocalBall& B) {
  std::ostringstream os;
  os << "graph ball {\n";
  for (uint32_t v = 0; v < B.vertices.size(); ++v) {
    const auto& x = B.vertices[v];
    os << "  v" << v << " [label=\"" << x.level << ":" << x.coset << "\"";
    if (v == B.root()) os << ", shape=doublecircle, style=bold";
    os << "];\n";
  }
  for (auto [a, b] : B.edges) os << "  v" << a << " -- v" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace btlab
