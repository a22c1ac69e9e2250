#pragma once
// Graphs attached to a transitive action: the fixer-neighborhood graph, the
// explicit complement-of-derangement graph, orbital digraphs, double-coset
// graphs and block quotients.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ekr/bitgraph.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"
#include "ekr/psl2.hpp"

namespace ekr {

// Graph on the non-identity point-fixers S of a transitive action.  Two
// fixers s, t are adjacent when s^{-1} t again fixes a point, i.e. when
// {1, s, t} is intersecting.  The complement-of-derangement graph Cay(G, S)
// is vertex-transitive, so omega(Cay(G, S)) = 1 + omega(this graph); all
// density computations run here, on |S| vertices instead of |G|.
inline BitGraph fixer_neighborhood_graph(const std::vector<Perm>& S) {
  std::unordered_map<Perm, size_t, PermHash> pos;
  pos.reserve(S.size() * 2);
  for (size_t i = 0; i < S.size(); ++i) {
    if (S[i].is_identity())
      throw std::invalid_argument("fixer set contains the identity");
    if (!pos.emplace(S[i], i).second)
      throw std::invalid_argument("fixer set contains a repeated element");
  }
  for (const Perm& s : S)
    if (pos.find(s.inverse()) == pos.end())
      throw std::invalid_argument("fixer set is not inverse-closed");

  BitGraph g(S.size());
  // Neighbors of s are exactly {s*x : x in S} intersected with S, since
  // s^{-1} t in S means t = s*x for some x in S.  x = 1 never occurs, so no
  // self-loops arise; inverse closure of S makes the relation symmetric.
  for (size_t i = 0; i < S.size(); ++i) {
    for (const Perm& x : S) {
      auto it = pos.find(compose(S[i], x));
      if (it != pos.end() && it->second > i) g.add_edge(i, it->second);
    }
  }
  return g;
}

// Same graph built at the matrix level, for PSL(2,q) actions whose coset
// degree exceeds the explicit-permutation limit.  Vertices are canonical
// projective matrices; adjacency via s^{-1} t membership in the packed set.
inline BitGraph fixer_neighborhood_graph(const Field& F,
                                         const std::vector<Mat2>& S) {
  std::unordered_map<uint64_t, size_t> pos;
  pos.reserve(S.size() * 2);
  for (size_t i = 0; i < S.size(); ++i) {
    Mat2 c = canonicalize(F, S[i]);
    if (is_proj_identity(F, c))
      throw std::invalid_argument("fixer set contains the identity");
    if (!pos.emplace(pack_matrix(c), i).second)
      throw std::invalid_argument("fixer set contains a repeated element");
  }
  for (const Mat2& s : S)
    if (pos.find(pack_matrix(canonicalize(F, mat_inv(F, s)))) == pos.end())
      throw std::invalid_argument("fixer set is not inverse-closed");

  BitGraph g(S.size());
  for (size_t i = 0; i < S.size(); ++i) {
    for (const Mat2& x : S) {
      Mat2 t = canonicalize(F, mat_mul(F, S[i], x));
      auto it = pos.find(pack_matrix(t));
      if (it != pos.end() && it->second > i) g.add_edge(i, it->second);
    }
  }
  return g;
}

// The whole complement of the derangement graph: vertices are the elements
// of G, with g ~ h when g^{-1} h fixes a point.  Intersecting sets are
// exactly the cliques.  Only viable for small groups; larger ones must go
// through the fixer-neighborhood graph.
inline constexpr uint64_t kExplicitGraphCap = 1u << 16;

inline BitGraph complement_derangement_graph(const FiniteGroup& G) {
  if (!G.is_transitive())
    throw std::invalid_argument("complement_derangement_graph: action is not transitive");
  if (G.order() > kExplicitGraphCap)
    throw std::runtime_error(
        "group of order " + std::to_string(G.order()) +
        " exceeds the explicit graph cap of " + std::to_string(kExplicitGraphCap) +
        " vertices; use the fixer-neighborhood route instead");

  std::vector<uint32_t> fixers;
  for (uint32_t i = 1; i < G.order(); ++i) {
    const Perm& g = G.elements[i];
    for (Point v = 0; v < G.degree; ++v)
      if (g(v) == v) {
        fixers.push_back(i);
        break;
      }
  }

  BitGraph graph(G.order());
  for (uint32_t i = 0; i < G.order(); ++i) {
    for (uint32_t s : fixers) {
      uint32_t j = G.position_of(compose(G.elements[i], G.elements[s]));
      if (j > i) graph.add_edge(i, j);
    }
  }
  graph.labels.resize(G.order());
  for (uint32_t i = 0; i < G.order(); ++i) graph.labels[i] = i;
  return graph;
}

// ---------------------------------------------------------------------------
// Orbital digraphs: the orbits of G on ordered pairs of points.

struct OrbitalDigraph {
  size_t degree = 0;
  std::pair<Point, Point> representative{0, 0};  // lex-least pair in the orbit
  std::vector<std::pair<Point, Point>> arcs;     // lex-sorted
  bool trivial = false;                          // the diagonal orbital

  bool has_arc(Point u, Point v) const {
    return std::binary_search(arcs.begin(), arcs.end(), std::make_pair(u, v));
  }

  // Underlying undirected graph: union of the orbital with its reverse.
  BitGraph underlying() const {
    BitGraph g(degree);
    for (auto [u, v] : arcs)
      if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
    return g;
  }
};

// All orbitals, diagonal included (tagged trivial), ordered by their
// lex-least representative pair.  Arc counts sum to degree^2.
inline std::vector<OrbitalDigraph> orbitals(const FiniteGroup& G) {
  if (!G.is_transitive())
    throw std::invalid_argument("orbitals: action is not transitive");
  const size_t n = G.degree;
  std::vector<bool> seen(n * n, false);
  std::vector<OrbitalDigraph> result;
  uint64_t total_arcs = 0;

  for (size_t u = 0; u < n; ++u) {
    for (size_t v = 0; v < n; ++v) {
      if (seen[u * n + v]) continue;
      OrbitalDigraph orb;
      orb.degree = n;
      orb.representative = {static_cast<Point>(u), static_cast<Point>(v)};
      orb.trivial = (u == v);
      std::vector<std::pair<Point, Point>> queue;
      queue.emplace_back(static_cast<Point>(u), static_cast<Point>(v));
      seen[u * n + v] = true;
      for (size_t head = 0; head < queue.size(); ++head) {
        auto [a, b] = queue[head];
        for (const Perm& g : G.generators) {
          Point a2 = g(a), b2 = g(b);
          if (!seen[size_t{a2} * n + b2]) {
            seen[size_t{a2} * n + b2] = true;
            queue.emplace_back(a2, b2);
          }
        }
      }
      std::sort(queue.begin(), queue.end());
      orb.arcs = std::move(queue);
      total_arcs += orb.arcs.size();
      result.push_back(std::move(orb));
    }
  }
  if (total_arcs != uint64_t{n} * n)
    throw std::logic_error("orbitals: arc counts do not sum to degree^2");
  return result;
}

// An orbital is self-paired when it coincides with its reverse.  Computed
// from the arc set and, independently, by the 2-element criterion: some g
// of 2-power order maps u to v with g^2 fixing u.  The two must agree.
inline bool is_self_paired(const FiniteGroup& G, const OrbitalDigraph& orb) {
  if (orb.trivial)
    throw std::invalid_argument("is_self_paired: orbital is trivial");

  bool by_arcs = true;
  for (auto [u, v] : orb.arcs)
    if (!orb.has_arc(v, u)) {
      by_arcs = false;
      break;
    }

  auto [u, v] = orb.representative;
  bool by_criterion = false;
  for (const Perm& g : G.elements) {
    if (g(u) != v) continue;
    uint64_t o = element_order(g);
    if ((o & (o - 1)) != 0) continue;  // need a 2-element
    if (g(g(u)) == u) {
      by_criterion = true;
      break;
    }
  }

  if (by_arcs != by_criterion)
    throw std::logic_error("is_self_paired: arc reversal and 2-element criterion disagree");
  return by_arcs;
}

// Weak connectivity of an orbital digraph, cross-checked against the
// generation criterion: the graph is connected iff G = <G_u, g> for any g
// mapping u to v, (u, v) the representative arc.
inline bool is_connected_orbital(const FiniteGroup& G, const OrbitalDigraph& orb) {
  if (orb.trivial)
    throw std::invalid_argument("is_connected_orbital: orbital is trivial");

  const size_t n = orb.degree;
  std::vector<std::vector<Point>> adj(n);
  for (auto [a, b] : orb.arcs) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> reached(n, false);
  std::vector<Point> stack{0};
  reached[0] = true;
  size_t count = 1;
  while (!stack.empty()) {
    Point x = stack.back();
    stack.pop_back();
    for (Point y : adj[x])
      if (!reached[y]) {
        reached[y] = true;
        ++count;
        stack.push_back(y);
      }
  }
  bool by_graph = (count == n);

  auto [u, v] = orb.representative;
  std::vector<Perm> gens;
  for (uint32_t i : stabilizer(G, u)) gens.push_back(G.elements[i]);
  for (const Perm& g : G.elements)
    if (g(u) == v) {
      gens.push_back(g);
      break;
    }
  bool by_generation = (group_order_by_stabilizer_chain(gens) == G.order());

  if (by_graph != by_generation)
    throw std::logic_error("is_connected_orbital: BFS and generation criterion disagree");
  return by_graph;
}

// ---------------------------------------------------------------------------
// Double-coset graph on G/H: arc (xH, yH) iff x^{-1} y lies in HSH.

struct DoubleCosetGraph {
  size_t cosets = 0;
  std::vector<std::pair<Point, Point>> arcs;  // lex-sorted, loops excluded
  bool undirected = false;
  uint64_t hsh_size = 0;
  uint64_t valency = 0;  // |HSH| / |H|, the common out-degree

  bool has_arc(Point u, Point v) const {
    return std::binary_search(arcs.begin(), arcs.end(), std::make_pair(u, v));
  }
};

inline DoubleCosetGraph double_coset_graph(const FiniteGroup& G,
                                           const std::vector<uint32_t>& h_positions,
                                           const std::vector<uint32_t>& s_positions) {
  for (uint32_t s : s_positions)
    if (s >= G.order()) throw std::invalid_argument("double_coset_graph: S position out of range");

  CosetAction action = coset_action(G, h_positions);
  const size_t n = action.image.degree;

  // HSH as a set of element positions.
  std::unordered_set<uint32_t> hsh;
  for (uint32_t h1 : h_positions)
    for (uint32_t s : s_positions)
      for (uint32_t h2 : h_positions) {
        Perm p = compose(compose(G.elements[h1], G.elements[s]), G.elements[h2]);
        hsh.insert(G.position_of(p));
      }

  DoubleCosetGraph result;
  result.cosets = n;
  result.hsh_size = hsh.size();
  if (hsh.size() % h_positions.size() != 0)
    throw std::logic_error("double_coset_graph: |HSH| is not a multiple of |H|");
  result.valency = hsh.size() / h_positions.size();

  std::vector<uint64_t> out_degree(n, 0);
  for (size_t a = 0; a < n; ++a) {
    Perm xa_inv = G.elements[action.coset_rep[a]].inverse();
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      Perm d = compose(xa_inv, G.elements[action.coset_rep[b]]);
      if (hsh.count(G.position_of(d))) {
        result.arcs.emplace_back(static_cast<Point>(a), static_cast<Point>(b));
        ++out_degree[a];
      }
    }
  }
  std::sort(result.arcs.begin(), result.arcs.end());

  // 1 in S would put H itself inside HSH; those pairs are same-coset loops,
  // excluded above, which costs each vertex |H x 1 x H| / |H| arcs.
  uint64_t loops_per_vertex = hsh.count(0) ? 1 : 0;
  for (size_t a = 0; a < n; ++a)
    if (out_degree[a] + loops_per_vertex != result.valency)
      throw std::logic_error("double_coset_graph: out-degree differs from |HSH|/|H|");

  result.undirected = true;
  for (auto [u, v] : result.arcs)
    if (!result.has_arc(v, u)) {
      result.undirected = false;
      break;
    }
  return result;
}

// ---------------------------------------------------------------------------
// Quotient of a graph by a partition: blocks adjacent iff some cross edge.

inline BitGraph quotient_graph(const BitGraph& g,
                               const std::vector<std::vector<Point>>& blocks) {
  std::vector<int64_t> block_of(g.size(), -1);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (Point v : blocks[b]) {
      if (v >= g.size() || block_of[v] != -1)
        throw std::invalid_argument("quotient_graph: blocks do not partition the vertices");
      block_of[v] = static_cast<int64_t>(b);
    }
  for (size_t v = 0; v < g.size(); ++v)
    if (block_of[v] == -1)
      throw std::invalid_argument("quotient_graph: blocks do not partition the vertices");

  BitGraph q(blocks.size());
  for (size_t v = 0; v < g.size(); ++v)
    for (size_t w : g.neighbors(v)) {
      size_t bv = static_cast<size_t>(block_of[v]);
      size_t bw = static_cast<size_t>(block_of[w]);
      if (bv != bw && !q.has_edge(bv, bw)) q.add_edge(bv, bw);
    }
  return q;
}

}  // namespace ekr
