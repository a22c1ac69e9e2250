#pragma once
// Intersection density rho(G) = omega(Cay(G,S)) / |G_v|, EKR and strict-EKR
// verdicts, the upper bounds from semiregular subgroups and block quotients,
// the a_111 class constant for order-2 stabilizers, character-sum checks,
// and the order-3 stabilizer extension analysis.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ekr/bitgraph.hpp"
#include "ekr/clique.hpp"
#include "ekr/graphs.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"
#include "ekr/rational.hpp"

namespace ekr {

struct DensityOptions {
  int threads = 0;                  // 0: hardware concurrency
  std::optional<size_t> hint;       // known clique lower bound, if any
  uint64_t enum_cap = 100000;       // maximum-clique enumeration cap
  uint64_t explicit_cap = 1024;     // auto route: explicit graph up to here
  bool force_fixer = false;
  bool force_explicit = false;
};

struct DensityReport {
  std::string id;
  uint64_t group_order = 0;
  uint64_t degree = 0;
  uint64_t stabilizer_order = 0;
  uint64_t omega = 0;             // maximum intersecting set size
  Rational rho;                   // omega / stabilizer_order, exact
  std::vector<Perm> witness;      // a maximum basic set, identity first
  bool ekr = false;
  std::string strict_ekr;         // "true" | "false" | "unknown-truncated"
  std::string route;              // "explicit-graph" | "fixer-neighborhood"
  uint64_t clique_nodes = 0;
  double clique_seconds = 0.0;
  uint64_t basic_sets_examined = 0;  // maximum basic sets tested for strict-EKR
  bool enumeration_truncated = false;
};

// The identity and the non-identity point-fixers of G's own action, as
// element positions.  Their union over cosets is where intersection lives.
inline std::vector<uint32_t> fixer_positions(const FiniteGroup& G) {
  std::vector<uint32_t> out;
  for (uint32_t i = 1; i < G.order(); ++i) {
    const Perm& g = G.elements[i];
    for (Point v = 0; v < G.degree; ++v)
      if (g(v) == v) {
        out.push_back(i);
        break;
      }
  }
  return out;
}

// F is intersecting when every pair agrees on a point.  Checked against the
// definition and against membership of pairwise quotients in S u {1}; the
// two must agree.
inline bool is_intersecting(const FiniteGroup& G, const std::vector<uint32_t>& F) {
  for (uint32_t i : F)
    if (i >= G.order()) throw std::invalid_argument("is_intersecting: element not in group");

  bool by_definition = true;
  for (size_t a = 0; a < F.size() && by_definition; ++a)
    for (size_t b = a + 1; b < F.size(); ++b) {
      const Perm& g = G.elements[F[a]];
      const Perm& h = G.elements[F[b]];
      bool agree = false;
      for (Point v = 0; v < G.degree; ++v)
        if (g(v) == h(v)) {
          agree = true;
          break;
        }
      if (!agree) {
        by_definition = false;
        break;
      }
    }

  std::unordered_set<uint32_t> s_set;
  s_set.insert(0);
  for (uint32_t i : fixer_positions(G)) s_set.insert(i);
  bool by_membership = true;
  for (size_t a = 0; a < F.size() && by_membership; ++a)
    for (size_t b = a + 1; b < F.size(); ++b) {
      Perm d = compose(G.elements[F[a]].inverse(), G.elements[F[b]]);
      if (!s_set.count(G.position_of(d))) {
        by_membership = false;
        break;
      }
    }

  if (by_definition != by_membership)
    throw std::logic_error("is_intersecting: definition and S-membership disagree");
  return by_definition;
}

// Lazy variant: pairwise quotients against a fixer set given as plain
// permutations (substrate level, no enumerated group required).
inline bool is_intersecting(const std::vector<Perm>& F, const std::vector<Perm>& S) {
  std::unordered_set<Perm, PermHash> s_set(S.begin(), S.end());
  for (size_t a = 0; a < F.size(); ++a)
    for (size_t b = a + 1; b < F.size(); ++b) {
      Perm d = compose(F[a].inverse(), F[b]);
      if (!d.is_identity() && !s_set.count(d)) return false;
    }
  return true;
}

inline std::vector<Perm> translate_set(const Perm& f, const std::vector<Perm>& F) {
  std::vector<Perm> out;
  out.reserve(F.size());
  Perm fi = f.inverse();
  for (const Perm& g : F) out.push_back(compose(fi, g));
  return out;
}

inline std::vector<Perm> product_set(const std::vector<Perm>& A,
                                     const std::vector<Perm>& B) {
  std::unordered_set<Perm, PermHash> seen;
  std::vector<Perm> out;
  for (const Perm& a : A)
    for (const Perm& b : B) {
      Perm p = compose(a, b);
      if (seen.insert(p).second) out.push_back(p);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_elementary_abelian_2(const std::vector<Perm>& gens) {
  if (gens.empty()) return true;
  SubgroupShape shape = subgroup_shape(gens);
  return shape.abelian && shape.exponent <= 2;
}

namespace detail {

// Shared tail of the density computation: clique numbers are found on the
// fixer-neighborhood graph, then maximum basic sets are enumerated and each
// is tested for being a point stabilizer.
struct StrictEkrInput {
  const BitGraph* fg = nullptr;
  uint64_t omega_fg = 0;
  uint64_t cap = 100000;
};

struct StrictEkrOutcome {
  std::string verdict;  // "true" | "false" | "unknown-truncated"
  uint64_t examined = 0;
  bool truncated = false;
};

// test(clique-vertex-ids) -> is this basic maximum set a point stabilizer?
template <typename TestFn>
StrictEkrOutcome strict_ekr_by_enumeration(const StrictEkrInput& in, TestFn&& test) {
  StrictEkrOutcome out;
  CliqueEnumeration en = enumerate_maximum_cliques(*in.fg, in.omega_fg, in.cap);
  out.truncated = en.truncated;
  out.examined = en.cliques.size();
  for (const auto& c : en.cliques) {
    if (!test(c)) {
      out.verdict = "false";
      return out;
    }
  }
  out.verdict = en.truncated ? "unknown-truncated" : "true";
  return out;
}

}  // namespace detail

// Density of G in its own (transitive) action.  The clique number always
// comes from the fixer-neighborhood graph; small groups additionally build
// the explicit complement-of-derangement graph and the two answers are
// required to match.
inline DensityReport intersection_density(const FiniteGroup& G,
                                          const std::string& id = "",
                                          const DensityOptions& opts = {}) {
  if (!G.is_transitive())
    throw std::invalid_argument("intersection_density: action is not transitive");
  if (opts.force_fixer && opts.force_explicit)
    throw std::invalid_argument("intersection_density: conflicting route overrides");

  DensityReport rep;
  rep.id = id;
  rep.group_order = G.order();
  rep.degree = G.degree;
  if (G.order() % G.degree != 0)
    throw std::logic_error("intersection_density: degree does not divide order");
  rep.stabilizer_order = G.order() / G.degree;
  if (stabilizer(G, 0).size() != rep.stabilizer_order)
    throw std::logic_error("intersection_density: stabilizer size mismatch");

  std::vector<uint32_t> s_pos = fixer_positions(G);
  std::vector<Perm> S;
  S.reserve(s_pos.size());
  for (uint32_t i : s_pos) S.push_back(G.elements[i]);

  BitGraph fg = fixer_neighborhood_graph(S);
  CliqueResult fg_clique = max_clique(fg, opts.hint, opts.threads);
  rep.clique_nodes = fg_clique.node_count;
  rep.clique_seconds = fg_clique.elapsed_seconds;
  rep.omega = 1 + fg_clique.omega;

  bool use_explicit = opts.force_explicit ||
                      (!opts.force_fixer && G.order() <= opts.explicit_cap);
  if (use_explicit) {
    BitGraph whole = complement_derangement_graph(G);
    CliqueResult full = max_clique(whole, rep.omega, opts.threads);
    if (full.omega != rep.omega)
      throw std::logic_error("intersection_density: explicit graph disagrees with fixer route");
    rep.route = "explicit-graph";
    rep.clique_nodes += full.node_count;
    rep.clique_seconds += full.elapsed_seconds;
  } else {
    rep.route = "fixer-neighborhood";
  }

  if (rep.omega < rep.stabilizer_order)
    throw std::logic_error("intersection_density: omega below the stabilizer order");
  rep.rho = Rational(int64_t(rep.omega), int64_t(rep.stabilizer_order));
  rep.ekr = (rep.rho == Rational(1));

  // Witness: identity plus the fixers of the maximum clique found.
  rep.witness.push_back(G.elements[0]);
  std::vector<uint32_t> witness_pos{0};
  for (uint32_t v : fg_clique.witness) {
    rep.witness.push_back(S[v]);
    witness_pos.push_back(s_pos[v]);
  }
  if (!is_intersecting(G, witness_pos))
    throw std::logic_error("intersection_density: witness is not intersecting");

  if (!rep.ekr) {
    // Some maximum set beats every stabilizer coset.
    rep.strict_ekr = "false";
    return rep;
  }

  // rho = 1: strict-EKR iff every maximum basic set is a point stabilizer.
  std::set<std::vector<uint32_t>> stab_sets;
  for (Point v = 0; v < G.degree; ++v) stab_sets.insert(stabilizer(G, v));

  detail::StrictEkrInput in;
  in.fg = &fg;
  in.omega_fg = fg_clique.omega;
  in.cap = opts.enum_cap;
  auto outcome = detail::strict_ekr_by_enumeration(in, [&](const std::vector<uint32_t>& c) {
    std::vector<uint32_t> basic{0};
    for (uint32_t v : c) basic.push_back(s_pos[v]);
    std::sort(basic.begin(), basic.end());
    return stab_sets.count(basic) != 0;
  });
  rep.strict_ekr = outcome.verdict;
  rep.basic_sets_examined = outcome.examined;
  rep.enumeration_truncated = outcome.truncated;
  return rep;
}

// Lazy route: everything derived from the fixer set (and optionally a
// prebuilt fixer graph), no enumeration of G.  Strict-EKR at rho = 1 uses
// the prime-stabilizer criterion: a basic maximum set is a stabilizer coset
// iff it is the cyclic subgroup generated by any of its fixers.
inline DensityReport density_from_fixers(const std::string& id,
                                         uint64_t group_order,
                                         uint64_t stabilizer_order,
                                         const std::vector<Perm>& S,
                                         const BitGraph* prebuilt = nullptr,
                                         const DensityOptions& opts = {}) {
  if (stabilizer_order == 0 || group_order % stabilizer_order != 0)
    throw std::invalid_argument("density_from_fixers: stabilizer order must divide group order");

  DensityReport rep;
  rep.id = id;
  rep.group_order = group_order;
  rep.stabilizer_order = stabilizer_order;
  rep.degree = group_order / stabilizer_order;
  rep.route = "fixer-neighborhood";

  BitGraph local;
  const BitGraph* fg = prebuilt;
  if (fg == nullptr) {
    local = fixer_neighborhood_graph(S);
    fg = &local;
  }
  if (fg->size() != S.size())
    throw std::invalid_argument("density_from_fixers: graph size differs from |S|");

  CliqueResult fg_clique = max_clique(*fg, opts.hint, opts.threads);
  rep.clique_nodes = fg_clique.node_count;
  rep.clique_seconds = fg_clique.elapsed_seconds;
  rep.omega = 1 + fg_clique.omega;
  if (rep.omega < rep.stabilizer_order)
    throw std::logic_error("density_from_fixers: omega below the stabilizer order");
  rep.rho = Rational(int64_t(rep.omega), int64_t(rep.stabilizer_order));
  rep.ekr = (rep.rho == Rational(1));

  size_t degree = S.empty() ? 0 : S.front().degree();
  rep.witness.push_back(Perm::identity(degree == 0 ? 1 : degree));
  std::vector<Perm> witness_fixers;
  for (uint32_t v : fg_clique.witness) {
    rep.witness.push_back(S[v]);
    witness_fixers.push_back(S[v]);
  }
  std::vector<Perm> check = rep.witness;
  if (!is_intersecting(check, S))
    throw std::logic_error("density_from_fixers: witness is not intersecting");

  if (!rep.ekr) {
    rep.strict_ekr = "false";
    return rep;
  }
  if (stabilizer_order == 1) {
    rep.strict_ekr = "true";
    return rep;
  }

  // Prime stabilizer order: <a> for a fixer a is automatically a point
  // stabilizer, so the test is power-closure of the basic set.
  for (uint64_t d = 2; d * d <= stabilizer_order; ++d)
    if (stabilizer_order % d == 0)
      throw std::logic_error(
          "density_from_fixers: strict-EKR at rho = 1 needs a prime stabilizer "
          "order without an enumerated group");

  detail::StrictEkrInput in;
  in.fg = fg;
  in.omega_fg = fg_clique.omega;
  in.cap = opts.enum_cap;
  auto outcome = detail::strict_ekr_by_enumeration(in, [&](const std::vector<uint32_t>& c) {
    if (c.empty()) return true;  // {1} with trivial stabilizer, handled above
    std::set<Perm> got;
    for (uint32_t v : c) got.insert(S[v]);
    std::set<Perm> powers;
    Perm a = S[c[0]];
    Perm acc = a;
    for (uint64_t k = 1; k < stabilizer_order; ++k) {
      powers.insert(acc);
      acc = compose(acc, a);
    }
    return got == powers;
  });
  rep.strict_ekr = outcome.verdict;
  rep.basic_sets_examined = outcome.examined;
  rep.enumeration_truncated = outcome.truncated;
  return rep;
}

// rho(G) <= number of K-orbits, for semiregular K.
inline Rational semiregular_upper_bound(const FiniteGroup& G,
                                        const std::vector<uint32_t>& K) {
  SemiregularResult r = is_semiregular(G, K);
  if (!r.semiregular)
    throw std::invalid_argument("semiregular_upper_bound: subgroup is not semiregular");
  return Rational(int64_t(r.orbit_count));
}

// rho(G) <= rho(G-bar) for the action on the orbits of a semiregular K
// forming an invariant partition.  Returns rho of the quotient action.
inline Rational quotient_upper_bound(const FiniteGroup& G,
                                     const std::vector<uint32_t>& K,
                                     const DensityOptions& opts = {}) {
  SemiregularResult sr = is_semiregular(G, K);
  if (!sr.semiregular)
    throw std::invalid_argument("quotient_upper_bound: subgroup is not semiregular");

  // K-orbits as blocks, ordered by smallest point.
  std::vector<bool> seen(G.degree, false);
  std::vector<std::vector<Point>> parts;
  for (Point v = 0; v < G.degree; ++v) {
    if (seen[v]) continue;
    std::vector<Point> orbit{v};
    seen[v] = true;
    for (size_t head = 0; head < orbit.size(); ++head)
      for (uint32_t ki : K) {
        Point w = G.elements[ki](orbit[head]);
        if (!seen[w]) {
          seen[w] = true;
          orbit.push_back(w);
        }
      }
    std::sort(orbit.begin(), orbit.end());
    parts.push_back(std::move(orbit));
  }
  BlockSystem B = make_block_system(std::move(parts), G.degree);
  if (!is_invariant_partition(G, B))
    throw std::invalid_argument("quotient_upper_bound: K-orbits are not G-invariant");

  QuotientAction qa = quotient_action(G, B);
  return intersection_density(qa.image, "", opts).rho;
}

// a_111 = #{(x, y) in C1 x C1 : xy = g} for the class C1 of an order-2
// fixer g.  Zero iff the group has the EKR property (order-2 stabilizers).
inline uint64_t class_constant_a111(const FiniteGroup& G, const Perm& g) {
  if (!G.is_transitive())
    throw std::invalid_argument("class_constant_a111: action is not transitive");
  if (G.order() / G.degree != 2 || G.order() % G.degree != 0)
    throw std::invalid_argument("class_constant_a111: stabilizer order is not 2");
  if (g.is_identity())
    throw std::invalid_argument("class_constant_a111: g must not be the identity");
  bool fixes = false;
  for (Point v = 0; v < G.degree; ++v)
    if (g(v) == v) {
      fixes = true;
      break;
    }
  if (!fixes)
    throw std::invalid_argument("class_constant_a111: g is not a point-fixer");

  std::vector<Perm> c1 = conjugacy_class(G.generators, g);
  std::unordered_set<Perm, PermHash> in_class(c1.begin(), c1.end());
  uint64_t count = 0;
  for (const Perm& x : c1) {
    // xy = g forces y = x^{-1} g.
    if (in_class.count(compose(x.inverse(), g))) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Character-sum criterion for order-2 stabilizers.

struct CharClass {
  uint64_t size = 0;
  uint64_t rep_order = 0;
};

struct CharTable {
  std::vector<CharClass> classes;
  std::vector<std::vector<std::complex<double>>> chars;  // one row per irreducible
  std::optional<size_t> g_class;  // column of g, when the file pins it
};

struct CharSumResult {
  std::complex<double> sum;   // sum over chi of chi(g)^3 / chi(1)
  bool ekr = false;           // |sum| < 1e-6
  uint64_t a111_direct = 0;
  double a111_from_table = 0; // structure-constant evaluation, must match the direct count
};

inline CharSumResult character_sum_check(const FiniteGroup& G, const Perm& g,
                                         const CharTable& table) {
  const size_t k = table.classes.size();
  if (k == 0) throw std::invalid_argument("character table: no classes");
  if (table.chars.size() != k)
    throw std::invalid_argument("character table: row count differs from class count");
  for (const auto& row : table.chars)
    if (row.size() != k)
      throw std::invalid_argument("character table: ragged row");

  uint64_t class_sum = 0;
  for (const auto& c : table.classes) class_sum += c.size;
  if (class_sum != G.order())
    throw std::invalid_argument("character table: class sizes do not sum to |G|");

  size_t id_col = k;
  for (size_t i = 0; i < k; ++i)
    if (table.classes[i].size == 1 && table.classes[i].rep_order == 1) {
      if (id_col != k) throw std::invalid_argument("character table: two identity classes");
      id_col = i;
    }
  if (id_col == k) throw std::invalid_argument("character table: no identity class");

  double degree_sq = 0;
  for (const auto& row : table.chars) {
    if (row[id_col].real() <= 0 || std::abs(row[id_col].imag()) > 1e-9)
      throw std::invalid_argument("character table: chi(1) must be a positive integer");
    degree_sq += row[id_col].real() * row[id_col].real();
  }
  if (std::abs(degree_sq - double(G.order())) > 1e-6 * double(G.order()))
    throw std::invalid_argument("character table: degrees do not square-sum to |G|");

  // The direct count also validates g (order-2 fixer, stabilizer order 2).
  uint64_t direct = class_constant_a111(G, g);
  uint64_t g_class_size = conjugacy_class(G.generators, g).size();

  size_t g_col = k;
  if (table.g_class) {
    g_col = *table.g_class;
    if (g_col >= k) throw std::invalid_argument("character table: g_class out of range");
    if (table.classes[g_col].rep_order != 2 || table.classes[g_col].size != g_class_size)
      throw std::invalid_argument("character table: g_class does not match g");
  } else {
    for (size_t i = 0; i < k; ++i)
      if (table.classes[i].rep_order == 2 && table.classes[i].size == g_class_size) {
        if (g_col != k)
          throw std::invalid_argument(
              "character table: class of g is ambiguous, supply g_class");
        g_col = i;
      }
    if (g_col == k)
      throw std::invalid_argument("character table: no class matches g");
  }

  CharSumResult res;
  for (const auto& row : table.chars) {
    std::complex<double> cg = row[g_col];
    res.sum += cg * cg * cg / row[id_col];
  }
  res.ekr = std::abs(res.sum) < 1e-6;

  // Class-algebra structure constant with all three classes equal to C(g):
  // a_111 = |G| / |C_G(g)|^2 * sum over chi of chi(g)^2 conj(chi(g)) / chi(1).
  double centralizer = double(G.order()) / double(g_class_size);
  std::complex<double> eq1;
  for (const auto& row : table.chars) {
    std::complex<double> cg = row[g_col];
    eq1 += cg * cg * std::conj(cg) / row[id_col];
  }
  eq1 *= double(G.order()) / (centralizer * centralizer);
  if (std::abs(eq1.imag()) > 1e-6)
    throw std::logic_error("character table: structure-constant value is not real");
  res.a111_from_table = eq1.real();
  res.a111_direct = direct;
  if (std::abs(res.a111_from_table - double(direct)) > 1e-3)
    throw std::logic_error(
        "character table: structure constant disagrees with the direct a_111 count");
  if (res.ekr != (direct == 0))
    throw std::logic_error("character table: sum verdict disagrees with a_111");
  return res;
}

// ---------------------------------------------------------------------------
// Order-3 stabilizer extension structure around H = <x>.

struct ExtensionClosure {
  size_t candidate;        // index into S of the extending fixer y
  size_t hk_size = 0;      // |HK|, at least 9
  SubgroupShape shape;     // <x, y>: (9, 3, abelian) or (27, 3, non-abelian)
};

struct ExtensionReport {
  std::vector<size_t> candidates;     // fixers adjacent to all of {1, x, x^2}
  std::vector<ExtensionClosure> closures;
  uint64_t omega = 0;                 // of Cay(G, S), i.e. 1 + fixer clique
  uint64_t size4_sets_examined = 0;
  bool size4_distinct_stabilizers = true;
  bool enumeration_truncated = false;
};

inline ExtensionReport stabilizer_extension_analysis(const std::vector<Perm>& S,
                                                     const Perm& x,
                                                     const DensityOptions& opts = {}) {
  if (element_order(x) != 3)
    throw std::invalid_argument("stabilizer_extension_analysis: stabilizer order is not 3");
  std::unordered_map<Perm, size_t, PermHash> pos;
  for (size_t i = 0; i < S.size(); ++i) pos.emplace(S[i], i);
  if (!pos.count(x))
    throw std::invalid_argument("stabilizer_extension_analysis: x is not a fixer");

  Perm x2 = compose(x, x);
  Perm xi = x.inverse();

  ExtensionReport rep;
  for (size_t i = 0; i < S.size(); ++i) {
    const Perm& y = S[i];
    if (y == x || y == x2) continue;
    if (pos.count(compose(xi, y)) && pos.count(compose(x, y)))
      rep.candidates.push_back(i);
  }

  // Each candidate closes H u <y> into an intersecting set of size >= 9
  // whose generated group is elementary abelian of order 9 or the
  // non-abelian group of order 27 and exponent 3.
  std::vector<Perm> H{Perm::identity(x.degree()), x, x2};
  for (size_t i : rep.candidates) {
    const Perm& y = S[i];
    std::vector<Perm> K{Perm::identity(x.degree()), y, compose(y, y)};
    std::vector<Perm> hk = product_set(H, K);
    if (hk.size() < 9)
      throw std::logic_error("stabilizer_extension_analysis: |HK| < 9");
    if (!is_intersecting(hk, S))
      throw std::logic_error("stabilizer_extension_analysis: HK is not intersecting");
    SubgroupShape shape = subgroup_shape(std::vector<Perm>{x, y});
    bool z3sq = (shape.order == 9 && shape.exponent == 3 && shape.abelian);
    bool heis = (shape.order == 27 && shape.exponent == 3 && !shape.abelian);
    if (!z3sq && !heis)
      throw std::logic_error("stabilizer_extension_analysis: unexpected <x,y> shape");
    rep.closures.push_back({i, hk.size(), shape});
  }

  // Size-4 maximum basic sets: their non-identity elements pairwise avoid a
  // common stabilizer, i.e. no element is a power of another.
  BitGraph fg = fixer_neighborhood_graph(S);
  CliqueResult cr = max_clique(fg, opts.hint, opts.threads);
  rep.omega = 1 + cr.omega;
  if (cr.omega == 3) {
    CliqueEnumeration en = enumerate_maximum_cliques(fg, cr.omega, opts.enum_cap);
    rep.enumeration_truncated = en.truncated;
    rep.size4_sets_examined = en.cliques.size();
    for (const auto& c : en.cliques) {
      for (size_t a = 0; a < c.size() && rep.size4_distinct_stabilizers; ++a)
        for (size_t b = 0; b < c.size(); ++b) {
          if (a == b) continue;
          if (S[c[b]] == compose(S[c[a]], S[c[a]])) {
            rep.size4_distinct_stabilizers = false;
            break;
          }
        }
    }
  }
  return rep;
}

}  // namespace ekr
