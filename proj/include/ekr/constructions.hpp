#pragma once
// One-call builders for the density instances: S_n on 3-cycle cosets,
// PSL(2,q) on order-3 cosets (q = 1 mod 3 and characteristic 3), AGL(1,q)
// on cosets of a translation subgroup, and the Z2^n extension family.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ekr/bitgraph.hpp"
#include "ekr/density.hpp"
#include "ekr/graphs.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"
#include "ekr/psl2.hpp"

namespace ekr {

// A density problem: the group is described through a faithful substrate
// action, the designated subgroup H, and the fixer set S of the coset
// action on G/H.  The coset action itself is materialized only when small.
struct Instance {
  std::string id;
  uint64_t group_order = 0;
  uint64_t stabilizer_order = 0;
  uint64_t action_degree = 0;  // group_order / stabilizer_order

  std::vector<Perm> substrate_gens;
  size_t substrate_degree = 0;
  std::vector<Perm> h_gens;    // generators of H, as substrate permutations
  std::vector<Perm> fixers;    // S; aligned with fixer_graph when present

  std::optional<BitGraph> fixer_graph;        // prebuilt (matrix route)
  std::optional<FiniteGroup> substrate_group; // enumerated substrate, when cheap
  std::optional<FiniteGroup> coset_image;     // the G/H action, when materialized
  std::optional<size_t> clique_hint;          // fixer-graph clique lower bound
  std::string notes;
};

inline DensityReport density_for_instance(const Instance& inst,
                                          DensityOptions opts = {}) {
  if (!opts.hint && inst.clique_hint) opts.hint = inst.clique_hint;
  if (inst.coset_image)
    return intersection_density(*inst.coset_image, inst.id, opts);
  return density_from_fixers(inst.id, inst.group_order, inst.stabilizer_order,
                             inst.fixers,
                             inst.fixer_graph ? &*inst.fixer_graph : nullptr,
                             opts);
}

// ---------------------------------------------------------------------------
// S_n acting on the cosets of <(0 1 2)>.

inline Instance build_sym3(uint32_t n) {
  if (n < 4)
    throw std::invalid_argument("sym3 needs n >= 4");
  if (n > 20)
    throw std::invalid_argument("sym3: n! overflows past n = 20");

  std::vector<Point> cyc(n), swp(n);
  for (Point i = 0; i < n; ++i) {
    cyc[i] = Point((i + 1) % n);
    swp[i] = i;
  }
  swp[0] = 1;
  swp[1] = 0;
  std::vector<Perm> gens{Perm(std::move(cyc)), Perm(std::move(swp))};

  Perm x = Perm::from_cycles({{0, 1, 2}}, n);
  std::vector<Perm> S = conjugacy_class(gens, x);
  uint64_t expected = uint64_t(n) * (n - 1) * (n - 2) / 3;  // 2 * C(n,3)
  if (S.size() != expected)
    throw std::logic_error("sym3: 3-cycle class has unexpected size");
  std::sort(S.begin(), S.end());

  Instance inst;
  inst.id = "sym3:" + std::to_string(n);
  inst.group_order = 1;
  for (uint64_t k = 2; k <= n; ++k) inst.group_order *= k;
  inst.stabilizer_order = 3;
  inst.action_degree = inst.group_order / 3;
  inst.substrate_gens = gens;
  inst.substrate_degree = n;
  inst.h_gens = {x};
  inst.fixers = std::move(S);
  inst.clique_hint = n - 2;  // {(0 1 k)} less the identity row
  return inst;
}

// ---------------------------------------------------------------------------
// PSL(2,q) on cosets of an order-3 subgroup, q = 1 (mod 3).

inline Instance build_psl2_z3(uint32_t q) {
  Psl2Gens ctx = psl2_gens(q);
  if (q % 3 != 1)
    throw std::invalid_argument("psl2 z3 family needs q = 1 (mod 3), got q = " +
                                std::to_string(q));

  Order3Classes cls = order3_subgroup_classes(ctx);
  if (cls.reps.size() != 1)
    throw std::logic_error("psl2 z3: expected a single order-3 subgroup class");
  std::vector<Mat2> SM = fixer_matrices(ctx, cls.reps[0]);
  if (SM.size() != uint64_t(q) * (q + 1))
    throw std::logic_error("psl2 z3: fixer count differs from q(q+1)");

  Instance inst;
  inst.id = "psl2:" + std::to_string(q) + ":z3";
  inst.group_order = ctx.order;
  inst.stabilizer_order = 3;
  inst.action_degree = ctx.order / 3;
  inst.substrate_gens = ctx.perm_gens;
  inst.substrate_degree = q + 1;
  inst.h_gens = {mat_to_perm(ctx.F, cls.reps[0])};
  inst.fixers.reserve(SM.size());
  for (const Mat2& m : SM) inst.fixers.push_back(mat_to_perm(ctx.F, m));
  inst.fixer_graph = fixer_neighborhood_graph(ctx.F, SM);
  inst.clique_hint = (ctx.p == 5) ? 5 : 3;
  inst.notes = (ctx.e > 1) ? ("modulus " + ctx.F.modulus_string()) : "prime field";
  return inst;
}

// ---------------------------------------------------------------------------
// PSL(2,3^n) on cosets of an order-3 (unipotent) subgroup, n >= 3.

inline Instance build_psl2_char3(uint32_t n, int class_selector = 1) {
  if (n < 3)
    throw std::invalid_argument(
        "psl2 char3 family needs n >= 3 (q = 9 has its own literature and is excluded)");
  if (class_selector != 1 && class_selector != 2)
    throw std::invalid_argument("class selector must be 1 or 2");

  uint32_t q = 1;
  for (uint32_t i = 0; i < n; ++i) q *= 3;
  Psl2Gens ctx = psl2_gens(q);
  const Field& F = ctx.F;

  Order3Classes cls = order3_subgroup_classes(ctx);
  if (class_selector == 2 && cls.reps.size() < 2)
    throw std::invalid_argument("second unipotent class exists only for even n");
  Mat2 rep = cls.reps[size_t(class_selector - 1)];

  std::vector<Mat2> SM = fixer_matrices(ctx, rep);
  uint64_t all3 = uint64_t(q) * q - 1;
  uint64_t expected = (n % 2 == 0) ? all3 / 2 : all3;
  if (SM.size() != expected)
    throw std::logic_error("psl2 char3: fixer count differs from the class size");

  BitGraph fg = fixer_neighborhood_graph(F, SM);

  // Index of each upper unipotent M_c = [[1,c],[0,1]] inside S, when present.
  std::unordered_map<uint64_t, size_t> pack_to_index;
  for (size_t i = 0; i < SM.size(); ++i)
    pack_to_index.emplace(pack_matrix(SM[i]), i);
  std::vector<std::pair<Fe, size_t>> sylow;  // (c, vertex) pairs
  for (Fe c = 1; c < q; ++c) {
    Mat2 mc = canonicalize(F, Mat2{1, c, 0, 1});
    auto it = pack_to_index.find(pack_matrix(mc));
    if (it != pack_to_index.end()) sylow.emplace_back(c, it->second);
  }

  if (n % 2 == 1) {
    // The whole Sylow subgroup lies in the single class and forms a clique.
    if (sylow.size() != uint64_t(q) - 1)
      throw std::logic_error("psl2 char3: Sylow subgroup not inside the class");
    for (size_t i = 0; i < sylow.size(); ++i)
      for (size_t j = i + 1; j < sylow.size(); ++j)
        if (!fg.has_edge(sylow[i].second, sylow[j].second))
          throw std::logic_error("psl2 char3: Sylow fixer subgraph is not complete");
  } else {
    // Each class sees half of the Sylow subgroup; on the class's own field
    // subset the graph is the (half) Paley pattern: M_c ~ M_d iff d - c is a
    // square (class 1) or a non-square (class 2).
    if (sylow.size() != (uint64_t(q) - 1) / 2)
      throw std::logic_error("psl2 char3: class meets the Sylow subgroup in half");
    for (size_t i = 0; i < sylow.size(); ++i)
      for (size_t j = i + 1; j < sylow.size(); ++j) {
        Fe diff = F.sub(sylow[j].first, sylow[i].first);
        bool want = (class_selector == 1) ? F.is_square(diff) : !F.is_square(diff);
        if (fg.has_edge(sylow[i].second, sylow[j].second) != want)
          throw std::logic_error("psl2 char3: Sylow fixer subgraph is not the Paley pattern");
      }
  }

  Instance inst;
  inst.id = "psl2:" + std::to_string(q) + ":char3:c" + std::to_string(class_selector);
  inst.group_order = ctx.order;
  inst.stabilizer_order = 3;
  inst.action_degree = ctx.order / 3;
  inst.substrate_gens = ctx.perm_gens;
  inst.substrate_degree = q + 1;
  inst.h_gens = {mat_to_perm(F, rep)};
  inst.fixers.reserve(SM.size());
  for (const Mat2& m : SM) inst.fixers.push_back(mat_to_perm(F, m));
  inst.fixer_graph = std::move(fg);
  if (n % 2 == 1) {
    inst.clique_hint = q - 1;  // the Sylow subgroup minus the identity
  } else {
    uint32_t root = 1;
    for (uint32_t i = 0; i < n / 2; ++i) root *= 3;
    inst.clique_hint = root - 1;  // subfield slice of the Sylow subgroup
  }
  inst.notes = "modulus " + F.modulus_string() + ", class " + std::to_string(class_selector);
  return inst;
}

// ---------------------------------------------------------------------------
// AGL(1,q) on cosets of a translation subgroup of order p.

inline Instance build_agl1(uint32_t q) {
  FiniteGroup G = agl1_group(q);
  uint32_t p = 0, e = 0;
  if (!is_prime_power(q, p, e))
    throw std::logic_error("agl1: q accepted by agl1_group but not a prime power");

  Perm sigma = G.generators[0];
  std::vector<Perm> S = conjugacy_class(G.generators, sigma);
  if (S.size() != uint64_t(q) - 1)
    throw std::logic_error("agl1: translation class has unexpected size");
  std::sort(S.begin(), S.end());

  // Certificate for rho >= q/p: the full translation subgroup (all of S plus
  // the identity) is an intersecting set of size q.
  std::vector<Perm> translations{Perm::identity(q)};
  translations.insert(translations.end(), S.begin(), S.end());
  if (!is_intersecting(translations, S))
    throw std::logic_error("agl1: translation subgroup is not intersecting");

  Instance inst;
  inst.id = "agl1:" + std::to_string(q);
  inst.group_order = G.order();
  inst.stabilizer_order = p;
  inst.action_degree = G.order() / p;
  inst.substrate_gens = G.generators;
  inst.substrate_degree = q;
  inst.h_gens = {sigma};
  inst.fixers = std::move(S);
  inst.clique_hint = q - 1;  // the fixer graph is complete on q - 1 translations
  inst.notes = "modulus " + Field(p, e).modulus_string();
  inst.substrate_group = std::move(G);
  return inst;
}

// ---------------------------------------------------------------------------
// E x| Q with E = Z2^n, a: cyclic basis shift, b: e_i -> e_i e_n, acting on
// the cosets of <e_1>.

inline Instance build_e_rtimes_q(uint32_t n) {
  if (n < 3)
    throw std::invalid_argument("erq family needs n >= 3");
  if (n > 12)
    throw std::invalid_argument("erq: substrate degree 2^n is too large past n = 12");

  const size_t npts = size_t{1} << n;
  std::vector<Point> t1(npts), ra(npts), rb(npts);
  const size_t top = size_t{1} << (n - 1);      // the e_n bit
  const size_t low_mask = top - 1;              // bits of e_1 .. e_{n-1}
  for (size_t v = 0; v < npts; ++v) {
    t1[v] = Point(v ^ 1);
    // a: bit i -> bit i+1 (mod n)
    size_t rot = ((v << 1) | (v >> (n - 1))) & (npts - 1);
    ra[v] = Point(rot);
    // b: adds e_n when the e_1..e_{n-1} weight is odd
    size_t parity = std::popcount(v & low_mask) & 1;
    rb[v] = Point(v ^ (parity ? top : 0));
  }
  std::vector<Perm> gens{Perm(std::move(t1)), Perm(std::move(ra)), Perm(std::move(rb))};

  FiniteGroup G = enumerate_group(gens);
  if (G.order() % npts != 0)
    throw std::logic_error("erq: 2^n does not divide the group order");

  Perm e1 = G.generators[0];
  std::vector<Perm> S = conjugacy_class(G.generators, e1);
  if (S.size() != uint64_t(n) + uint64_t(n) * (n - 1) / 2)
    throw std::logic_error("erq: class of e_1 is not {e_i, e_i e_j}");
  std::sort(S.begin(), S.end());

  std::vector<uint32_t> H{0, G.position_of(e1)};
  std::sort(H.begin(), H.end());
  G.designated_subgroup = H;

  Instance inst;
  inst.id = "erq:" + std::to_string(n);
  inst.group_order = G.order();
  inst.stabilizer_order = 2;
  inst.action_degree = G.order() / 2;
  inst.substrate_gens = G.generators;
  inst.substrate_degree = npts;
  inst.h_gens = {e1};
  inst.fixers = std::move(S);
  inst.clique_hint = n;  // {e_1, ..., e_n} is a clique in the fixer graph
  inst.notes = "|Q| = " + std::to_string(G.order() / npts);
  inst.substrate_group = std::move(G);
  return inst;
}

}  // namespace ekr
