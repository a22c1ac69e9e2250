#pragma once

// Finite permutation groups by full enumeration, plus the handful of
// structural operations the density computations need: stabilizers, coset
// actions, conjugacy classes, block systems, quotients, semiregularity and
// a stabilizer-chain order count for groups we never enumerate.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ekr/perm.hpp"

namespace ekr {

constexpr uint64_t kDefaultGroupCap = uint64_t(1) << 22;

struct FiniteGroup {
  size_t degree = 0;
  std::vector<Perm> generators;
  std::vector<Perm> elements;  // elements[0] is the identity
  std::unordered_map<Perm, uint32_t, PermHash> index;
  // Positions (into elements) of the subgroup H whose coset action is
  // studied, when one is designated.
  std::optional<std::vector<uint32_t>> designated_subgroup;

  uint64_t order() const { return elements.size(); }

  uint32_t position_of(const Perm& p) const {
    auto it = index.find(p);
    if (it == index.end())
      throw std::invalid_argument("element not in group");
    return it->second;
  }

  bool contains(const Perm& p) const { return index.count(p) != 0; }

  bool is_transitive() const {
    std::vector<bool> seen(degree, false);
    std::vector<Point> stack{0};
    seen[0] = true;
    size_t found = 1;
    while (!stack.empty()) {
      Point v = stack.back();
      stack.pop_back();
      for (const Perm& g : generators) {
        Point w = g(v);
        if (!seen[w]) {
          seen[w] = true;
          ++found;
          stack.push_back(w);
        }
      }
    }
    return found == degree;
  }
};

// Breadth-first closure under right-multiplication by the generators.
// Element order is deterministic: layer by layer, each layer sorted by
// lexicographic image array before being appended.
inline FiniteGroup enumerate_group(const std::vector<Perm>& generators,
                                   uint64_t cap = kDefaultGroupCap) {
  if (generators.empty())
    throw std::invalid_argument("enumerate_group: empty generator list");
  size_t degree = generators[0].degree();
  for (const Perm& g : generators)
    if (g.degree() != degree)
      throw std::invalid_argument("enumerate_group: mixed degrees");
  if (cap < 1) throw std::invalid_argument("enumerate_group: cap must be >= 1");

  FiniteGroup G;
  G.degree = degree;
  G.generators = generators;
  G.elements.push_back(Perm::identity(degree));
  G.index.emplace(G.elements[0], 0);

  size_t layer_begin = 0;
  while (layer_begin < G.elements.size()) {
    size_t layer_end = G.elements.size();
    std::vector<Perm> next;
    for (size_t i = layer_begin; i < layer_end; ++i) {
      for (const Perm& g : generators) {
        Perm prod = compose(G.elements[i], g);
        if (!G.index.count(prod)) {
          // Reserve the slot now so duplicates within the layer are cheap;
          // the actual position is fixed after sorting below.
          G.index.emplace(prod, 0);
          next.push_back(std::move(prod));
        }
      }
    }
    std::sort(next.begin(), next.end());
    for (Perm& p : next) {
      if (G.elements.size() >= cap)
        throw std::runtime_error(
            "group too large: enumeration exceeded cap of " +
            std::to_string(cap) + " elements");
      G.index[p] = uint32_t(G.elements.size());
      G.elements.push_back(std::move(p));
    }
    layer_begin = layer_end;
  }
  return G;
}

inline std::vector<uint32_t> stabilizer(const FiniteGroup& G, Point v) {
  if (v >= G.degree) throw std::invalid_argument("stabilizer: point out of range");
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < G.elements.size(); ++i)
    if (G.elements[i](v) == v) out.push_back(i);
  return out;
}

// Verifies that the given positions form a subgroup (closed under product;
// finiteness then gives inverses).
inline bool is_subgroup(const FiniteGroup& G, const std::vector<uint32_t>& H) {
  std::unordered_set<uint32_t> set(H.begin(), H.end());
  bool has_id = false;
  for (uint32_t i : H) {
    if (i >= G.elements.size()) return false;
    if (i == 0) has_id = true;
    for (uint32_t j : H) {
      Perm prod = compose(G.elements[i], G.elements[j]);
      if (!set.count(G.position_of(prod))) return false;
    }
  }
  return has_id;
}

struct CosetAction {
  FiniteGroup image;              // the induced group on left cosets
  std::vector<uint32_t> kernel;   // positions in the *original* group
  std::vector<uint32_t> coset_of; // coset index per original element
  std::vector<uint32_t> coset_rep;// one representative position per coset
  bool faithful() const { return kernel.size() == 1; }

  // The homomorphism itself: the permutation of cosets induced by g.
  Perm act(const FiniteGroup& G, const Perm& g) const {
    std::vector<Point> img(coset_rep.size());
    for (size_t c = 0; c < coset_rep.size(); ++c) {
      Perm moved = compose(g, G.elements[coset_rep[c]]);
      img[c] = Point(coset_of[G.position_of(moved)]);
    }
    return Perm(std::move(img));
  }
};

// Action of G on the left cosets gH by left translation.  The coset H
// itself is point 0; the remaining cosets are numbered in order of first
// appearance while scanning elements[i]*H for i = 0, 1, 2, ...
inline CosetAction coset_action(const FiniteGroup& G,
                                const std::vector<uint32_t>& H) {
  if (!is_subgroup(G, H))
    throw std::invalid_argument("coset_action: H is not closed");

  std::vector<uint32_t> coset_of(G.elements.size(), UINT32_MAX);
  std::vector<uint32_t> coset_rep;  // position of a representative
  for (uint32_t i = 0; i < G.elements.size(); ++i) {
    if (coset_of[i] != UINT32_MAX) continue;
    uint32_t c = uint32_t(coset_rep.size());
    coset_rep.push_back(i);
    for (uint32_t h : H) {
      Perm prod = compose(G.elements[i], G.elements[h]);
      coset_of[G.position_of(prod)] = c;
    }
    if (coset_of[i] != c)
      throw std::logic_error("coset_action: representative left its own coset");
  }

  size_t n_cosets = coset_rep.size();
  if (n_cosets > 65535)
    throw std::runtime_error("coset_action: index exceeds 65535 point limit");

  auto act = [&](const Perm& g) {
    std::vector<Point> img(n_cosets);
    for (size_t c = 0; c < n_cosets; ++c) {
      Perm moved = compose(g, G.elements[coset_rep[c]]);
      img[c] = Point(coset_of[G.position_of(moved)]);
    }
    return Perm(std::move(img));
  };

  std::vector<Perm> gen_images;
  gen_images.reserve(G.generators.size());
  for (const Perm& g : G.generators) gen_images.push_back(act(g));

  CosetAction result;
  result.image = enumerate_group(gen_images, kDefaultGroupCap);
  result.coset_of = std::move(coset_of);
  result.coset_rep = std::move(coset_rep);
  for (uint32_t i = 0; i < G.elements.size(); ++i)
    if (result.act(G, G.elements[i]).is_identity()) result.kernel.push_back(i);

  // Designated subgroup of the image: the stabilizer of the coset H.
  result.image.designated_subgroup = stabilizer(result.image, 0);
  return result;
}

// Orbit of g under conjugation by the generators.  Needs no element list;
// a membership hash is grown on the fly and the output comes in BFS order.
inline std::vector<Perm> conjugacy_class(const std::vector<Perm>& generators,
                                         const Perm& g) {
  std::vector<Perm> orbit{g};
  std::unordered_set<Perm, PermHash> seen{g};
  for (size_t i = 0; i < orbit.size(); ++i) {
    for (const Perm& s : generators) {
      Perm conj = conjugate(orbit[i], s);
      if (seen.insert(conj).second) orbit.push_back(std::move(conj));
    }
  }
  return orbit;
}

inline std::vector<Perm> conjugacy_class(const FiniteGroup& G, const Perm& g) {
  if (!G.contains(g))
    throw std::invalid_argument("conjugacy_class: element not in group");
  return conjugacy_class(G.generators, g);
}

struct BlockSystem {
  std::vector<std::vector<Point>> partition;
  size_t block_size = 0;

  size_t block_count() const { return partition.size(); }

  // block index for each point
  std::vector<uint32_t> block_of;
};

inline BlockSystem make_block_system(std::vector<std::vector<Point>> parts,
                                     size_t degree) {
  BlockSystem B;
  B.partition = std::move(parts);
  B.block_of.assign(degree, UINT32_MAX);
  if (B.partition.empty())
    throw std::invalid_argument("block system: empty partition");
  B.block_size = B.partition[0].size();
  for (size_t b = 0; b < B.partition.size(); ++b) {
    if (B.partition[b].size() != B.block_size)
      throw std::invalid_argument("block system: unequal block sizes");
    for (Point v : B.partition[b]) {
      if (v >= degree || B.block_of[v] != UINT32_MAX)
        throw std::invalid_argument("block system: not a partition");
      B.block_of[v] = uint32_t(b);
    }
  }
  for (uint32_t b : B.block_of)
    if (b == UINT32_MAX)
      throw std::invalid_argument("block system: does not cover all points");
  return B;
}

inline bool is_invariant_partition(const FiniteGroup& G, const BlockSystem& B) {
  for (const Perm& g : G.generators) {
    for (const auto& block : B.partition) {
      uint32_t target = B.block_of[g(block[0])];
      for (Point v : block)
        if (B.block_of[g(v)] != target) return false;
    }
  }
  return true;
}

// Finest G-invariant partition with u and v in one block (Atkinson's
// union-find algorithm).
inline BlockSystem minimal_block_system(const FiniteGroup& G, Point u, Point v) {
  if (!G.is_transitive())
    throw std::invalid_argument("minimal_block_system: group not transitive");
  if (u == v || u >= G.degree || v >= G.degree)
    throw std::invalid_argument("minimal_block_system: need two distinct points");

  std::vector<uint32_t> parent(G.degree);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::vector<std::pair<Point, Point>> agenda{{u, v}};
  while (!agenda.empty()) {
    auto [a, b] = agenda.back();
    agenda.pop_back();
    uint32_t ra = find(a), rb = find(b);
    if (ra == rb) continue;
    parent[ra] = rb;
    for (const Perm& g : G.generators) agenda.emplace_back(g(a), g(b));
  }

  std::unordered_map<uint32_t, std::vector<Point>> classes;
  for (Point x = 0; size_t(x) < G.degree; ++x)
    classes[find(x)].push_back(x);
  // Emit blocks ordered by their smallest point.
  std::vector<std::vector<Point>> parts;
  for (Point x = 0; size_t(x) < G.degree; ++x) {
    auto it = classes.find(find(x));
    if (it != classes.end()) {
      parts.push_back(std::move(it->second));
      classes.erase(it);
    }
  }
  return make_block_system(std::move(parts), G.degree);
}

struct QuotientAction {
  FiniteGroup image;
  uint64_t kernel_size = 0;
};

inline QuotientAction quotient_action(const FiniteGroup& G,
                                      const BlockSystem& B) {
  if (!is_invariant_partition(G, B))
    throw std::invalid_argument("quotient_action: partition is not G-invariant");
  size_t n = B.block_count();
  auto act = [&](const Perm& g) {
    std::vector<Point> img(n);
    for (size_t b = 0; b < n; ++b)
      img[b] = Point(B.block_of[g(B.partition[b][0])]);
    return Perm(std::move(img));
  };
  std::vector<Perm> gen_images;
  for (const Perm& g : G.generators) gen_images.push_back(act(g));
  QuotientAction out;
  out.image = enumerate_group(gen_images);
  uint64_t kernel = 0;
  for (const Perm& g : G.elements)
    if (act(g).is_identity()) ++kernel;
  out.kernel_size = kernel;
  return out;
}

struct SemiregularResult {
  bool semiregular = false;
  uint64_t orbit_count = 0;  // actual K-orbit count on the points
};

inline SemiregularResult is_semiregular(const FiniteGroup& G,
                                        const std::vector<uint32_t>& K) {
  SemiregularResult r;
  r.semiregular = true;
  for (uint32_t i : K) {
    const Perm& k = G.elements.at(i);
    if (i == 0) continue;
    for (size_t v = 0; v < G.degree; ++v)
      if (k(Point(v)) == v) {
        r.semiregular = false;
        break;
      }
    if (!r.semiregular) break;
  }
  // Orbit count regardless, it is cheap and useful in reports.
  std::vector<bool> seen(G.degree, false);
  for (size_t v = 0; v < G.degree; ++v) {
    if (seen[v]) continue;
    ++r.orbit_count;
    std::vector<Point> stack{Point(v)};
    seen[v] = true;
    while (!stack.empty()) {
      Point x = stack.back();
      stack.pop_back();
      for (uint32_t i : K) {
        Point y = G.elements[i](x);
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
  }
  return r;
}

struct SubgroupShape {
  uint64_t order = 0;
  uint64_t exponent = 0;
  bool abelian = false;

  friend bool operator==(const SubgroupShape&, const SubgroupShape&) = default;
};

inline SubgroupShape subgroup_shape(const FiniteGroup& G,
                                    const std::vector<uint32_t>& K) {
  if (!is_subgroup(G, K))
    throw std::invalid_argument("subgroup_shape: positions not closed");
  SubgroupShape s;
  s.order = K.size();
  s.exponent = 1;
  for (uint32_t i : K) s.exponent = std::lcm(s.exponent, element_order(G.elements[i]));
  s.abelian = true;
  for (size_t a = 0; a < K.size() && s.abelian; ++a)
    for (size_t b = a + 1; b < K.size(); ++b) {
      const Perm& x = G.elements[K[a]];
      const Perm& y = G.elements[K[b]];
      if (compose(x, y) != compose(y, x)) {
        s.abelian = false;
        break;
      }
    }
  return s;
}

// Shape of the subgroup generated by a set of permutations, enumerated
// directly (used where no ambient FiniteGroup exists).
inline SubgroupShape subgroup_shape(const std::vector<Perm>& gens,
                                    uint64_t cap = kDefaultGroupCap) {
  FiniteGroup K = enumerate_group(gens, cap);
  std::vector<uint32_t> all(K.elements.size());
  std::iota(all.begin(), all.end(), 0);
  return subgroup_shape(K, all);
}

// ---------------------------------------------------------------------------
// Stabilizer-chain order count (deterministic Schreier-Sims).  Used to
// report |G| for groups whose element list is never materialized; must
// agree with enumerate_group(...).order() whenever both run.

class StabilizerChain {
public:
  explicit StabilizerChain(const std::vector<Perm>& generators) {
    if (generators.empty())
      throw std::invalid_argument("stabilizer chain: empty generator list");
    degree_ = generators[0].degree();
    for (const Perm& g : generators)
      if (!g.is_identity()) store(g, 0);
    close();
  }

  uint64_t order() const {
    uint64_t n = 1;
    for (const Level& lv : levels_) n *= lv.orbit.size();
    return n;
  }

  bool contains(const Perm& g) const {
    Perm h = g;
    for (const Level& lv : levels_) {
      Point p = h(lv.base);
      auto it = lv.transversal.find(p);
      if (it == lv.transversal.end()) return false;
      h = compose(it->second.inverse(), h);
    }
    return h.is_identity();
  }

private:
  struct Level {
    Point base = 0;
    // Generators stored at this level fix the bases of every level above;
    // the effective generating set of level k is the union of stored sets
    // over levels k, k+1, ...
    std::vector<Perm> stored;
    std::vector<Point> orbit;
    std::unordered_map<Point, Perm> transversal;  // t[p](base) = p
  };

  size_t degree_ = 0;
  std::vector<Level> levels_;

  // Places h (known to fix the bases of levels 0..lv-1) at level lv,
  // opening the level if it does not exist yet.
  void store(const Perm& h, size_t lv) {
    if (lv == levels_.size()) {
      Level fresh;
      Point moved = 0;
      while (h(moved) == moved) ++moved;
      fresh.base = moved;
      fresh.orbit.push_back(moved);
      fresh.transversal.emplace(moved, Perm::identity(degree_));
      levels_.push_back(std::move(fresh));
    }
    levels_[lv].stored.push_back(h);
  }

  // Sift h through levels from..end; on escape, store the residue and
  // report a change.  Returns false when h sifts to the identity.
  bool sift_in(Perm h, size_t from) {
    size_t lv = from;
    for (; lv < levels_.size(); ++lv) {
      if (h.is_identity()) return false;
      Point p = h(levels_[lv].base);
      auto it = levels_[lv].transversal.find(p);
      if (it == levels_[lv].transversal.end()) break;
      h = compose(it->second.inverse(), h);
    }
    if (h.is_identity()) return false;
    store(h, lv);
    return true;
  }

  // Fixpoint: rebuild each level's orbit under its effective generators
  // and sift every Schreier generator; repeat until a full sweep stores
  // nothing new.  Each storing sweep grows an orbit or opens a level, so
  // the loop terminates.
  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t k = levels_.size(); k-- > 0;) {
        Level& L = levels_[k];
        std::vector<const Perm*> eff;
        for (size_t j = k; j < levels_.size(); ++j)
          for (const Perm& s : levels_[j].stored) eff.push_back(&s);

        for (size_t i = 0; i < L.orbit.size(); ++i) {
          for (const Perm* s : eff) {
            Point from = L.orbit[i];
            Point to = (*s)(from);
            if (!L.transversal.count(to)) {
              L.orbit.push_back(to);
              L.transversal.emplace(to, compose(*s, L.transversal.at(from)));
            }
          }
        }
        for (size_t pi = 0; pi < L.orbit.size() && !changed; ++pi) {
          Point p = L.orbit[pi];
          const Perm& tp = L.transversal.at(p);
          for (const Perm* s : eff) {
            const Perm& tq = L.transversal.at((*s)(p));
            Perm schreier = compose(tq.inverse(), compose(*s, tp));
            if (sift_in(std::move(schreier), k + 1)) {
              // a store may reallocate a stored vector `eff` points into,
              // so abandon this sweep right away and start over
              changed = true;
              break;
            }
          }
        }
        if (changed) break;
      }
    }
  }
};

inline uint64_t group_order_by_stabilizer_chain(const std::vector<Perm>& gens) {
  return StabilizerChain(gens).order();
}

}  // namespace ekr
