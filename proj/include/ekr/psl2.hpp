#pragma once

// PSL(2,q) and AGL(1,q) made concrete.  PSL elements are 2x2 unit-
// determinant matrices over GF(q) in a canonical sign form, acting on the
// q+1 projective points; the permutation feeds the group layer while the
// matrix feeds the trace tests.  Both are carried side by side and their
// consistency is asserted whenever a group is enumerated.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ekr/field.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"

namespace ekr {

struct Mat2 {
  Fe a = 0, b = 0, c = 0, d = 0;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline bool is_prime_power(uint32_t q, uint32_t& p, uint32_t& e) {
  if (q < 2) return false;
  uint32_t base = q;
  for (uint32_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      base = d;
      break;
    }
  p = base;
  e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  return q == 1;
}

inline Mat2 mat_mul(const Field& F, const Mat2& X, const Mat2& Y) {
  return {F.add(F.mul(X.a, Y.a), F.mul(X.b, Y.c)),
          F.add(F.mul(X.a, Y.b), F.mul(X.b, Y.d)),
          F.add(F.mul(X.c, Y.a), F.mul(X.d, Y.c)),
          F.add(F.mul(X.c, Y.b), F.mul(X.d, Y.d))};
}

inline Fe mat_det(const Field& F, const Mat2& M) {
  return F.sub(F.mul(M.a, M.d), F.mul(M.b, M.c));
}

inline Fe mat_trace(const Field& F, const Mat2& M) { return F.add(M.a, M.d); }

inline Mat2 mat_neg(const Field& F, const Mat2& M) {
  return {F.neg(M.a), F.neg(M.b), F.neg(M.c), F.neg(M.d)};
}

inline Mat2 mat_inv(const Field& F, const Mat2& M) {
  Fe det = mat_det(F, M);
  if (det == 0) throw std::invalid_argument("matrix is singular");
  Fe di = F.inv(det);
  return {F.mul(di, M.d), F.mul(di, F.neg(M.b)), F.mul(di, F.neg(M.c)),
          F.mul(di, M.a)};
}

// Canonical representative of {M, -M}: the first nonzero entry in scan
// order (a, b, c, d) becomes the smaller of {t, -t} in field enumeration
// order.  In characteristic 2 the two coincide.
inline Mat2 canonicalize(const Field& F, const Mat2& M) {
  if (F.p() == 2) return M;
  Fe entries[4] = {M.a, M.b, M.c, M.d};
  for (Fe t : entries) {
    if (t == 0) continue;
    return F.neg(t) < t ? mat_neg(F, M) : M;
  }
  throw std::invalid_argument("zero matrix cannot be canonicalized");
}

// 4 x 12-bit packing; valid because the field cap keeps q <= 4096.
inline uint64_t pack_matrix(const Mat2& M) {
  return uint64_t(M.a) | (uint64_t(M.b) << 12) | (uint64_t(M.c) << 24) |
         (uint64_t(M.d) << 36);
}

inline Mat2 mat_identity() { return {1, 0, 0, 1}; }

inline bool is_proj_identity(const Field& F, const Mat2& M) {
  return canonicalize(F, M) == canonicalize(F, mat_identity());
}

// Order of M as an element of PSL: least k >= 1 with M^k = +-I.
inline uint32_t proj_order(const Field& F, const Mat2& M) {
  Mat2 acc = M;
  for (uint32_t k = 1; k <= 4 * (F.q() + 1); ++k) {
    if (is_proj_identity(F, acc)) return k;
    acc = mat_mul(F, acc, M);
  }
  throw std::logic_error("projective order exceeded its bound");
}

// Projective points: index y in [0,q) is (1 : y), index q is (0 : 1).
inline Point proj_apply(const Field& F, const Mat2& M, Point pt) {
  Fe x, y;
  if (pt == Point(F.q())) {
    x = 0;
    y = 1;
  } else {
    x = 1;
    y = Fe(pt);
  }
  Fe nx = F.add(F.mul(M.a, x), F.mul(M.b, y));
  Fe ny = F.add(F.mul(M.c, x), F.mul(M.d, y));
  if (nx == 0) {
    if (ny == 0) throw std::logic_error("singular action on projective point");
    return Point(F.q());
  }
  return Point(F.div(ny, nx));
}

inline Perm mat_to_perm(const Field& F, const Mat2& M) {
  std::vector<Point> img(F.q() + 1);
  for (Point pt = 0; pt <= Point(F.q()); ++pt) img[pt] = proj_apply(F, M, pt);
  return Perm(std::move(img));
}

inline uint64_t psl2_order_formula(uint32_t q) {
  uint64_t n = uint64_t(q) * (uint64_t(q) * q - 1);
  return q % 2 == 1 ? n / 2 : n;
}

// Generators of SL(2,q) projected to PSL: the rotation S = [[0,-1],[1,0]]
// and the transvections T_x = [[1,x],[0,1]] over a polynomial basis of the
// field's additive group.
struct Psl2Gens {
  Field F;
  uint32_t q, p, e;
  std::vector<Mat2> mat_gens;   // canonical
  std::vector<Perm> perm_gens;  // action on q+1 points, aligned
  uint64_t order;               // stabilizer-chain count == the formula
};

inline Psl2Gens psl2_gens(uint32_t q) {
  uint32_t p, e;
  if (!is_prime_power(q, p, e))
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is not a prime power");
  Psl2Gens ctx{Field(p, e), q, p, e, {}, {}, 0};
  const Field& F = ctx.F;

  Mat2 S{0, F.neg(1), 1, 0};
  ctx.mat_gens.push_back(canonicalize(F, S));
  Fe basis = 1;
  for (uint32_t i = 0; i < e; ++i) {
    Mat2 T{1, basis, 0, 1};
    ctx.mat_gens.push_back(canonicalize(F, T));
    basis *= p;  // next monomial x^i as an element index
  }
  for (const Mat2& M : ctx.mat_gens) ctx.perm_gens.push_back(mat_to_perm(F, M));

  ctx.order = group_order_by_stabilizer_chain(ctx.perm_gens);
  if (ctx.order != psl2_order_formula(q))
    throw std::logic_error("generated group order disagrees with q(q^2-1)/gcd(2,q-1)");
  return ctx;
}

// Fully enumerated PSL(2,q) with a canonical matrix tag per element.
struct Psl2Group {
  Psl2Gens ctx;
  FiniteGroup G;
  std::vector<Mat2> matrix;  // aligned with G.elements
  std::unordered_map<uint64_t, uint32_t> by_matrix;

  const Mat2& matrix_of(uint32_t pos) const { return matrix[pos]; }
  uint32_t position_of_matrix(const Mat2& M) const {
    auto it = by_matrix.find(pack_matrix(canonicalize(ctx.F, M)));
    if (it == by_matrix.end())
      throw std::invalid_argument("matrix is not an element of the group");
    return it->second;
  }
};

inline Psl2Group psl2_group(uint32_t q) {
  Psl2Group P{psl2_gens(q), {}, {}, {}};
  const Field& F = P.ctx.F;
  P.G = enumerate_group(P.ctx.perm_gens);
  if (P.G.order() != P.ctx.order)
    throw std::logic_error("enumeration and stabilizer chain disagree on |G|");

  // Walk the element list re-deriving each matrix tag along generator
  // edges; any BFS path must land on the same canonical matrix, and the
  // matrix's own projective action must reproduce the permutation.
  P.matrix.assign(P.G.elements.size(), Mat2{});
  std::vector<bool> tagged(P.G.elements.size(), false);
  P.matrix[0] = canonicalize(F, mat_identity());
  tagged[0] = true;
  for (uint32_t i = 0; i < P.G.elements.size(); ++i) {
    if (!tagged[i]) throw std::logic_error("element reached before its matrix tag");
    for (size_t j = 0; j < P.ctx.perm_gens.size(); ++j) {
      uint32_t pos = P.G.position_of(compose(P.G.elements[i], P.ctx.perm_gens[j]));
      Mat2 prod = canonicalize(F, mat_mul(F, P.matrix[i], P.ctx.mat_gens[j]));
      if (!tagged[pos]) {
        P.matrix[pos] = prod;
        tagged[pos] = true;
      } else if (!(P.matrix[pos] == prod)) {
        throw std::logic_error("matrix tags disagree along different paths");
      }
    }
    if (!(mat_to_perm(F, P.matrix[i]) == P.G.elements[i]))
      throw std::logic_error("matrix action disagrees with tagged permutation");
  }
  for (uint32_t i = 0; i < P.G.elements.size(); ++i)
    P.by_matrix.emplace(pack_matrix(P.matrix[i]), i);
  if (P.by_matrix.size() != P.G.elements.size())
    throw std::logic_error("canonical matrices are not distinct");
  return P;
}

// Trace criterion for order 3: a non-identity projective matrix cubes to
// +-I exactly when its trace is 1 or -1 (equivalently -trace is, so the
// test is insensitive to the sign representative).
inline bool order3_test_by_trace(const Field& F, const Mat2& M) {
  if (is_proj_identity(F, M))
    throw std::invalid_argument("trace test excludes the identity");
  Fe t = mat_trace(F, M);
  return t == 1 || t == F.neg(1);
}

// First r != 1 with r^3 = 1 in enumeration order.
inline Fe cube_root_of_unity(const Field& F) {
  for (Fe r = 0; r < F.q(); ++r) {
    if (r == 1 || r == 0) continue;
    if (F.mul(F.mul(r, r), r) == 1) return r;
  }
  throw std::invalid_argument(
      "no cube root of unity r != 1 exists: q = " + std::to_string(F.q()) +
      " is not 1 (mod 3)");
}

// Conjugation orbit in matrix form: closure of {x} under conjugation by
// the group generators, entirely at the canonical-matrix level.
inline std::vector<Mat2> matrix_class(const Psl2Gens& ctx, const Mat2& x) {
  const Field& F = ctx.F;
  std::vector<Mat2> orbit{canonicalize(F, x)};
  std::unordered_set<uint64_t> seen{pack_matrix(orbit[0])};
  std::vector<Mat2> inv_gens;
  for (const Mat2& g : ctx.mat_gens) inv_gens.push_back(mat_inv(F, g));
  for (size_t i = 0; i < orbit.size(); ++i) {
    for (size_t j = 0; j < ctx.mat_gens.size(); ++j) {
      Mat2 conj = canonicalize(
          F, mat_mul(F, inv_gens[j], mat_mul(F, orbit[i], ctx.mat_gens[j])));
      if (seen.insert(pack_matrix(conj)).second) orbit.push_back(conj);
    }
  }
  return orbit;
}

// S = class(x) u class(x^-1): the non-identity elements with a fixed point
// in the coset action on G/<x>, i.e. the union of the conjugates of <x>
// minus the identity.  Matrix-level, so it works without enumerating G.
inline std::vector<Mat2> fixer_matrices(const Psl2Gens& ctx, const Mat2& x) {
  const Field& F = ctx.F;
  if (proj_order(F, x) != 3)
    throw std::invalid_argument("fixer set requires a subgroup of order 3");
  std::vector<Mat2> S = matrix_class(ctx, x);
  std::unordered_set<uint64_t> seen;
  for (const Mat2& m : S) seen.insert(pack_matrix(m));
  for (const Mat2& m : matrix_class(ctx, mat_inv(F, x)))
    if (seen.insert(pack_matrix(m)).second) S.push_back(m);
  std::sort(S.begin(), S.end(), [](const Mat2& u, const Mat2& v) {
    return pack_matrix(u) < pack_matrix(v);
  });
  return S;
}

// Permutation-level fixer set for an enumerated group.
inline std::vector<Perm> fixer_set(const FiniteGroup& G, const Perm& x) {
  if (element_order(x) != 3)
    throw std::invalid_argument("fixer set requires a subgroup of order 3");
  if (!G.contains(x)) throw std::invalid_argument("generator not in group");
  std::vector<Perm> S = conjugacy_class(G.generators, x);
  std::unordered_set<Perm, PermHash> seen(S.begin(), S.end());
  for (const Perm& m : conjugacy_class(G.generators, x.inverse()))
    if (seen.insert(m).second) S.push_back(m);
  std::sort(S.begin(), S.end());
  return S;
}

struct Order3Classes {
  std::vector<Mat2> reps;           // one generator per subgroup class
  uint64_t order3_element_count;    // elements of order 3 in G, for reports
};

// Conjugacy classes of order-3 subgroups, with deterministic
// representatives: diag(r, r^2) when q = 1 (mod 3); the transvections M_1
// (and M_t, t the first non-square, when the count of classes is two) in
// characteristic 3.  Class structure is verified by explicit conjugation
// orbits: representatives' classes must be disjoint and cover every
// order-3 element.
inline Order3Classes order3_subgroup_classes(const Psl2Gens& ctx) {
  const Field& F = ctx.F;
  uint32_t q = ctx.q;
  if (ctx.order % 3 != 0)
    throw std::invalid_argument("3 does not divide the group order");

  std::vector<Mat2> reps;
  uint64_t expected;
  if (ctx.p == 3) {
    reps.push_back(canonicalize(F, Mat2{1, 1, 0, 1}));
    if (ctx.e % 2 == 0) {
      Fe t = 1;
      while (t < q && F.is_square(t)) ++t;
      if (t >= q) throw std::logic_error("no non-square found in odd field");
      reps.push_back(canonicalize(F, Mat2{1, t, 0, 1}));
    }
    expected = uint64_t(q) * q - 1;  // every nonidentity unipotent
  } else if (q % 3 == 1) {
    Fe r = cube_root_of_unity(F);
    reps.push_back(canonicalize(F, Mat2{r, 0, 0, F.mul(r, r)}));
    expected = uint64_t(q) * (q + 1);
  } else {
    // 3 divides q+1: no closed-form representative; take the first
    // order-3 element of the enumerated group and read off its tag.
    Psl2Group full = psl2_group(q);
    uint32_t found = UINT32_MAX;
    for (uint32_t i = 0; i < full.G.elements.size(); ++i)
      if (element_order(full.G.elements[i]) == 3) {
        found = i;
        break;
      }
    if (found == UINT32_MAX)
      throw std::logic_error("no order-3 element despite 3 | |G|");
    reps.push_back(full.matrix[found]);
    expected = uint64_t(q) * (q - 1);
  }

  for (const Mat2& rep : reps)
    if (proj_order(F, rep) != 3)
      throw std::logic_error("class representative does not have order 3");

  std::vector<std::unordered_set<uint64_t>> classes;
  uint64_t covered = 0;
  for (const Mat2& rep : reps) {
    std::unordered_set<uint64_t> cls;
    for (const Mat2& m : fixer_matrices(ctx, rep)) cls.insert(pack_matrix(m));
    covered += cls.size();
    classes.push_back(std::move(cls));
  }
  for (size_t i = 0; i < classes.size(); ++i)
    for (size_t j = i + 1; j < classes.size(); ++j)
      for (uint64_t m : classes[i])
        if (classes[j].count(m))
          throw std::logic_error("subgroup class representatives are conjugate");
  if (covered != expected)
    throw std::logic_error("order-3 classes do not cover all order-3 elements");

  return {std::move(reps), expected};
}

// ---------------------------------------------------------------------------
// The matrices of the density argument for the coset action on order-3
// subgroups, q = 1 (mod 3): the reference vertex A_0 = diag(r, r^2) and
// the families A_x, A_x-transpose, B_x partitioning its neighborhood.

inline Mat2 a0_matrix(const Field& F) {
  Fe r = cube_root_of_unity(F);
  return {r, 0, 0, F.mul(r, r)};
}

inline Mat2 a_matrix(const Field& F, Fe x) {
  if (x == 0) throw std::invalid_argument("family is indexed by nonzero x");
  Fe r = cube_root_of_unity(F);
  return {F.neg(F.mul(r, r)), x, 0, F.neg(r)};
}

inline Mat2 at_matrix(const Field& F, Fe x) {
  Mat2 A = a_matrix(F, x);
  return {A.a, A.c, A.b, A.d};
}

inline Mat2 b_matrix(const Field& F, Fe x) {
  if (x == 0) throw std::invalid_argument("family is indexed by nonzero x");
  if (F.p() == 2 || F.p() == 3)
    throw std::invalid_argument("B family needs odd characteristic prime to 3");
  Fe r = cube_root_of_unity(F);
  Fe rm1 = F.sub(r, 1);
  Fe three = F.from_int(3);
  return {F.div(r, rm1), F.neg(F.mul(F.from_int(2), x)),
          F.inv(F.mul(three, x)), F.neg(F.inv(rm1))};
}

struct TraceTableReport {
  uint32_t q = 0;
  uint64_t pairs_checked = 0;
  uint64_t entries_checked = 0;
  uint64_t failures = 0;
  bool full_sweep = false;
  bool b_entries_included = false;
};

// Checks the nine product-trace identities behind the neighborhood
// classification: rows A_x^-1, (A_x^T)^-1, B_x^-1 against columns A_y,
// A_y^T, B_y.  Full sweep over F_q* x F_q* when q <= 64, otherwise 10^4
// deterministic random samples.  Even q has no B family.
inline TraceTableReport verify_trace_table(uint32_t q, uint64_t samples = 10000) {
  uint32_t p, e;
  if (!is_prime_power(q, p, e))
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is not a prime power");
  Field F(p, e);
  cube_root_of_unity(F);  // throws unless q = 1 (mod 3)

  TraceTableReport rep;
  rep.q = q;
  rep.full_sweep = q <= 64;
  rep.b_entries_included = q % 2 == 1;

  Fe two = F.from_int(2);
  Fe three = F.from_int(3);
  auto tr = [&](const Mat2& X, const Mat2& Y) {
    return mat_trace(F, mat_mul(F, X, Y));
  };

  auto check_pair = [&](Fe x, Fe y) {
    Mat2 Ax_inv = mat_inv(F, a_matrix(F, x));
    Mat2 Atx_inv = mat_inv(F, at_matrix(F, x));
    Mat2 Ay = a_matrix(F, y);
    Mat2 Aty = at_matrix(F, y);
    Fe xy = F.mul(x, y);
    auto expect = [&](Fe got, Fe want) {
      ++rep.entries_checked;
      if (got != want) ++rep.failures;
    };
    expect(tr(Ax_inv, Ay), two);
    expect(tr(Ax_inv, Aty), F.sub(two, xy));
    expect(tr(Atx_inv, Ay), F.sub(two, xy));
    expect(tr(Atx_inv, Aty), two);
    if (rep.b_entries_included) {
      Mat2 Bx_inv = mat_inv(F, b_matrix(F, x));
      Mat2 By = b_matrix(F, y);
      expect(tr(Ax_inv, By), F.neg(F.div(x, F.mul(three, y))));
      expect(tr(Atx_inv, By), F.mul(two, xy));
      expect(tr(Bx_inv, Ay), F.neg(F.div(y, F.mul(three, x))));
      expect(tr(Bx_inv, Aty), F.mul(two, xy));
      // (2/3)(1 + x/y + y/x)
      Fe sum = F.add(1, F.add(F.div(x, y), F.div(y, x)));
      expect(tr(Bx_inv, By), F.mul(F.div(two, three), sum));
    }
    ++rep.pairs_checked;
  };

  if (rep.full_sweep) {
    for (Fe x = 1; x < q; ++x)
      for (Fe y = 1; y < q; ++y) check_pair(x, y);
  } else {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<Fe> unit(1, q - 1);
    for (uint64_t s = 0; s < samples; ++s) check_pair(unit(rng), unit(rng));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// AGL(1,q): all maps x -> a x + b on the field, a != 0, with the
// designated subgroup H = <x -> x + 1> of order p.

inline FiniteGroup agl1_group(uint32_t q) {
  uint32_t p, e;
  if (!is_prime_power(q, p, e))
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is not a prime power");
  if (e == 1)
    throw std::invalid_argument("the affine example needs a proper prime power "
                                "(e > 1)");
  if (p == 2)
    throw std::invalid_argument("the affine example needs odd characteristic");
  Field F(p, e);

  auto affine = [&](Fe a, Fe b) {
    std::vector<Point> img(q);
    for (Fe v = 0; v < q; ++v) img[v] = Point(F.add(F.mul(a, v), b));
    return Perm(std::move(img));
  };

  Perm sigma = affine(1, 1);
  Perm tau = affine(F.primitive_element(), 0);
  FiniteGroup G = enumerate_group({sigma, tau});
  if (G.order() != uint64_t(q) * (q - 1))
    throw std::logic_error("affine group closure missed q(q-1)");

  std::vector<uint32_t> H;
  Perm acc = Perm::identity(q);
  for (uint32_t k = 0; k < p; ++k) {
    H.push_back(G.position_of(acc));
    acc = compose(acc, sigma);
  }
  std::sort(H.begin(), H.end());
  G.designated_subgroup = std::move(H);
  return G;
}

// ---------------------------------------------------------------------------
// Deterministic search for a generating (involution, order-3) pair.

struct TwoThreeWitness {
  Perm involution;
  Perm order3;
};

inline std::optional<TwoThreeWitness> two_three_generation(uint32_t q) {
  Psl2Group P = psl2_group(q);
  std::vector<const Perm*> invs, cubes;
  for (const Perm& g : P.G.elements) {
    uint64_t o = element_order(g);
    if (o == 2) invs.push_back(&g);
    if (o == 3) cubes.push_back(&g);
  }
  for (const Perm* i : invs)
    for (const Perm* t : cubes)
      if (group_order_by_stabilizer_chain({*i, *t}) == P.G.order())
        return TwoThreeWitness{*i, *t};
  return std::nullopt;
}

}  // namespace ekr
