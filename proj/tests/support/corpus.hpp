#pragma once
// Small groups and graphs shared across test files.

#include <cstdint>
#include <vector>

#include "ekr/bitgraph.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"

namespace corpus {

using ekr::Perm;
using ekr::Point;

// S_n from an n-cycle and a transposition.
inline std::vector<Perm> sym_gens(Point n) {
  std::vector<Point> cyc(n), swap(n);
  for (Point i = 0; i < n; ++i) {
    cyc[i] = static_cast<Point>((i + 1) % n);
    swap[i] = i;
  }
  swap[0] = 1;
  swap[1] = 0;
  return {Perm(cyc), Perm(swap)};
}

inline std::vector<Perm> cyclic_gens(Point m) {
  std::vector<Point> rot(m);
  for (Point i = 0; i < m; ++i) rot[i] = static_cast<Point>((i + 1) % m);
  return {Perm(rot)};
}

// Dihedral group of order 2m on the vertices of an m-gon.
inline std::vector<Perm> dihedral_gens(Point m) {
  std::vector<Point> rot(m), ref(m);
  for (Point i = 0; i < m; ++i) {
    rot[i] = static_cast<Point>((i + 1) % m);
    ref[i] = static_cast<Point>((m - i) % m);
  }
  return {Perm(rot), Perm(ref)};
}

// Cycle graph on m vertices.
inline ekr::BitGraph cycle_graph(size_t m) {
  ekr::BitGraph g(m);
  for (size_t i = 0; i < m; ++i) g.add_edge(i, (i + 1) % m);
  return g;
}

// The 3-cube: vertices are bitmasks 0..7, edges flip one bit.
inline ekr::BitGraph cube_graph() {
  ekr::BitGraph g(8);
  for (size_t v = 0; v < 8; ++v)
    for (size_t b = 0; b < 3; ++b)
      if ((v ^ (size_t{1} << b)) > v) g.add_edge(v, v ^ (size_t{1} << b));
  return g;
}

// A_5 from a 5-cycle and a 3-cycle.
inline std::vector<Perm> alt5_gens() {
  return {Perm::from_cycles({{0, 1, 2, 3, 4}}, 5), Perm::from_cycles({{0, 1, 2}}, 5)};
}

// Z_3 x D_4 in the product action on 3 x 4 points; point 4i + j is (i, j).
// Stabilizers have order 2 (the reflection through the point's column).
inline std::vector<Perm> z3xd4_gens() {
  std::vector<Point> c(12), r(12), s(12);
  for (Point i = 0; i < 3; ++i)
    for (Point j = 0; j < 4; ++j) {
      c[4 * i + j] = static_cast<Point>(4 * ((i + 1) % 3) + j);
      r[4 * i + j] = static_cast<Point>(4 * i + (j + 1) % 4);
      s[4 * i + j] = static_cast<Point>(4 * i + (4 - j) % 4);
    }
  return {Perm(c), Perm(r), Perm(s)};
}

// Heisenberg group of order 27 (upper unitriangular 3x3 over F_3) in its
// regular action: point a*9 + b*3 + c is the triple (a, b, c), and
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
inline std::vector<Perm> heisenberg27_gens() {
  auto left_mul = [](int a, int b, int c) {
    std::vector<Point> img(27);
    for (int a2 = 0; a2 < 3; ++a2)
      for (int b2 = 0; b2 < 3; ++b2)
        for (int c2 = 0; c2 < 3; ++c2) {
          int ra = (a + a2) % 3, rb = (b + b2) % 3, rc = (c + c2 + a * b2) % 3;
          img[a2 * 9 + b2 * 3 + c2] = static_cast<Point>(ra * 9 + rb * 3 + rc);
        }
    return Perm(img);
  };
  return {left_mul(1, 0, 0), left_mul(0, 1, 0)};
}

}  // namespace corpus
