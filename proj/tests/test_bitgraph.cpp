#include <catch2/catch_amalgamated.hpp>

#include "ekr/bitgraph.hpp"

using ekr::BitGraph;

TEST_CASE("edges are symmetric and loops rejected") {
  BitGraph G(5);
  G.add_edge(0, 3);
  CHECK(G.has_edge(3, 0));
  CHECK(G.has_edge(0, 3));
  CHECK_FALSE(G.has_edge(0, 1));
  CHECK_THROWS_AS(G.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(G.add_edge(0, 5), std::invalid_argument);
  G.remove_edge(0, 3);
  CHECK_FALSE(G.has_edge(3, 0));
}

TEST_CASE("degree, neighbors, and counts on a path") {
  BitGraph P(4);
  P.add_edge(0, 1);
  P.add_edge(1, 2);
  P.add_edge(2, 3);
  CHECK(P.edge_count() == 3);
  CHECK(P.degree(0) == 1);
  CHECK(P.degree(1) == 2);
  CHECK(P.neighbors(1) == std::vector<uint32_t>{0, 2});
  CHECK(P.regular_degree() == -1);
  CHECK(P.is_connected());
}

TEST_CASE("complement swaps edges and non-edges") {
  BitGraph G(4);
  G.add_edge(0, 1);
  BitGraph C = G.complement();
  CHECK_FALSE(C.has_edge(0, 1));
  CHECK(C.has_edge(2, 3));
  CHECK(C.edge_count() == 5);
  // complement twice returns the original edge set
  BitGraph CC = C.complement();
  for (size_t u = 0; u < 4; ++u)
    for (size_t v = u + 1; v < 4; ++v)
      CHECK(CC.has_edge(u, v) == G.has_edge(u, v));
}

TEST_CASE("induced subgraph keeps the selected structure") {
  BitGraph G(6);
  G.add_edge(0, 1);
  G.add_edge(1, 2);
  G.add_edge(0, 2);
  G.add_edge(3, 4);
  BitGraph T = G.induced({0, 1, 2});
  CHECK(T.size() == 3);
  CHECK(T.edge_count() == 3);
  BitGraph E = G.induced({3, 5});
  CHECK(E.edge_count() == 0);
  CHECK_FALSE(G.induced({0, 3}).is_connected());
}

TEST_CASE("clique and independent-set checks") {
  BitGraph G(4);
  G.add_edge(0, 1);
  G.add_edge(0, 2);
  G.add_edge(1, 2);
  CHECK(G.is_clique({0, 1, 2}));
  CHECK_FALSE(G.is_clique({0, 1, 3}));
  CHECK(G.is_clique({}));
  CHECK(G.is_clique({2}));
  CHECK(G.is_independent_set({1, 3}));
  CHECK_FALSE(G.is_independent_set({0, 1}));
  CHECK_FALSE(G.is_clique({1, 1}));  // repeated vertex is not a clique
}

TEST_CASE("word-boundary vertices behave") {
  // vertices straddling the 64-bit word edge
  BitGraph G(130);
  G.add_edge(63, 64);
  G.add_edge(64, 129);
  G.add_edge(0, 129);
  CHECK(G.has_edge(64, 63));
  CHECK(G.has_edge(129, 64));
  CHECK(G.degree(64) == 2);
  CHECK(G.neighbors(129) == std::vector<uint32_t>{0, 64});
  CHECK(G.edge_count() == 3);
}
