#pragma once

// Dense undirected graphs, one machine-word-packed bitset row per vertex.
// Every clique kernel downstream is a row intersection, and the graphs we
// build stay small (<= ~10^4 vertices), so dense rows beat adjacency lists.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ekr {

class BitGraph {
public:
  BitGraph() = default;

  explicit BitGraph(size_t n)
      : n_(n), words_(n ? (n + 63) / 64 : 0), bits_(n_ * words_, 0) {}

  size_t size() const { return n_; }
  size_t words_per_row() const { return words_; }

  const uint64_t* row(size_t u) const { return bits_.data() + u * words_; }
  uint64_t* row(size_t u) { return bits_.data() + u * words_; }

  void add_edge(size_t u, size_t v) {
    check_pair(u, v);
    row(u)[v >> 6] |= uint64_t(1) << (v & 63);
    row(v)[u >> 6] |= uint64_t(1) << (u & 63);
  }

  void remove_edge(size_t u, size_t v) {
    check_pair(u, v);
    row(u)[v >> 6] &= ~(uint64_t(1) << (v & 63));
    row(v)[u >> 6] &= ~(uint64_t(1) << (u & 63));
  }

  bool has_edge(size_t u, size_t v) const {
    if (u >= n_ || v >= n_) throw std::invalid_argument("has_edge: vertex out of range");
    return (row(u)[v >> 6] >> (v & 63)) & 1;
  }

  size_t degree(size_t u) const {
    size_t d = 0;
    const uint64_t* r = row(u);
    for (size_t w = 0; w < words_; ++w) d += std::popcount(r[w]);
    return d;
  }

  uint64_t edge_count() const {
    uint64_t total = 0;
    for (size_t u = 0; u < n_; ++u) total += degree(u);
    return total / 2;
  }

  std::vector<uint32_t> neighbors(size_t u) const {
    std::vector<uint32_t> out;
    const uint64_t* r = row(u);
    for (size_t w = 0; w < words_; ++w) {
      uint64_t word = r[w];
      while (word) {
        unsigned b = std::countr_zero(word);
        out.push_back(uint32_t(w * 64 + b));
        word &= word - 1;
      }
    }
    return out;
  }

  // -1 when not regular, otherwise the common degree.
  int64_t regular_degree() const {
    if (n_ == 0) return 0;
    size_t d = degree(0);
    for (size_t u = 1; u < n_; ++u)
      if (degree(u) != d) return -1;
    return int64_t(d);
  }

  BitGraph complement() const {
    BitGraph C(n_);
    for (size_t u = 0; u < n_; ++u)
      for (size_t v = u + 1; v < n_; ++v)
        if (!has_edge(u, v)) C.add_edge(u, v);
    return C;
  }

  BitGraph induced(const std::vector<uint32_t>& verts) const {
    for (uint32_t v : verts)
      if (v >= n_) throw std::invalid_argument("induced: vertex out of range");
    BitGraph H(verts.size());
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        if (has_edge(verts[i], verts[j])) H.add_edge(i, j);
    return H;
  }

  bool is_connected() const {
    if (n_ <= 1) return true;
    std::vector<bool> seen(n_, false);
    std::vector<uint32_t> stack{0};
    seen[0] = true;
    size_t found = 1;
    while (!stack.empty()) {
      uint32_t u = stack.back();
      stack.pop_back();
      for (uint32_t v : neighbors(u))
        if (!seen[v]) {
          seen[v] = true;
          ++found;
          stack.push_back(v);
        }
    }
    return found == n_;
  }

  bool is_clique(const std::vector<uint32_t>& verts) const {
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j) {
        if (verts[i] == verts[j]) return false;
        if (!has_edge(verts[i], verts[j])) return false;
      }
    return true;
  }

  bool is_independent_set(const std::vector<uint32_t>& verts) const {
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j) {
        if (verts[i] == verts[j]) return false;
        if (has_edge(verts[i], verts[j])) return false;
      }
    return true;
  }

  // Optional vertex labels (group-element indices for Cayley-type graphs).
  std::vector<uint32_t> labels;

private:
  size_t n_ = 0;
  size_t words_ = 0;
  std::vector<uint64_t> bits_;

  void check_pair(size_t u, size_t v) const {
    if (u >= n_ || v >= n_)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
  }
};

}  // namespace ekr
