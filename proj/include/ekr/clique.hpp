#pragma once

// Exact maximum clique on BitGraph: branch and bound with greedy sequential
// coloring bounds and a static degeneracy vertex order, bitset candidate
// sets throughout.  Parallelism is top-level root splitting; the only
// shared mutable state is a monotone incumbent size (atomic) plus a mutex
// guarding the incumbent witness.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ekr/bitgraph.hpp"

namespace ekr {

struct CliqueResult {
  size_t omega = 0;
  std::vector<uint32_t> witness;  // sorted original vertex ids
  uint64_t node_count = 0;
  double elapsed_seconds = 0.0;
};

namespace detail {

// The solver works on a relabeled copy: vertices renumbered so that the
// degeneracy peel sequence runs from index n-1 (peeled first) down to 0.
// Root i then has candidate set N(i) & {0..i-1}, whose size is at most the
// graph's degeneracy.
struct RelabeledGraph {
  size_t n = 0;
  size_t words = 0;
  std::vector<uint64_t> rows;        // n * words adjacency bits
  std::vector<uint32_t> to_original; // new index -> original vertex

  const uint64_t* row(size_t v) const { return rows.data() + v * words; }
};

inline RelabeledGraph relabel_by_degeneracy(const BitGraph& G) {
  size_t n = G.size();
  RelabeledGraph R;
  R.n = n;
  R.words = n ? (n + 63) / 64 : 0;
  R.rows.assign(n * R.words, 0);
  R.to_original.resize(n);
  if (n == 0) return R;

  // Min-degree peel.
  std::vector<uint32_t> deg(n);
  for (size_t v = 0; v < n; ++v) deg[v] = uint32_t(G.degree(v));
  std::vector<bool> removed(n, false);
  std::vector<uint32_t> peel;  // peel[k] = k-th vertex removed
  peel.reserve(n);
  for (size_t step = 0; step < n; ++step) {
    uint32_t best = UINT32_MAX, best_v = 0;
    for (size_t v = 0; v < n; ++v)
      if (!removed[v] && deg[v] < best) {
        best = deg[v];
        best_v = uint32_t(v);
      }
    removed[best_v] = true;
    peel.push_back(best_v);
    for (uint32_t w : G.neighbors(best_v))
      if (!removed[w]) --deg[w];
  }

  std::vector<uint32_t> new_index(n);
  for (size_t k = 0; k < n; ++k) {
    uint32_t v = peel[k];
    uint32_t idx = uint32_t(n - 1 - k);
    new_index[v] = idx;
    R.to_original[idx] = v;
  }
  for (size_t v = 0; v < n; ++v) {
    uint32_t nv = new_index[v];
    uint64_t* row = R.rows.data() + size_t(nv) * R.words;
    for (uint32_t w : G.neighbors(v)) {
      uint32_t nw = new_index[w];
      row[nw >> 6] |= uint64_t(1) << (nw & 63);
    }
  }
  return R;
}

inline bool any_bit(const uint64_t* p, size_t words) {
  for (size_t w = 0; w < words; ++w)
    if (p[w]) return true;
  return false;
}

class CliqueSearch {
public:
  CliqueSearch(const RelabeledGraph& g, std::atomic<uint32_t>& best,
               std::mutex& witness_mu, std::vector<uint32_t>& witness,
               std::atomic<uint64_t>& nodes)
      : g_(g), best_(best), witness_mu_(witness_mu), witness_(witness),
        nodes_(nodes) {
    size_t depth_cap = g_.n + 1;
    P_stack_.assign(depth_cap, std::vector<uint64_t>(g_.words, 0));
    order_stack_.assign(depth_cap, {});
    bound_stack_.assign(depth_cap, {});
    R_.reserve(g_.n);
  }

  void run_root(uint32_t i) {
    if (g_.words == 0) return;
    uint64_t* P = P_stack_[0].data();
    const uint64_t* Ni = g_.row(i);
    // candidates strictly below i
    for (size_t w = 0; w < g_.words; ++w) P[w] = Ni[w];
    mask_below(P, i);
    R_.clear();
    R_.push_back(i);
    if (!any_bit(P, g_.words)) {
      offer(R_);
      return;
    }
    expand(0);
  }

private:
  const RelabeledGraph& g_;
  std::atomic<uint32_t>& best_;
  std::mutex& witness_mu_;
  std::vector<uint32_t>& witness_;
  std::atomic<uint64_t>& nodes_;
  uint64_t local_nodes_ = 0;

  std::vector<std::vector<uint64_t>> P_stack_;
  std::vector<std::vector<uint32_t>> order_stack_;
  std::vector<std::vector<uint32_t>> bound_stack_;
  std::vector<uint32_t> R_;

public:
  void flush_nodes() {
    nodes_ += local_nodes_;
    local_nodes_ = 0;
  }

private:
  void mask_below(uint64_t* P, uint32_t i) const {
    // keep bits 0..i-1
    size_t full = i >> 6;
    for (size_t w = full + 1; w < g_.words; ++w) P[w] = 0;
    if (full < g_.words) {
      unsigned rem = i & 63;
      P[full] &= rem ? ((uint64_t(1) << rem) - 1) : 0;
    }
  }

  void offer(const std::vector<uint32_t>& R) {
    uint32_t size = uint32_t(R.size());
    uint32_t cur = best_.load(std::memory_order_relaxed);
    while (size > cur &&
           !best_.compare_exchange_weak(cur, size, std::memory_order_relaxed)) {
    }
    if (size > cur) {
      std::lock_guard<std::mutex> lk(witness_mu_);
      if (size > witness_.size()) {
        witness_.clear();
        for (uint32_t v : R) witness_.push_back(g_.to_original[v]);
      }
    }
  }

  // Greedy sequential coloring of P; emits vertices grouped by color class
  // (ascending), so bounds are non-decreasing along `order`.
  void color_sort(const uint64_t* P, std::vector<uint32_t>& order,
                  std::vector<uint32_t>& bound) const {
    order.clear();
    bound.clear();
    thread_local std::vector<uint64_t> rest, cls;
    rest.assign(P, P + g_.words);
    cls.resize(g_.words);
    uint32_t color = 0;
    while (any_bit(rest.data(), g_.words)) {
      ++color;
      for (size_t w = 0; w < g_.words; ++w) cls[w] = rest[w];
      while (any_bit(cls.data(), g_.words)) {
        uint32_t v = first_bit(cls.data());
        clear_bit(cls.data(), v);
        clear_bit(rest.data(), v);
        order.push_back(v);
        bound.push_back(color);
        const uint64_t* Nv = g_.row(v);
        for (size_t w = 0; w < g_.words; ++w) cls[w] &= ~Nv[w];
      }
    }
  }

  uint32_t first_bit(const uint64_t* p) const {
    for (size_t w = 0; w < g_.words; ++w)
      if (p[w]) return uint32_t(w * 64 + std::countr_zero(p[w]));
    return UINT32_MAX;
  }

  static void clear_bit(uint64_t* p, uint32_t v) {
    p[v >> 6] &= ~(uint64_t(1) << (v & 63));
  }

  void expand(size_t depth) {
    ++local_nodes_;
    if ((local_nodes_ & 0x3FF) == 0) flush_nodes();

    uint64_t* P = P_stack_[depth].data();
    auto& order = order_stack_[depth];
    auto& bound = bound_stack_[depth];
    color_sort(P, order, bound);

    uint64_t* child = P_stack_[depth + 1].data();
    for (size_t k = order.size(); k-- > 0;) {
      if (uint32_t(R_.size()) + bound[k] <= best_.load(std::memory_order_relaxed))
        return;  // bounds are non-decreasing: everything left prunes too
      uint32_t v = order[k];
      const uint64_t* Nv = g_.row(v);
      bool child_nonempty = false;
      for (size_t w = 0; w < g_.words; ++w) {
        child[w] = P[w] & Nv[w];
        child_nonempty |= child[w] != 0;
      }
      R_.push_back(v);
      if (child_nonempty)
        expand(depth + 1);
      else
        offer(R_);
      R_.pop_back();
      clear_bit(P, v);
    }
  }
};

}  // namespace detail

// Exact maximum clique.  `lower_hint` plants an initial incumbent of
// hint-1, sound when a clique of that size is known to exist; if the hint
// turns out unattainable the search is rerun unhinted so the result is
// exact either way.  `threads` = 0 picks the hardware concurrency.  Omega
// is deterministic for any thread count; the witness is deterministic only
// single-threaded.
inline CliqueResult max_clique(const BitGraph& G,
                               std::optional<size_t> lower_hint = std::nullopt,
                               unsigned threads = 0) {
  auto t0 = std::chrono::steady_clock::now();
  CliqueResult result;
  if (G.size() == 0) return result;

  detail::RelabeledGraph g = detail::relabel_by_degeneracy(G);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  size_t n = g.n;

  std::atomic<uint64_t> nodes{0};
  for (bool use_hint = lower_hint.has_value() && *lower_hint >= 2;;
       use_hint = false) {
    std::atomic<uint32_t> best{use_hint ? uint32_t(*lower_hint - 1) : 0};
    std::mutex witness_mu;
    std::vector<uint32_t> witness;
    std::atomic<uint32_t> next_root{0};

    auto worker = [&]() {
      detail::CliqueSearch search(g, best, witness_mu, witness, nodes);
      while (true) {
        uint32_t c = next_root.fetch_add(1, std::memory_order_relaxed);
        if (c >= n) break;
        search.run_root(uint32_t(n - 1 - c));  // descending index order
      }
      search.flush_nodes();
    };

    if (threads == 1 || n < 64) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    if (witness.empty() && use_hint) continue;  // hint unattained: rerun clean
    std::sort(witness.begin(), witness.end());
    result.omega = witness.size();
    result.witness = std::move(witness);
    break;
  }

  result.node_count = nodes.load();
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

struct CliqueEnumeration {
  std::vector<std::vector<uint32_t>> cliques;  // each sorted; overall order deterministic
  bool truncated = false;
};

// All cliques of exactly the maximum size.  `omega` must be the true
// clique number (from max_clique); the search prunes branches that cannot
// reach it.  Stops recording past `cap` and sets the truncated flag.
inline CliqueEnumeration enumerate_maximum_cliques(const BitGraph& G,
                                                   size_t omega,
                                                   size_t cap = 100000) {
  CliqueEnumeration out;
  if (G.size() == 0) {
    out.cliques.push_back({});  // the empty clique is the unique maximum
    return out;
  }
  if (omega == 0)
    throw std::invalid_argument("a nonempty graph has cliques of size 1");

  detail::RelabeledGraph g = detail::relabel_by_degeneracy(G);
  size_t words = g.words;

  std::vector<std::vector<uint64_t>> P_stack(g.n + 1,
                                             std::vector<uint64_t>(words, 0));
  std::vector<uint32_t> R;
  std::vector<std::vector<uint32_t>> order_stack(g.n + 1), bound_stack(g.n + 1);

  // Iterative-recursive DFS mirroring the optimizer, but keeping every
  // branch that can still tie the record.
  auto color_sort = [&](const uint64_t* P, std::vector<uint32_t>& order,
                        std::vector<uint32_t>& bound) {
    order.clear();
    bound.clear();
    std::vector<uint64_t> rest(P, P + words), cls(words);
    uint32_t color = 0;
    while (detail::any_bit(rest.data(), words)) {
      ++color;
      for (size_t w = 0; w < words; ++w) cls[w] = rest[w];
      while (detail::any_bit(cls.data(), words)) {
        uint32_t v = UINT32_MAX;
        for (size_t w = 0; w < words && v == UINT32_MAX; ++w)
          if (cls[w]) v = uint32_t(w * 64 + std::countr_zero(cls[w]));
        cls[v >> 6] &= ~(uint64_t(1) << (v & 63));
        rest[v >> 6] &= ~(uint64_t(1) << (v & 63));
        order.push_back(v);
        bound.push_back(color);
        const uint64_t* Nv = g.row(v);
        for (size_t w = 0; w < words; ++w) cls[w] &= ~Nv[w];
      }
    }
  };

  auto record = [&]() {
    if (out.cliques.size() >= cap) {
      out.truncated = true;
      return;
    }
    std::vector<uint32_t> c;
    c.reserve(R.size());
    for (uint32_t v : R) c.push_back(g.to_original[v]);
    std::sort(c.begin(), c.end());
    out.cliques.push_back(std::move(c));
  };

  std::function<void(size_t)> expand = [&](size_t depth) {
    if (out.truncated) return;
    if (R.size() == omega) {
      record();
      return;
    }
    uint64_t* P = P_stack[depth].data();
    auto& order = order_stack[depth];
    auto& bound = bound_stack[depth];
    color_sort(P, order, bound);
    uint64_t* child = P_stack[depth + 1].data();
    for (size_t k = order.size(); k-- > 0;) {
      if (R.size() + bound[k] < omega) return;  // cannot reach the record
      uint32_t v = order[k];
      const uint64_t* Nv = g.row(v);
      bool nonempty = false;
      for (size_t w = 0; w < words; ++w) {
        child[w] = P[w] & Nv[w];
        nonempty |= child[w] != 0;
      }
      R.push_back(v);
      if (R.size() == omega)
        record();
      else if (nonempty)
        expand(depth + 1);
      R.pop_back();
      P[v >> 6] &= ~(uint64_t(1) << (v & 63));
      if (out.truncated) return;
    }
  };

  for (size_t c = 0; c < g.n; ++c) {
    uint32_t i = uint32_t(g.n - 1 - c);
    uint64_t* P = P_stack[0].data();
    const uint64_t* Ni = g.row(i);
    for (size_t w = 0; w < words; ++w) P[w] = Ni[w];
    // keep bits strictly below i
    size_t full = i >> 6;
    for (size_t w = full + 1; w < words; ++w) P[w] = 0;
    unsigned rem = i & 63;
    P[full] &= rem ? ((uint64_t(1) << rem) - 1) : 0;

    R.assign(1, i);
    if (omega == 1) {
      record();
    } else {
      expand(0);
    }
    if (out.truncated) break;
  }

  // Deterministic output order independent of the relabeling details.
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

// One deterministic greedy pass: repeatedly take the highest-degree
// remaining candidate.  Lower bound on omega, nothing more.
inline size_t greedy_clique_lower_bound(const BitGraph& G) {
  size_t n = G.size();
  if (n == 0) return 0;
  std::vector<bool> in_P(n, true);
  size_t P_count = n;
  size_t clique = 0;
  while (P_count > 0) {
    size_t best_v = SIZE_MAX, best_d = 0;
    for (size_t v = 0; v < n; ++v) {
      if (!in_P[v]) continue;
      size_t d = 0;
      for (uint32_t w : G.neighbors(v))
        if (in_P[w]) ++d;
      if (best_v == SIZE_MAX || d > best_d) {
        best_v = v;
        best_d = d;
      }
    }
    ++clique;
    std::vector<bool> next(n, false);
    size_t count = 0;
    for (uint32_t w : G.neighbors(uint32_t(best_v)))
      if (in_P[w]) {
        next[w] = true;
        ++count;
      }
    in_P = std::move(next);
    P_count = count;
  }
  return clique;
}

}  // namespace ekr
