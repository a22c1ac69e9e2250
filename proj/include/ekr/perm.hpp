#pragma once

// Permutations on {0, ..., degree-1} stored as image arrays.
//
// Composition convention, fixed once and used everywhere: compose(p, q)
// is the map v -> p(q(v)), i.e. q acts first.  Group multiplication g*h
// means compose(g, h), so right-multiplying by a generator appends it on
// the "acts first" side.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ekr {

using Point = uint16_t;

class Perm {
public:
  Perm() = default;

  explicit Perm(std::vector<Point> images) : img_(std::move(images)) {
    validate();
  }

  static Perm identity(size_t degree) {
    check_degree(degree);
    std::vector<Point> v(degree);
    std::iota(v.begin(), v.end(), Point{0});
    Perm p;
    p.img_ = std::move(v);
    return p;
  }

  // Build from disjoint-cycle notation, e.g. {{0,1,2},{3,4}} on `degree`
  // points. Points absent from every cycle are fixed.
  static Perm from_cycles(const std::vector<std::vector<Point>>& cycles,
                          size_t degree) {
    Perm p = identity(degree);
    for (const auto& cyc : cycles) {
      for (size_t i = 0; i < cyc.size(); ++i) {
        Point from = cyc[i];
        Point to = cyc[(i + 1) % cyc.size()];
        if (from >= degree)
          throw std::invalid_argument("cycle point out of range");
        if (p.img_[from] != from)
          throw std::invalid_argument("cycles are not disjoint");
        p.img_[from] = to;
      }
    }
    p.validate();
    return p;
  }

  size_t degree() const { return img_.size(); }
  Point operator()(Point v) const { return img_[v]; }
  const std::vector<Point>& images() const { return img_; }

  bool is_identity() const {
    for (size_t v = 0; v < img_.size(); ++v)
      if (img_[v] != v) return false;
    return true;
  }

  Perm inverse() const {
    std::vector<Point> inv(img_.size());
    for (size_t v = 0; v < img_.size(); ++v) inv[img_[v]] = Point(v);
    Perm p;
    p.img_ = std::move(inv);
    return p;
  }

  friend bool operator==(const Perm& a, const Perm& b) {
    return a.img_ == b.img_;
  }
  friend bool operator!=(const Perm& a, const Perm& b) {
    return a.img_ != b.img_;
  }
  friend bool operator<(const Perm& a, const Perm& b) {
    return a.img_ < b.img_;
  }

  std::string to_string() const {
    // Disjoint cycle notation; "()" for the identity.
    std::string out;
    std::vector<bool> seen(degree(), false);
    for (size_t v = 0; v < degree(); ++v) {
      if (seen[v] || img_[v] == v) continue;
      out += '(';
      size_t w = v;
      bool first = true;
      do {
        if (!first) out += ' ';
        out += std::to_string(w);
        seen[w] = true;
        w = img_[w];
        first = false;
      } while (w != v);
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

private:
  std::vector<Point> img_;

  static void check_degree(size_t degree) {
    if (degree == 0) throw std::invalid_argument("degree must be at least 1");
    if (degree > 65535)
      throw std::invalid_argument("degree exceeds 65535 point limit");
  }

  void validate() const {
    check_degree(img_.size());
    std::vector<bool> hit(img_.size(), false);
    for (Point v : img_) {
      if (v >= img_.size() || hit[v])
        throw std::invalid_argument("image array is not a bijection");
      hit[v] = true;
    }
  }
};

inline Perm compose(const Perm& p, const Perm& q) {
  if (p.degree() != q.degree())
    throw std::invalid_argument("compose: degree mismatch");
  std::vector<Point> v(p.degree());
  for (size_t x = 0; x < v.size(); ++x) v[x] = p(q(Point(x)));
  return Perm(std::move(v));
}

inline uint64_t element_order(const Perm& p) {
  // lcm of the cycle lengths; walks each cycle once.
  uint64_t ord = 1;
  std::vector<bool> seen(p.degree(), false);
  for (size_t v = 0; v < p.degree(); ++v) {
    if (seen[v]) continue;
    uint64_t len = 0;
    size_t w = v;
    do {
      seen[w] = true;
      w = p(Point(w));
      ++len;
    } while (w != v);
    ord = std::lcm(ord, len);
  }
  return ord;
}

inline Perm conjugate(const Perm& x, const Perm& g) {
  // x^g = g^{-1} x g, the convention used for class computations.
  return compose(g.inverse(), compose(x, g));
}

struct PermHash {
  size_t operator()(const Perm& p) const {
    // FNV-1a over the raw image words.
    uint64_t h = 1469598103934665603ull;
    for (Point v : p.images()) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return size_t(h);
  }
};

}  // namespace ekr
