#pragma once

// Arithmetic in GF(p^e) over a deterministically chosen modulus, plus
// squares and the Paley graph.  Elements are indices 0..q-1 encoding the
// coefficient vector as base-p digits (index = sum c_i * p^i).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ekr/bitgraph.hpp"

namespace ekr {

using Fe = uint32_t;  // field element, by enumeration index

constexpr uint32_t kMaxFieldSize = 4096;

namespace detail {

inline bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over GF(p) as coefficient vectors, low degree first, no
// trailing zeros.  Only what the modulus search needs.
using Poly = std::vector<uint32_t>;

inline void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly poly_mod(Poly f, const Poly& m, uint32_t p) {
  poly_trim(f);
  while (f.size() >= m.size()) {
    uint32_t lead = f.back();
    // m is monic in every use below
    size_t shift = f.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      uint64_t t = uint64_t(lead) * m[i] % p;
      f[shift + i] = uint32_t((f[shift + i] + p - t) % p);
    }
    poly_trim(f);
  }
  return f;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = uint32_t((prod[i + j] + uint64_t(a[i]) * b[j]) % p);
  return poly_mod(std::move(prod), m, p);
}

inline Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // make b monic so poly_mod applies
    uint32_t lead = b.back();
    uint32_t inv = 1;
    for (uint32_t t = 1; t < p; ++t)
      if (t * lead % p == 1) { inv = t; break; }
    for (uint32_t& c : b) c = uint32_t(uint64_t(c) * inv % p);
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod m by repeated p-th powering of x.
inline Poly frobenius_power(const Poly& m, uint32_t p, uint32_t k) {
  Poly x{0, 1};
  Poly acc = poly_mod(x, m, p);
  for (uint32_t step = 0; step < k; ++step) {
    // acc <- acc^p via square-and-multiply
    Poly result{1};
    Poly base = acc;
    uint32_t exp = p;
    while (exp) {
      if (exp & 1) result = poly_mulmod(result, base, m, p);
      base = poly_mulmod(base, base, m, p);
      exp >>= 1;
    }
    acc = std::move(result);
  }
  return acc;
}

// Irreducibility over GF(p): f (monic, degree e) is irreducible iff
// gcd(f, x^(p^k) - x) is constant for every k <= e/2.
inline bool is_irreducible(const Poly& f, uint32_t p) {
  uint32_t e = uint32_t(f.size()) - 1;
  if (e == 1) return true;
  for (uint32_t k = 1; k <= e / 2; ++k) {
    Poly xpk = frobenius_power(f, p, k);
    // subtract x
    if (xpk.size() < 2) xpk.resize(2, 0);
    xpk[1] = uint32_t((xpk[1] + p - 1) % p);
    poly_trim(xpk);
    Poly g = poly_gcd(f, xpk, p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class Field {
public:
  // GF(p^e) with the lexicographically smallest monic irreducible modulus,
  // coefficients compared low-degree-first.
  Field(uint32_t p, uint32_t e) : p_(p), e_(e) {
    if (!detail::is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
    uint64_t q = 1;
    for (uint32_t i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxFieldSize)
        throw std::runtime_error("field too large: q exceeds cap of " +
                                 std::to_string(kMaxFieldSize));
    }
    q_ = uint32_t(q);

    modulus_ = find_modulus();
    build_tables();
  }

  uint32_t p() const { return p_; }
  uint32_t e() const { return e_; }
  uint32_t q() const { return q_; }

  // Modulus coefficients c_0..c_{e-1}; the monic x^e term is implicit.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  // Human-readable modulus, e.g. "x^2 + 1".
  std::string modulus_string() const {
    std::string s = "x^" + std::to_string(e_);
    for (int i = int(e_) - 1; i >= 0; --i) {
      uint32_t c = modulus_[i];
      if (!c) continue;
      s += " + ";
      if (i == 0) {
        s += std::to_string(c);
      } else {
        if (c != 1) s += std::to_string(c) + "*";
        s += (i == 1) ? "x" : "x^" + std::to_string(i);
      }
    }
    return s;
  }

  Fe digit_get(Fe x, uint32_t i) const {
    for (uint32_t k = 0; k < i; ++k) x /= p_;
    return x % p_;
  }

  Fe add(Fe x, Fe y) const {
    check(x); check(y);
    Fe out = 0, place = 1;
    for (uint32_t i = 0; i < e_; ++i) {
      out += (x % p_ + y % p_) % p_ * place;
      x /= p_;
      y /= p_;
      place *= p_;
    }
    return out;
  }

  Fe neg(Fe x) const {
    check(x);
    Fe out = 0, place = 1;
    for (uint32_t i = 0; i < e_; ++i) {
      out += (p_ - x % p_) % p_ * place;
      x /= p_;
      place *= p_;
    }
    return out;
  }

  Fe sub(Fe x, Fe y) const { return add(x, neg(y)); }

  Fe mul(Fe x, Fe y) const {
    check(x); check(y);
    if (x == 0 || y == 0) return 0;
    uint32_t l = log_[x] + log_[y];
    if (l >= q_ - 1) l -= q_ - 1;
    return exp_[l];
  }

  Fe inv(Fe x) const {
    check(x);
    if (x == 0) throw std::invalid_argument("division by zero in field inverse");
    uint32_t l = log_[x];
    return exp_[l == 0 ? 0 : q_ - 1 - l];
  }

  Fe div(Fe x, Fe y) const { return mul(x, inv(y)); }

  Fe pow(Fe x, uint64_t k) const {
    check(x);
    if (x == 0) return k == 0 ? 1 : 0;
    uint64_t l = uint64_t(log_[x]) * (k % (q_ - 1)) % (q_ - 1);
    return exp_[l];
  }

  // Embeds a residue 0 <= r < p as a constant.
  Fe from_int(uint32_t r) const { return r % p_; }

  uint32_t mul_order(Fe x) const {
    if (x == 0) throw std::invalid_argument("zero has no multiplicative order");
    uint32_t l = log_[x];
    if (l == 0) return 1;
    // order of g^l is (q-1)/gcd(q-1, l)
    uint32_t a = q_ - 1, b = l;
    while (b) { uint32_t t = a % b; a = b; b = t; }
    return (q_ - 1) / a;
  }

  Fe primitive_element() const { return primitive_; }

  bool is_square(Fe x) const {
    check(x);
    if (x == 0) return false;      // "squares" means nonzero squares here
    if (p_ == 2) return true;      // squaring is a bijection in char 2
    return log_[x] % 2 == 0;
  }

  std::vector<Fe> squares() const {
    std::vector<Fe> out;
    for (Fe x = 1; x < q_; ++x)
      if (is_square(x)) out.push_back(x);
    return out;
  }

private:
  uint32_t p_, e_, q_;
  std::vector<uint32_t> modulus_;
  Fe primitive_ = 0;
  std::vector<Fe> exp_;        // exp_[i] = primitive^i, i in [0, q-1)
  std::vector<uint32_t> log_;  // log_[exp_[i]] = i; log_[0] unused

  void check(Fe x) const {
    if (x >= q_) throw std::invalid_argument("field element index out of range");
  }

  std::vector<uint32_t> find_modulus() {
    if (e_ == 1) return {0};  // modulus x; arithmetic is plain mod p
    std::vector<uint32_t> c(e_, 0);
    while (true) {
      detail::Poly f(c.begin(), c.end());
      f.push_back(1);  // monic
      if (detail::is_irreducible(f, p_)) return c;
      // increment low-degree-first lexicographically: c_{e-1} is the
      // fastest-moving digit, c_0 the most significant.
      int i = int(e_) - 1;
      while (i >= 0 && c[i] == p_ - 1) c[i--] = 0;
      if (i < 0) throw std::logic_error("no irreducible modulus found");
      ++c[i];
    }
  }

  // Raw product of two element indices by polynomial multiplication mod
  // (p, modulus); used only to bootstrap the log/exp tables.
  Fe raw_mul(Fe x, Fe y) const {
    std::vector<uint32_t> a(e_), b(e_);
    for (uint32_t i = 0; i < e_; ++i) { a[i] = x % p_; x /= p_; }
    for (uint32_t i = 0; i < e_; ++i) { b[i] = y % p_; y /= p_; }
    std::vector<uint32_t> prod(2 * e_ - 1, 0);
    for (uint32_t i = 0; i < e_; ++i)
      for (uint32_t j = 0; j < e_; ++j)
        prod[i + j] = uint32_t((prod[i + j] + uint64_t(a[i]) * b[j]) % p_);
    // reduce by x^e = -modulus
    for (int d = int(prod.size()) - 1; d >= int(e_); --d) {
      uint32_t lead = prod[d];
      if (!lead) continue;
      prod[d] = 0;
      for (uint32_t i = 0; i < e_; ++i) {
        uint64_t t = uint64_t(lead) * modulus_[i] % p_;
        prod[d - e_ + i] = uint32_t((prod[d - e_ + i] + p_ - t) % p_);
      }
    }
    Fe out = 0, place = 1;
    for (uint32_t i = 0; i < e_; ++i) {
      out += prod[i] * place;
      place *= p_;
    }
    return out;
  }

  void build_tables() {
    // Primitive element: first index (base-p digit enumeration order)
    // whose multiplicative order is q-1, found by brute-force powering.
    for (Fe g = 1; g < q_; ++g) {
      Fe acc = g;
      uint32_t order = 1;
      while (acc != 1) {
        acc = raw_mul(acc, g);
        ++order;
        if (order > q_) throw std::logic_error("power loop failed to close");
      }
      if (order == q_ - 1) { primitive_ = g; break; }
    }
    if (q_ > 2 && primitive_ == 0)
      throw std::logic_error("no primitive element found");
    if (q_ == 2) primitive_ = 1;

    exp_.assign(q_ - 1, 1);
    log_.assign(q_, 0);
    Fe acc = 1;
    for (uint32_t i = 0; i + 1 < q_; ++i) {
      exp_[i] = acc;
      log_[acc] = i;
      acc = raw_mul(acc, primitive_);
    }
    if (acc != 1) throw std::logic_error("primitive element order mismatch");
  }
};

// Paley graph on the q field elements in enumeration order: x ~ y iff
// x - y is a nonzero square.  Needs q = 1 (mod 4) so that -1 is a square
// and adjacency is symmetric.
inline BitGraph paley_graph(const Field& F) {
  if (F.q() % 4 != 1)
    throw std::invalid_argument(
        "paley graph requires q = 1 (mod 4); q = " + std::to_string(F.q()) +
        " fails the congruence");
  BitGraph P(F.q());
  for (Fe x = 0; x < F.q(); ++x)
    for (Fe y = x + 1; y < F.q(); ++y)
      if (F.is_square(F.sub(x, y))) P.add_edge(x, y);
  return P;
}

inline BitGraph paley_graph(uint32_t p, uint32_t e) { return paley_graph(Field(p, e)); }

}  // namespace ekr
