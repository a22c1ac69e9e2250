#pragma once
// Reproduction table: recompute every exact density and clique number the
// toolkit pins, compare against the stated value, and report per-row match
// flags.  The quick tier finishes in seconds; the full tier adds the two
// expensive groups (PSL(2,25) and PSL(2,81)).

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekr/clique.hpp"
#include "ekr/constructions.hpp"
#include "ekr/field.hpp"
#include "ekr/psl2.hpp"
#include "ekr/rational.hpp"

namespace ekr {

struct VerifyRow {
  std::string id;        // construction id (row key)
  std::string quantity;  // "rho" or "omega"
  Rational expected;     // the value the claim pins
  std::string claim;     // the statement this row reproduces
  Rational computed;
  bool match = false;    // exact equality of expected and computed
  double seconds = 0;
};

struct VerifyTable {
  std::vector<VerifyRow> rows;
  bool all_match = true;
  double total_seconds = 0;
};

namespace detail {

inline void add_density_row(VerifyTable& table, const Instance& inst,
                            Rational expected, std::string claim,
                            unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  DensityOptions opts;
  opts.threads = threads;
  DensityReport rep = density_for_instance(inst, opts);
  VerifyRow row;
  row.id = inst.id;
  row.quantity = "rho";
  row.expected = expected;
  row.claim = std::move(claim);
  row.computed = rep.rho;
  row.match = (row.computed == row.expected);
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  table.rows.push_back(std::move(row));
}

inline void add_clique_row(VerifyTable& table, std::string id, const BitGraph& g,
                           size_t hint, Rational expected, std::string claim,
                           unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  CliqueResult res = max_clique(g, hint, threads);
  VerifyRow row;
  row.id = std::move(id);
  row.quantity = "omega";
  row.expected = expected;
  row.claim = std::move(claim);
  row.computed = Rational(int64_t(res.omega));
  row.match = (row.computed == row.expected);
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  table.rows.push_back(std::move(row));
}

}  // namespace detail

// Recompute the whole table.  `threads` = 0 picks the hardware concurrency.
// `tamper` corrupts the first expected value after computing, so the table
// must come back mismatched; callers use it to prove a failing row is not
// silently swallowed.
inline VerifyTable verify_reproduction(bool full, unsigned threads = 0,
                                       bool tamper = false) {
  VerifyTable t;

  for (uint32_t n = 4; n <= 7; ++n)
    detail::add_density_row(
        t, build_sym3(n), Rational(int64_t(n) - 1, 3),
        "S_" + std::to_string(n) +
            " on cosets of a subgroup generated by a 3-cycle has rho = (n-1)/3",
        threads);

  for (uint32_t q : {4u, 7u, 13u, 16u})
    detail::add_density_row(
        t, build_psl2_z3(q), Rational(4, 3),
        "PSL(2," + std::to_string(q) +
            ") on cosets of an order-3 subgroup has rho = 4/3 away from "
            "characteristic 5",
        threads);
  if (full)
    detail::add_density_row(
        t, build_psl2_z3(25), Rational(2),
        "PSL(2,25) on cosets of an order-3 subgroup has rho = 2; "
        "characteristic 5 is the exceptional case",
        threads);

  detail::add_density_row(
      t, build_psl2_char3(3), Rational(9),
      "PSL(2,27) on cosets of a unipotent order-3 subgroup has maximum "
      "intersecting sets of size 27 and rho = 9",
      threads);
  if (full)
    for (int cls : {1, 2})
      detail::add_density_row(
          t, build_psl2_char3(4, cls), Rational(3),
          "PSL(2,81) on cosets of a unipotent order-3 subgroup has rho = 3 "
          "for either conjugacy class of the generator",
          threads);

  for (uint32_t n : {3u, 4u, 5u})
    detail::add_density_row(
        t, build_e_rtimes_q(n), Rational(int64_t(n) + 1, 2),
        "Z_2^" + std::to_string(n) +
            " extended by its shift-and-shear group has maximum intersecting "
            "sets of size n + 1 on the order-2-stabilizer action",
        threads);

  for (uint32_t q : {9u, 25u, 27u}) {
    uint32_t p = 0, e = 0;
    if (!is_prime_power(q, p, e))
      throw std::logic_error("verify: agl1 row with a non-prime-power q");
    detail::add_density_row(
        t, build_agl1(q), Rational(int64_t(q / p)),
        "AGL(1," + std::to_string(q) +
            ") on cosets of an order-p translation subgroup has rho = q/p "
            "with the full translation subgroup as witness",
        threads);
  }

  for (uint32_t q : {9u, 25u, 49u, 81u}) {
    uint32_t p = 0, e = 0;
    if (!is_prime_power(q, p, e))
      throw std::logic_error("verify: paley row with a non-prime-power q");
    uint32_t root = 1;
    while (root * root < q) ++root;
    if (root * root != q)
      throw std::logic_error("verify: paley row needs a square q");
    detail::add_clique_row(
        t, "paley:" + std::to_string(q), paley_graph(p, e), root,
        Rational(int64_t(root)),
        "the Paley graph on " + std::to_string(q) +
            " vertices has clique number sqrt(q)",
        threads);
  }

  if (tamper && !t.rows.empty()) {
    VerifyRow& r = t.rows.front();
    r.expected = Rational(r.expected.num + r.expected.den, r.expected.den);
    r.match = (r.expected == r.computed);
  }

  for (const VerifyRow& r : t.rows) {
    t.all_match = t.all_match && r.match;
    t.total_seconds += r.seconds;
  }
  return t;
}

// CSV with the claim column quoted (group names contain commas).
inline std::string verify_csv(const VerifyTable& t) {
  std::ostringstream os;
  os << "id,quantity,expected,computed,match,seconds,claim\n";
  os << std::fixed << std::setprecision(3);
  for (const VerifyRow& r : t.rows)
    os << r.id << ',' << r.quantity << ',' << r.expected.to_string() << ','
       << r.computed.to_string() << ',' << (r.match ? "true" : "false") << ','
       << r.seconds << ",\"" << r.claim << "\"\n";
  return os.str();
}

inline nlohmann::json verify_to_json(const VerifyTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const VerifyRow& r : t.rows) {
    nlohmann::json j;
    j["id"] = r.id;
    j["quantity"] = r.quantity;
    j["expected"] = r.expected.to_string();
    j["computed"] = r.computed.to_string();
    j["match"] = r.match;
    j["seconds"] = r.seconds;
    j["claim"] = r.claim;
    rows.push_back(std::move(j));
  }
  nlohmann::json j;
  j["rows"] = std::move(rows);
  j["all_match"] = t.all_match;
  j["total_seconds"] = t.total_seconds;
  return j;
}

}  // namespace ekr
