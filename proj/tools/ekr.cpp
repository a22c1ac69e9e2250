// ekr: exact intersection densities of finite transitive permutation groups.
//
// Subcommands:
//   density       exact rho of a coset action, as a JSON report
//   clique        exact maximum clique of an edge-list graph
//   orbitals      orbital table of a coset action (pairing, connectivity, DOT)
//   construct     emit a family instance (group-spec JSON, fixer graph, Paley graph)
//   a111          class structure constant for an order-2-stabilizer action
//   charsum       character-sum criterion from a character-table file
//   verify-paper  recompute every pinned density and compare
//
// Exit codes: 0 success, 1 domain error (structured JSON on stdout), 2 usage.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ekr/field.hpp"
#include "ekr/io.hpp"
#include "ekr/psl2.hpp"
#include "ekr/verify.hpp"

namespace {

using nlohmann::json;
using namespace ekr;

// Shared group-source flags.  "paley" is accepted here so construct and the
// usage text stay uniform; commands that need a coset action reject it.
struct FamilyArgs {
  std::string family;
  uint32_t n = 0;
  std::string q;
  int cls = 1;
  std::string path;
  uint64_t group_cap = kDefaultGroupCap;
};

void add_family_flags(CLI::App* cmd, FamilyArgs& fa) {
  cmd->add_option("--family", fa.family,
                  "sym3 | psl2z3 | psl2char3 | agl1 | erq | paley | file")
      ->required()
      ->check(CLI::IsMember(
          {"sym3", "psl2z3", "psl2char3", "agl1", "erq", "paley", "file"}));
  cmd->add_option("--n", fa.n, "parameter n (sym3, psl2char3, erq)");
  cmd->add_option("--q", fa.q, "field size, an integer or p^e (psl2z3, agl1, paley)");
  cmd->add_option("--class", fa.cls, "order-3 class selector for psl2char3")
      ->check(CLI::Range(1, 2));
  cmd->add_option("--path", fa.path, "group-spec JSON file (family file)");
  cmd->add_option("--group-cap", fa.group_cap,
                  "abort group enumeration past this many elements");
}

// Accepts "25" or "5^2".
uint32_t parse_q(const std::string& s) {
  try {
    size_t caret = s.find('^');
    if (caret == std::string::npos) {
      unsigned long v = std::stoul(s);
      if (v < 2 || v > 1'000'000) throw std::out_of_range("q");
      return uint32_t(v);
    }
    unsigned long p = std::stoul(s.substr(0, caret));
    unsigned long e = std::stoul(s.substr(caret + 1));
    if (p < 2 || e < 1) throw std::out_of_range("q");
    uint64_t q = 1;
    for (unsigned long i = 0; i < e; ++i) {
      q *= p;
      if (q > 1'000'000) throw std::out_of_range("q");
    }
    return uint32_t(q);
  } catch (const std::exception&) {
    throw std::invalid_argument("--q " + s +
                                ": expected an integer or p^e, at most 10^6");
  }
}

Instance build_instance(const FamilyArgs& fa) {
  auto need_n = [&] {
    if (fa.n == 0)
      throw std::invalid_argument("--family " + fa.family + " needs --n");
    return fa.n;
  };
  auto need_q = [&] {
    if (fa.q.empty())
      throw std::invalid_argument("--family " + fa.family + " needs --q");
    return parse_q(fa.q);
  };
  if (fa.family == "sym3") return build_sym3(need_n());
  if (fa.family == "psl2z3") return build_psl2_z3(need_q());
  if (fa.family == "psl2char3") return build_psl2_char3(need_n(), fa.cls);
  if (fa.family == "agl1") return build_agl1(need_q());
  if (fa.family == "erq") return build_e_rtimes_q(need_n());
  if (fa.family == "file") {
    if (fa.path.empty()) throw std::invalid_argument("--family file needs --path");
    return load_group(fa.path, fa.group_cap);
  }
  throw std::invalid_argument("family " + fa.family +
                              " has no coset action; use construct or clique");
}

// q of the underlying field, for families that have one.
std::optional<uint32_t> family_q(const FamilyArgs& fa) {
  if (fa.family == "psl2z3" || fa.family == "agl1" || fa.family == "paley")
    return parse_q(fa.q);
  if (fa.family == "psl2char3") {
    uint32_t q = 1;
    for (uint32_t i = 0; i < fa.n; ++i) q *= 3;
    return q;
  }
  return std::nullopt;
}

// Field naming for reports: q, "p^e", and the concrete modulus polynomial.
void echo_field(json& out, uint32_t q) {
  uint32_t p = 0, e = 0;
  if (!is_prime_power(q, p, e)) return;
  out["q"] = q;
  out["field"] = std::to_string(p) + "^" + std::to_string(e);
  out["modulus"] = Field(p, e).modulus_string();
}

void echo_instance(json& out, const Instance& inst, const FamilyArgs& fa) {
  out["id"] = inst.id;
  if (auto q = family_q(fa)) echo_field(out, *q);
  if (fa.family == "psl2char3") out["class"] = fa.cls;
  out["fixer_count"] = inst.fixers.size();
  if (!inst.notes.empty()) out["notes"] = inst.notes;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_file(out_path, j.dump(2) + "\n");
}

// The induced action on the cosets of the designated subgroup,
// materializing it when the builder did not.
FiniteGroup coset_image_of(const Instance& inst, uint64_t group_cap) {
  if (inst.coset_image) return *inst.coset_image;
  FiniteGroup G = inst.substrate_group
                      ? *inst.substrate_group
                      : enumerate_group(inst.substrate_gens, group_cap);
  FiniteGroup H = enumerate_group(inst.h_gens);
  std::vector<uint32_t> hpos;
  hpos.reserve(H.order());
  for (const Perm& h : H.elements) hpos.push_back(G.position_of(h));
  std::sort(hpos.begin(), hpos.end());
  CosetAction ca = coset_action(G, hpos);
  return std::move(ca.image);
}

// A non-identity element of the stabilizer of point 0.
Perm point_fixer(const FiniteGroup& image) {
  for (uint32_t i : stabilizer(image, 0))
    if (i != 0) return image.elements[i];
  throw std::invalid_argument("the point stabilizer is trivial; nothing to test");
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
  FamilyArgs fa;
  int threads = 0;
  size_t hint = 0;
  uint64_t enum_cap = 100000;
  uint64_t explicit_cap = 1024;
  bool force_fixer = false;
  bool force_explicit = false;
  bool csv = false;
  std::string out;
};

int run_density(const DensityArgs& a) {
  Instance inst = build_instance(a.fa);
  DensityOptions opts;
  opts.threads = a.threads;
  if (a.hint > 0) opts.hint = a.hint;
  opts.enum_cap = a.enum_cap;
  opts.explicit_cap = a.explicit_cap;
  opts.force_fixer = a.force_fixer;
  opts.force_explicit = a.force_explicit;
  DensityReport rep = density_for_instance(inst, opts);

  if (a.csv)
    std::cout << report_csv_header() << "\n" << report_csv_row(rep) << "\n";
  json out = report_to_json(rep);
  echo_instance(out, inst, a.fa);
  if (!a.csv || !a.out.empty()) emit(out, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// clique

struct CliqueArgs {
  std::string graph;
  size_t hint = 0;
  int threads = 0;
  bool enumerate = false;
  uint64_t enum_cap = 100000;
  std::string out;
};

int run_clique(const CliqueArgs& a) {
  BitGraph g = load_edge_list(a.graph);
  std::optional<size_t> hint;
  if (a.hint > 0) hint = a.hint;
  CliqueResult res = max_clique(g, hint, unsigned(std::max(0, a.threads)));

  json out;
  out["graph"] = detail::basename_of(a.graph);
  out["n"] = g.size();
  out["m"] = g.edge_count();
  out["omega"] = res.omega;
  out["witness"] = res.witness;
  out["node_count"] = res.node_count;
  out["elapsed_seconds"] = res.elapsed_seconds;
  if (a.enumerate) {
    CliqueEnumeration en = enumerate_maximum_cliques(g, res.omega, a.enum_cap);
    out["maximum_clique_count"] = en.cliques.size();
    out["enumeration_truncated"] = en.truncated;
    out["cliques"] = en.cliques;
  }
  emit(out, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// orbitals

struct OrbitalsArgs {
  FamilyArgs fa;
  uint64_t degree_cap = 4096;
  std::string dot;
  std::string out;
};

int run_orbitals(const OrbitalsArgs& a) {
  Instance inst = build_instance(a.fa);
  FiniteGroup image = coset_image_of(inst, a.fa.group_cap);
  if (image.degree > a.degree_cap)
    throw std::runtime_error("coset degree " + std::to_string(image.degree) +
                             " exceeds --degree-cap " + std::to_string(a.degree_cap));

  std::vector<OrbitalDigraph> orbs = orbitals(image);
  json rows = json::array();
  std::ostringstream dot;
  for (size_t i = 0; i < orbs.size(); ++i) {
    const OrbitalDigraph& orb = orbs[i];
    json row;
    row["index"] = i;
    row["representative"] =
        json::array({unsigned(orb.representative.first), unsigned(orb.representative.second)});
    row["arcs"] = orb.arcs.size();
    row["subdegree"] = orb.arcs.size() / image.degree;
    row["trivial"] = orb.trivial;
    if (orb.trivial) {
      row["self_paired"] = nullptr;
      row["connected"] = nullptr;
    } else {
      row["self_paired"] = is_self_paired(image, orb);
      row["connected"] = is_connected_orbital(image, orb);
    }
    rows.push_back(std::move(row));
    if (!a.dot.empty()) dot << orbital_to_dot(orb, "orb" + std::to_string(i));
  }
  if (!a.dot.empty()) write_file(a.dot, dot.str());

  json out;
  echo_instance(out, inst, a.fa);
  out["degree"] = image.degree;
  out["group_order"] = image.order();
  out["orbital_count"] = orbs.size();
  out["orbitals"] = std::move(rows);
  emit(out, a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// construct

struct ConstructArgs {
  FamilyArgs fa;
  std::string out;
  std::string graph_out;
};

int run_construct(const ConstructArgs& a) {
  if (a.fa.family == "paley") {
    if (a.fa.q.empty()) throw std::invalid_argument("--family paley needs --q");
    uint32_t q = parse_q(a.fa.q);
    uint32_t p = 0, e = 0;
    if (!is_prime_power(q, p, e))
      throw std::invalid_argument("paley: q must be a prime power, got " +
                                  std::to_string(q));
    BitGraph g = paley_graph(p, e);
    json out = graph_summary(g);
    out["id"] = "paley:" + std::to_string(q);
    echo_field(out, q);
    // The only artifact here is the edge list, so both output flags mean it.
    if (!a.out.empty() && !a.graph_out.empty())
      throw std::invalid_argument("paley: give --out or --graph-out, not both");
    const std::string& edge_path = a.out.empty() ? a.graph_out : a.out;
    if (!edge_path.empty()) {
      write_file(edge_path, graph_to_edge_list(g));
      out["edge_list"] = edge_path;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  Instance inst = build_instance(a.fa);
  json out;
  echo_instance(out, inst, a.fa);
  out["group_order"] = inst.group_order;
  out["stabilizer_order"] = inst.stabilizer_order;
  out["action_degree"] = inst.action_degree;
  out["substrate_degree"] = inst.substrate_degree;
  if (inst.clique_hint) out["clique_hint"] = *inst.clique_hint;
  if (!a.out.empty()) {
    save_group(inst, a.out);
    out["group_spec"] = a.out;
  }
  if (!a.graph_out.empty()) {
    BitGraph fg = inst.fixer_graph ? *inst.fixer_graph
                                   : fixer_neighborhood_graph(inst.fixers);
    write_file(a.graph_out, graph_to_edge_list(fg));
    out["fixer_graph"] = graph_summary(fg);
    out["fixer_graph"]["file"] = a.graph_out;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// a111

int run_a111(const FamilyArgs& fa, const std::string& out_path) {
  Instance inst = build_instance(fa);
  FiniteGroup image = coset_image_of(inst, fa.group_cap);
  Perm g = point_fixer(image);
  uint64_t a = class_constant_a111(image, g);

  json out;
  echo_instance(out, inst, fa);
  out["group_order"] = image.order();
  out["degree"] = image.degree;
  out["stabilizer_order"] = image.order() / image.degree;
  out["class_size"] = conjugacy_class(image.generators, g).size();
  out["a111"] = a;
  out["ekr"] = (a == 0);
  emit(out, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// charsum

int run_charsum(const FamilyArgs& fa, const std::string& table_path,
                const std::string& out_path) {
  Instance inst = build_instance(fa);
  FiniteGroup image = coset_image_of(inst, fa.group_cap);
  Perm g = point_fixer(image);
  CharTable table = load_char_table(table_path);
  CharSumResult r = character_sum_check(image, g, table);

  json out;
  echo_instance(out, inst, fa);
  out["group_order"] = image.order();
  out["degree"] = image.degree;
  out["sum"] = json::array({r.sum.real(), r.sum.imag()});
  out["ekr"] = r.ekr;
  out["a111_direct"] = r.a111_direct;
  out["a111_from_table"] = r.a111_from_table;
  emit(out, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// verify-paper

struct VerifyArgs {
  bool quick = false;
  bool full = false;
  bool tamper = false;
  int threads = 0;
  std::string csv;
  std::string json_out;
};

int run_verify(const VerifyArgs& a) {
  VerifyTable t =
      verify_reproduction(a.full, unsigned(std::max(0, a.threads)), a.tamper);
  std::string csv = verify_csv(t);
  std::cout << csv;

  size_t mismatched = 0;
  for (const VerifyRow& r : t.rows)
    if (!r.match) ++mismatched;
  std::cerr << std::fixed << std::setprecision(1);
  if (t.all_match)
    std::cerr << "all " << t.rows.size() << " rows match in " << t.total_seconds
              << " s\n";
  else
    std::cerr << mismatched << " of " << t.rows.size() << " rows MISMATCH\n";

  if (!a.csv.empty()) write_file(a.csv, csv);
  if (!a.json_out.empty()) write_file(a.json_out, verify_to_json(t).dump(2) + "\n");
  return t.all_match ? 0 : 1;
}

int fail_json(const std::string& kind, const std::string& message) {
  json err;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  std::cout << err.dump(2) << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact intersection densities of transitive permutation groups"};
  app.require_subcommand(1);

  DensityArgs da;
  CLI::App* density = app.add_subcommand(
      "density", "exact intersection density of a coset action");
  add_family_flags(density, da.fa);
  density->add_option("--threads", da.threads, "clique workers (0 = all cores)");
  density->add_option("--hint", da.hint, "known clique lower bound for the fixer graph");
  density->add_option("--enum-cap", da.enum_cap,
                      "stop enumerating maximum cliques past this many");
  density->add_option("--explicit-cap", da.explicit_cap,
                      "explicit-graph route for groups up to this order");
  density->add_flag("--force-fixer", da.force_fixer,
                    "take the fixer-neighborhood route regardless of size");
  density->add_flag("--force-explicit", da.force_explicit,
                    "build the full derangement-complement graph");
  density->add_flag("--csv", da.csv, "print the report as a CSV row");
  density->add_option("--out", da.out, "write the JSON report here instead of stdout");

  CliqueArgs ca;
  CLI::App* clique =
      app.add_subcommand("clique", "exact maximum clique of an edge-list graph");
  clique->add_option("--graph", ca.graph,
                     "edge-list file: first line \"n m\", then one \"u v\" per edge")
      ->required();
  clique->add_flag("--enumerate", ca.enumerate, "list every maximum clique");
  clique->add_option("--hint", ca.hint, "known clique lower bound");
  clique->add_option("--threads", ca.threads, "workers (0 = all cores)");
  clique->add_option("--enum-cap", ca.enum_cap,
                     "stop enumerating maximum cliques past this many");
  clique->add_option("--out", ca.out, "write the JSON report here instead of stdout");

  OrbitalsArgs oa;
  CLI::App* orbitals_cmd = app.add_subcommand(
      "orbitals", "orbital table of a coset action, with pairing and connectivity");
  add_family_flags(orbitals_cmd, oa.fa);
  orbitals_cmd->add_option("--degree-cap", oa.degree_cap,
                           "refuse coset actions past this degree");
  orbitals_cmd->add_option("--dot", oa.dot, "write every orbital digraph as DOT here");
  orbitals_cmd->add_option("--out", oa.out, "write the JSON table here instead of stdout");

  ConstructArgs na;
  CLI::App* construct = app.add_subcommand(
      "construct", "build a family instance and emit its artifacts");
  add_family_flags(construct, na.fa);
  construct->add_option("--out", na.out,
                        "write the group-spec JSON (or Paley edge list) here");
  construct->add_option("--graph-out", na.graph_out,
                        "write the fixer-neighborhood (or Paley) graph edge list here");

  FamilyArgs aa;
  std::string a111_out;
  CLI::App* a111 = app.add_subcommand(
      "a111", "class structure constant of an order-2-stabilizer action");
  add_family_flags(a111, aa);
  a111->add_option("--out", a111_out, "write the JSON report here instead of stdout");

  FamilyArgs sa;
  std::string charsum_table, charsum_out;
  CLI::App* charsum = app.add_subcommand(
      "charsum", "character-sum criterion for an order-2-stabilizer action");
  add_family_flags(charsum, sa);
  charsum->add_option("--table", charsum_table, "character-table JSON file")->required();
  charsum->add_option("--out", charsum_out, "write the JSON report here instead of stdout");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify-paper", "recompute every pinned density and compare");
  CLI::Option* vq = verify->add_flag("--quick", va.quick,
                                     "skip PSL(2,25) and PSL(2,81) (the default)");
  verify->add_flag("--full", va.full, "include the expensive groups")->excludes(vq);
  verify->add_flag("--tamper", va.tamper,
                   "corrupt one expected value; the run must then fail");
  verify->add_option("--threads", va.threads, "clique workers (0 = all cores)");
  verify->add_option("--csv", va.csv, "also write the CSV table here");
  verify->add_option("--json", va.json_out, "also write the JSON table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (density->parsed()) return run_density(da);
    if (clique->parsed()) return run_clique(ca);
    if (orbitals_cmd->parsed()) return run_orbitals(oa);
    if (construct->parsed()) return run_construct(na);
    if (a111->parsed()) return run_a111(aa, a111_out);
    if (charsum->parsed()) return run_charsum(sa, charsum_table, charsum_out);
    if (verify->parsed()) return run_verify(va);
  } catch (const std::invalid_argument& e) {
    return fail_json("invalid_argument", e.what());
  } catch (const std::runtime_error& e) {
    return fail_json("runtime_error", e.what());
  } catch (const std::logic_error& e) {
    return fail_json("internal_check", e.what());
  } catch (const std::exception& e) {
    return fail_json("error", e.what());
  }
  return 2;
}
