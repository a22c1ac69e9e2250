#pragma once
// File formats: group-spec JSON, character-table JSON, density reports
// (JSON and CSV), edge-list graphs, and DOT export for orbital digraphs.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekr/constructions.hpp"
#include "ekr/density.hpp"
#include "ekr/graphs.hpp"
#include "ekr/group.hpp"
#include "ekr/perm.hpp"

namespace ekr {

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline std::string basename_of(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string name = (slash == std::string::npos) ? path : path.substr(slash + 1);
  size_t dot = name.rfind('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

inline Perm perm_from_json(const nlohmann::json& arr, size_t degree,
                           const std::string& what) {
  if (!arr.is_array() || arr.size() != degree)
    throw std::invalid_argument(what + ": expected an image array of length " +
                                std::to_string(degree));
  std::vector<Point> img;
  img.reserve(degree);
  for (const auto& v : arr) {
    if (!v.is_number_unsigned() || v.get<uint64_t>() >= degree)
      throw std::invalid_argument(what + ": image out of range");
    img.push_back(Point(v.get<uint64_t>()));
  }
  try {
    return Perm(std::move(img));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

}  // namespace detail

// Group-spec JSON: { "degree": n, "generators": [[images...], ...],
// "subgroup": [[images...], ...] | {"point": v, "order": k} } with 0-based
// images.  "subgroup" lists the designated subgroup H element by element;
// the {point, order} form selects the first order-k element of the
// stabilizer of v in enumeration order and takes the cyclic group it
// generates.  Without "subgroup" the file describes the action as given and
// H is the point stabilizer itself.
inline Instance load_group(const std::string& path,
                           uint64_t group_cap = kDefaultGroupCap) {
  nlohmann::json j = detail::read_json_file(path);
  if (!j.is_object()) throw std::invalid_argument(path + ": expected an object");
  if (!j.contains("degree") || !j["degree"].is_number_unsigned())
    throw std::invalid_argument(path + ": missing degree");
  uint64_t degree = j["degree"].get<uint64_t>();
  if (degree == 0 || degree > 65535)
    throw std::invalid_argument(path + ": degree must be in 1..65535");

  if (!j.contains("generators") || !j["generators"].is_array() ||
      j["generators"].empty())
    throw std::invalid_argument(path + ": missing generators");
  std::vector<Perm> gens;
  for (const auto& g : j["generators"])
    gens.push_back(detail::perm_from_json(g, degree, path + ": generator"));

  FiniteGroup G = enumerate_group(gens, group_cap);

  Instance inst;
  inst.id = "file:" + detail::basename_of(path);
  inst.group_order = G.order();
  inst.substrate_gens = G.generators;
  inst.substrate_degree = degree;

  std::vector<uint32_t> h_positions;
  if (!j.contains("subgroup")) {
    // The action itself is the coset action; H = the stabilizer of point 0.
    h_positions = stabilizer(G, 0);
    inst.coset_image = G;
    inst.coset_image->designated_subgroup = h_positions;
  } else if (j["subgroup"].is_array()) {
    for (const auto& h : j["subgroup"]) {
      Perm p = detail::perm_from_json(h, degree, path + ": subgroup element");
      h_positions.push_back(G.position_of(p));  // throws if not in the group
    }
    std::sort(h_positions.begin(), h_positions.end());
    h_positions.erase(std::unique(h_positions.begin(), h_positions.end()),
                      h_positions.end());
    if (!is_subgroup(G, h_positions))
      throw std::invalid_argument(path + ": subgroup field is not a subgroup");
  } else if (j["subgroup"].is_object()) {
    const auto& sel = j["subgroup"];
    if (!sel.contains("point") || !sel.contains("order") ||
        !sel["point"].is_number_unsigned() || !sel["order"].is_number_unsigned())
      throw std::invalid_argument(path + ": subgroup selector needs point and order");
    uint64_t v = sel["point"].get<uint64_t>();
    uint64_t k = sel["order"].get<uint64_t>();
    if (v >= degree) throw std::invalid_argument(path + ": subgroup point out of range");
    Perm found;
    bool ok = false;
    for (uint32_t i : stabilizer(G, Point(v)))
      if (element_order(G.elements[i]) == k) {
        found = G.elements[i];
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument(path + ": stabilizer of the point has no element of order " +
                                  std::to_string(k));
    Perm acc = found;
    while (!acc.is_identity()) {
      h_positions.push_back(G.position_of(acc));
      acc = compose(acc, found);
    }
    h_positions.push_back(0);
    std::sort(h_positions.begin(), h_positions.end());
  } else {
    throw std::invalid_argument(path + ": subgroup must be an array or a selector object");
  }

  inst.stabilizer_order = h_positions.size();
  if (inst.group_order % inst.stabilizer_order != 0)
    throw std::logic_error(path + ": subgroup order does not divide the group order");
  inst.action_degree = inst.group_order / inst.stabilizer_order;

  for (uint32_t i : h_positions)
    if (i != 0) inst.h_gens.push_back(G.elements[i]);
  if (inst.h_gens.empty()) inst.h_gens.push_back(Perm::identity(degree));

  // Fixer set of the coset action: the union of the conjugacy classes of
  // the nontrivial elements of H.
  {
    std::unordered_set<Perm, PermHash> seen;
    for (uint32_t i : h_positions) {
      if (i == 0) continue;
      for (const Perm& c : conjugacy_class(G.generators, G.elements[i]))
        if (seen.insert(c).second) inst.fixers.push_back(c);
    }
    std::sort(inst.fixers.begin(), inst.fixers.end());
  }

  // Materialize the coset action when it is comfortably small; the explicit
  // route then cross-checks the fixer computation.
  if (!inst.coset_image &&
      inst.group_order * inst.action_degree <= uint64_t(20'000'000)) {
    CosetAction ca = coset_action(G, h_positions);
    inst.coset_image = std::move(ca.image);
  }
  inst.substrate_group = std::move(G);
  return inst;
}

// Emit a group-spec file for the instance: generators of the substrate
// action plus the designated subgroup listed element by element.
inline void save_group(const Instance& inst, const std::string& path) {
  nlohmann::json j;
  j["degree"] = inst.substrate_degree;
  nlohmann::json gens = nlohmann::json::array();
  for (const Perm& g : inst.substrate_gens) {
    nlohmann::json arr = nlohmann::json::array();
    for (Point v = 0; v < g.degree(); ++v) arr.push_back(uint64_t(g(v)));
    gens.push_back(std::move(arr));
  }
  j["generators"] = std::move(gens);

  FiniteGroup H = enumerate_group(inst.h_gens);
  nlohmann::json sub = nlohmann::json::array();
  for (const Perm& h : H.elements) {
    nlohmann::json arr = nlohmann::json::array();
    for (Point v = 0; v < h.degree(); ++v) arr.push_back(uint64_t(h(v)));
    sub.push_back(std::move(arr));
  }
  j["subgroup"] = std::move(sub);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(1) << "\n";
}

// Character-table JSON: { "classes": [{"size": n, "rep_order": k}, ...],
// "chars": [[[re, im], ...], ...], "g_class": optional column index }.
inline CharTable load_char_table(const std::string& path) {
  nlohmann::json j = detail::read_json_file(path);
  CharTable t;
  if (!j.is_object() || !j.contains("classes") || !j.contains("chars"))
    throw std::invalid_argument(path + ": expected classes and chars");
  for (const auto& c : j["classes"]) {
    if (!c.is_object() || !c.contains("size") || !c.contains("rep_order"))
      throw std::invalid_argument(path + ": class needs size and rep_order");
    t.classes.push_back({c["size"].get<uint64_t>(), c["rep_order"].get<uint64_t>()});
  }
  for (const auto& row : j["chars"]) {
    if (!row.is_array()) throw std::invalid_argument(path + ": chars row is not an array");
    std::vector<std::complex<double>> r;
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2)
        throw std::invalid_argument(path + ": character value is not [re, im]");
      r.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    t.chars.push_back(std::move(r));
  }
  if (j.contains("g_class")) {
    if (!j["g_class"].is_number_unsigned())
      throw std::invalid_argument(path + ": g_class must be a column index");
    t.g_class = j["g_class"].get<size_t>();
  }
  return t;
}

// ---------------------------------------------------------------------------
// Density reports.

inline nlohmann::json report_to_json(const DensityReport& rep) {
  nlohmann::json j;
  j["id"] = rep.id;
  j["group_order"] = rep.group_order;
  j["degree"] = rep.degree;
  j["stabilizer_order"] = rep.stabilizer_order;
  j["omega"] = rep.omega;
  j["rho"] = rep.rho.to_string();
  j["rho_num"] = rep.rho.num;
  j["rho_den"] = rep.rho.den;
  j["ekr"] = rep.ekr;
  j["strict_ekr"] = rep.strict_ekr;
  j["route"] = rep.route;
  j["clique_nodes"] = rep.clique_nodes;
  j["clique_seconds"] = rep.clique_seconds;
  j["basic_sets_examined"] = rep.basic_sets_examined;
  j["enumeration_truncated"] = rep.enumeration_truncated;
  nlohmann::json w = nlohmann::json::array();
  for (const Perm& p : rep.witness) {
    nlohmann::json arr = nlohmann::json::array();
    for (Point v = 0; v < p.degree(); ++v) arr.push_back(uint64_t(p(v)));
    w.push_back(std::move(arr));
  }
  j["witness"] = std::move(w);
  return j;
}

inline DensityReport report_from_json(const nlohmann::json& j) {
  DensityReport rep;
  rep.id = j.at("id").get<std::string>();
  rep.group_order = j.at("group_order").get<uint64_t>();
  rep.degree = j.at("degree").get<uint64_t>();
  rep.stabilizer_order = j.at("stabilizer_order").get<uint64_t>();
  rep.omega = j.at("omega").get<uint64_t>();
  rep.rho = Rational(j.at("rho_num").get<int64_t>(), j.at("rho_den").get<int64_t>());
  if (rep.rho.to_string() != j.at("rho").get<std::string>())
    throw std::invalid_argument("report: rho string disagrees with rho_num/rho_den");
  rep.ekr = j.at("ekr").get<bool>();
  rep.strict_ekr = j.at("strict_ekr").get<std::string>();
  rep.route = j.at("route").get<std::string>();
  rep.clique_nodes = j.at("clique_nodes").get<uint64_t>();
  rep.clique_seconds = j.at("clique_seconds").get<double>();
  rep.basic_sets_examined = j.at("basic_sets_examined").get<uint64_t>();
  rep.enumeration_truncated = j.at("enumeration_truncated").get<bool>();
  for (const auto& arr : j.at("witness")) {
    std::vector<Point> img;
    for (const auto& v : arr) img.push_back(Point(v.get<uint64_t>()));
    rep.witness.push_back(Perm(std::move(img)));
  }
  return rep;
}

inline std::string report_csv_header() {
  return "group,group_order,degree,stabilizer_order,omega,rho_num,rho_den,ekr,strict_ekr";
}

inline std::string report_csv_row(const DensityReport& rep) {
  std::ostringstream os;
  os << rep.id << ',' << rep.group_order << ',' << rep.degree << ','
     << rep.stabilizer_order << ',' << rep.omega << ',' << rep.rho.num << ','
     << rep.rho.den << ',' << (rep.ekr ? "true" : "false") << ',' << rep.strict_ekr;
  return os.str();
}

// ---------------------------------------------------------------------------
// Graph export/import.  Line format: first line "n m", then one "u v" line
// per edge.

inline std::string graph_to_edge_list(const BitGraph& g) {
  std::ostringstream os;
  os << g.size() << ' ' << g.edge_count() << '\n';
  for (uint32_t u = 0; u < g.size(); ++u)
    for (uint32_t v : g.neighbors(u))
      if (v > u) os << u << ' ' << v << '\n';
  return os.str();
}

inline BitGraph graph_from_edge_list(std::istream& in) {
  size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("edge list: missing n m header");
  BitGraph g(n);
  for (size_t i = 0; i < m; ++i) {
    uint64_t u = 0, v = 0;
    if (!(in >> u >> v)) throw std::invalid_argument("edge list: truncated");
    if (u >= n || v >= n || u == v)
      throw std::invalid_argument("edge list: bad edge " + std::to_string(u) + " " +
                                  std::to_string(v));
    g.add_edge(uint32_t(u), uint32_t(v));
  }
  if (g.edge_count() != m)
    throw std::invalid_argument("edge list: duplicate edges");
  return g;
}

inline BitGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return graph_from_edge_list(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline nlohmann::json graph_summary(const BitGraph& g) {
  nlohmann::json j;
  j["n"] = g.size();
  j["m"] = g.edge_count();
  int64_t rd = g.regular_degree();
  if (rd >= 0)
    j["regular_degree"] = rd;
  else
    j["regular_degree"] = nullptr;
  j["labels"] = g.labels;
  return j;
}

inline std::string orbital_to_dot(const OrbitalDigraph& orb,
                                  const std::string& name = "orbital") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (const auto& [u, v] : orb.arcs) os << "  " << u << " -> " << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ekr
