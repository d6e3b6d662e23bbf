#pragma once

// JSON and DOT encodings of idempotents, tables, complexes and reports.

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghc/biorder.hpp"
#include "ghc/complex.hpp"
#include "ghc/cover.hpp"
#include "ghc/errors.hpp"
#include "ghc/grouppres.hpp"
#include "ghc/linmonoid.hpp"
#include "ghc/smith.hpp"

namespace ghc::io {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const gf::Matrix& m) { return m.to_rows(); }

inline Json idempotent_to_json(std::size_t n, std::uint32_t q,
                               const linmonoid::IdempotentRecord& r) {
  return Json{{"n", n},
              {"q", q},
              {"k", r.rank},
              {"matrix", matrix_to_json(r.matrix)},
              {"v", matrix_to_json(r.v)},
              {"wT", matrix_to_json(r.wT)},
              {"rclass", r.rclass},
              {"lclass", r.lclass}};
}

inline Json idempotents_to_json(std::size_t n, std::uint32_t q,
                                const std::vector<linmonoid::IdempotentRecord>& recs) {
  Json out = Json::array();
  for (const auto& r : recs) out.push_back(idempotent_to_json(n, q, r));
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

/// {"size": m, "table": [row-major, 0-based]}
inline biorder::SemigroupTable table_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("table"))
    throw InvalidInput("table JSON needs fields size and table");
  biorder::SemigroupTable t;
  t.size = j.at("size").get<std::size_t>();
  for (const auto& v : j.at("table")) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw InvalidInput("table entries must be non-negative integers");
    t.table.push_back(v.get<std::size_t>());
  }
  if (t.table.size() != t.size * t.size)
    throw InvalidInput("table has " + std::to_string(t.table.size()) + " entries, expected " +
                       std::to_string(t.size * t.size));
  return t;
}

inline Json table_to_json(const biorder::SemigroupTable& t) {
  return Json{{"size", t.size}, {"table", t.table}};
}

inline Json invariants_to_json(const smith::AbelianInvariants& a) {
  return Json{{"free_rank", a.free_rank}, {"torsion", a.torsion}};
}

inline Json presentation_to_json(const grouppres::Presentation& p) {
  return Json{{"generators", p.generators}, {"relators", p.relators}};
}

inline const char* side_name(complex::Side s) { return s == complex::Side::L ? "L" : "R"; }

/// Vertices, edges and cells only; enough to rebuild the complex.
inline Json skeleton_to_json(const complex::Complex2& c) {
  Json vertices = Json::array(), edges = Json::array(), cells = Json::array();
  for (std::size_t v = 0; v < c.vertices().size(); ++v)
    vertices.push_back(
        {{"id", v}, {"side", side_name(c.vertices()[v].side)}, {"label", c.vertices()[v].label}});
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edges()[e];
    edges.push_back(
        {{"id", e}, {"source", edge.source}, {"target", edge.target}, {"label", edge.label}});
  }
  for (const auto& cell : c.cells()) cells.push_back({{"edges", cell.edges}, {"signs", cell.signs}});
  return Json{{"vertices", vertices}, {"edges", edges}, {"cells", cells}};
}

inline complex::Complex2 complex_from_json(const Json& j) {
  complex::Complex2 c;
  try {
    for (const auto& v : j.at("vertices")) {
      const auto side = v.at("side").get<std::string>();
      if (side != "L" && side != "R") throw InvalidInput("vertex side must be L or R");
      c.add_vertex(side == "L" ? complex::Side::L : complex::Side::R,
                   v.value("label", std::string{}));
    }
    for (const auto& e : j.at("edges"))
      c.add_edge(e.at("source").get<std::size_t>(), e.at("target").get<std::size_t>(),
                 e.value("label", std::string{}));
    for (const auto& cell : j.at("cells")) {
      complex::Cell x;
      x.edges = cell.at("edges").get<std::array<std::size_t, 4>>();
      x.signs = cell.at("signs").get<std::array<int, 4>>();
      c.add_cell(x);
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("complex JSON: ") + e.what());
  }
  return c;
}

/// Per-component chi, pi_1 presentation and H_1.
inline Json component_reports(const complex::Complex2& c, const complex::Components& comp) {
  Json out = Json::array();
  for (std::size_t id = 0; id < comp.count; ++id) {
    const auto counts = complex::count_component(c, comp, id);
    const auto bp = complex::default_basepoint(c, comp, id);
    const auto tree = complex::spanning_tree(c, comp, id, bp);
    const auto pres = complex::pi1_presentation(c, comp, id, bp, tree);
    out.push_back({{"id", id},
                   {"vertices", counts.vertices},
                   {"edges", counts.edges},
                   {"cells", counts.cells},
                   {"chi", complex::euler_characteristic(c, comp, id)},
                   {"basepoint", bp},
                   {"pi1", presentation_to_json(pres.presentation)},
                   {"pi1_abelianized", invariants_to_json(grouppres::abelian_invariants(pres.presentation))},
                   {"h1", invariants_to_json(complex::h1_abelian_invariants(c, comp, id))}});
  }
  return out;
}

/// {vertices, edges, cells, components, pi1, h1, chi} with pi1/h1/chi taken
/// from component 0 and the full list under component_reports.
inline Json complex_report(const complex::Complex2& c) {
  Json j = skeleton_to_json(c);
  const auto comp = complex::components(c);
  j["components"] = comp.count;
  auto reports = component_reports(c, comp);
  if (!reports.empty()) {
    j["pi1"] = reports[0]["pi1"];
    j["h1"] = reports[0]["h1"];
    j["chi"] = reports[0]["chi"];
  } else {
    j["pi1"] = presentation_to_json({});
    j["h1"] = invariants_to_json({});
    j["chi"] = 0;
  }
  j["component_reports"] = std::move(reports);
  return j;
}

inline Json squares_to_json(const biorder::BiorderedSet& E,
                            const std::vector<complex::SquareVerdict>& verdicts) {
  Json out = Json::array();
  for (const auto& v : verdicts) {
    Json s{{"e", v.square.e},
           {"f", v.square.f},
           {"g", v.square.g},
           {"h", v.square.h},
           {"band", v.band},
           {"singular", v.witness.has_value()}};
    if (E.backend() == biorder::Backend::MatrixMonoid)
      s["star_identity"] = biorder::star_identity_holds(v.square, E);
    if (v.witness)
      s["witness"] = {{"t", E.label(v.witness->t)},
                      {"direction", biorder::to_string(v.witness->direction)}};
    out.push_back(std::move(s));
  }
  return out;
}

/// L-vertices as boxes, R-vertices as circles; edges marked green drawn green.
inline std::string to_dot(const complex::Complex2& c, const std::vector<bool>& green = {}) {
  std::ostringstream os;
  os << "graph GH {\n";
  for (std::size_t v = 0; v < c.vertices().size(); ++v) {
    const auto& vx = c.vertices()[v];
    os << "  v" << v << " [shape=" << (vx.side == complex::Side::L ? "box" : "circle")
       << ", label=\"" << vx.label << "\"];\n";
  }
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edges()[e];
    os << "  v" << edge.source << " -- v" << edge.target << " [label=\"" << edge.label << "\"";
    if (e < green.size() && green[e]) os << ", color=green";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline Json report_to_json(const cover::Report& r, bool with_timings) {
  Json base{{"V", r.base_vertices},
            {"E", r.base_edges},
            {"F", r.base_cells},
            {"components", r.base_components}};
  Json summaries = Json::array();
  for (const auto& s : r.base_component_summaries)
    summaries.push_back({{"V", s.vertices},
                         {"E", s.edges},
                         {"F", s.cells},
                         {"chi", s.chi},
                         {"h1", invariants_to_json(s.h1)},
                         {"pi1_abelianized", invariants_to_json(s.pi1_abelianized)},
                         {"pi1_generators", s.pi1_generators},
                         {"pi1_relators", s.pi1_relators}});
  base["component_summaries"] = std::move(summaries);

  Json j{{"n", r.n}, {"q", r.q}, {"k", r.k}, {"mode", r.mode}, {"base", base}};
  if (r.has_cover) {
    const auto& sc = r.simply_connected;
    j["cover"] = {{"V", r.cover_vertices},
                  {"E", r.cover_edges},
                  {"F", r.cover_cells},
                  {"connected", r.connected.by_subgroup && r.connected.by_reachability},
                  {"connected_by_subgroup", r.connected.by_subgroup},
                  {"connected_by_reachability", r.connected.by_reachability},
                  {"axioms",
                   {{"vertex_count", r.axioms.vertex_count},
                    {"star_bijective", r.axioms.star_bijective},
                    {"cell_lifts", r.axioms.cell_lifts},
                    {"euler", r.axioms.euler},
                    {"fiber_collapse", r.axioms.fiber_collapse},
                    {"free_action", r.axioms.free_action}}},
                  {"all_green", sc.all_green},
                  {"green_edges", sc.green_edges},
                  {"method", sc.method}};
  } else {
    j["cover"] = nullptr;
  }
  j["voltages_ok"] = r.voltages_ok;
  j["verdict"] = r.verdict;
  j["group"] = {{"order", r.group_order}, {"invariants", invariants_to_json(r.group_invariants)}};
  if (r.mode == "free") j["free_rank"] = r.free_rank;
  Json evidence{{"h1", r.has_cover ? invariants_to_json(r.simply_connected.h1)
                                   : invariants_to_json(r.base_component_summaries.empty()
                                                            ? smith::AbelianInvariants{}
                                                            : r.base_component_summaries[0].h1)}};
  if (r.has_cover) {
    const auto& sc = r.simply_connected;
    evidence["presentation_size"] = {{"generators", sc.generators},
                                     {"relators", sc.relators},
                                     {"simplified_generators", sc.simplified_generators},
                                     {"simplified_relators", sc.simplified_relators}};
    evidence["pi1_abelianized"] = invariants_to_json(sc.presentation_abelianized);
    evidence["tietze_trivial"] = sc.tietze_trivial;
    evidence["tietze_budget_exceeded"] = sc.tietze_budget_exceeded;
  } else {
    evidence["presentation_size"] = nullptr;
  }
  j["evidence"] = std::move(evidence);
  j["warnings"] = r.warnings;
  if (with_timings) j["timings"] = r.timings_ms;
  return j;
}

}  // namespace ghc::io
