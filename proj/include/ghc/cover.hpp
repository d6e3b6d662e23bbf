#pragma once

// Group-labelled (voltage) covers of square complexes, covering-axiom checks,
// and the simple-connectivity pipeline that identifies maximal subgroups.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghc/biorder.hpp"
#include "ghc/complex.hpp"
#include "ghc/errors.hpp"
#include "ghc/grouppres.hpp"
#include "ghc/linmonoid.hpp"
#include "ghc/smith.hpp"

namespace ghc::cover {

using complex::Complex2;
using complex::kNone;
using grouppres::GroupTable;

/// Group element per base edge.
struct Voltage {
  std::vector<std::size_t> of_edge;
};

/// phi(e) = w0^T v0 for the canonical representatives of the row and column
/// classes of the idempotent behind each edge.
inline Voltage gh_voltage(const Complex2& base, const biorder::BiorderedSet& E,
                          const GroupTable& group) {
  if (E.backend() != biorder::Backend::MatrixMonoid)
    throw InvalidInput("gh_voltage needs the matrix backend");
  Voltage phi;
  phi.of_edge.reserve(base.edges().size());
  for (const auto& edge : base.edges()) {
    const auto& rec = E.record(edge.element);
    const gf::Matrix v0 = gf::column_rref(rec.v).reduced;
    auto rr = gf::rref(rec.wT);
    const gf::Matrix w0T = rr.reduced.block(0, 0, rr.rank, rec.wT.cols());
    const gf::Matrix pairing = gf::mat_mul(w0T, v0);
    if (!gf::is_invertible(pairing))
      throw NonInvertiblePairing("edge " + edge.label);
    auto idx = group.index_of(pairing.key());
    if (!idx) throw NonInvertiblePairing("pairing " + pairing.key() + " not in group");
    phi.of_edge.push_back(*idx);
  }
  return phi;
}

/// phi(e) phi(f)^-1 phi(g) phi(h)^-1 read along the boundary.
inline std::size_t boundary_voltage(const Complex2& c, const complex::Cell& cell,
                                    const Voltage& phi, const GroupTable& group) {
  std::size_t acc = group.identity();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto x = phi.of_edge[cell.edges[i]];
    acc = group(acc, cell.signs[i] > 0 ? x : group.inverse(x));
  }
  return acc;
}

struct CoverComplex {
  Complex2 complex;
  std::size_t group_order = 0;
  std::size_t base_vertices = 0;
  std::size_t base_edges = 0;
  // cover vertex g * base_vertices + x is (g, x); cover edge s * base_edges + e
  // is the lift of e leaving (s, source(e))
  std::vector<std::size_t> cell_base;   // cover cell -> base cell
  std::vector<std::size_t> cell_start;  // cover cell -> group element at start

  std::size_t vertex(std::size_t g, std::size_t x) const { return g * base_vertices + x; }
  std::size_t vertex_group(std::size_t v) const { return v / base_vertices; }
  std::size_t vertex_base(std::size_t v) const { return v % base_vertices; }
  std::size_t edge_base(std::size_t e) const { return e % base_edges; }
  std::size_t edge_group(std::size_t e) const { return e / base_edges; }
};

inline constexpr std::uint64_t kDefaultCoverEdgeBudget = 2'000'000;

/// Vertices G x V; an edge (g, x) -> (g phi(e), y) for each base edge
/// e: x -> y; each base cell sewn at every (g, base point of the cell).
inline CoverComplex build_cover(const Complex2& base, const GroupTable& group,
                                const Voltage& phi,
                                std::uint64_t edge_budget = kDefaultCoverEdgeBudget) {
  if (phi.of_edge.size() != base.edges().size())
    throw InvalidInput("voltage does not match the base edges");
  const std::size_t m = group.order();
  if (static_cast<std::uint64_t>(m) * base.edges().size() > edge_budget)
    throw InfeasibleSize("cover would have " +
                         std::to_string(static_cast<std::uint64_t>(m) * base.edges().size()) +
                         " edges, budget " + std::to_string(edge_budget));
  for (std::size_t i = 0; i < base.cells().size(); ++i)
    if (boundary_voltage(base, base.cells()[i], phi, group) != group.identity())
      throw CellLiftObstruction("base cell " + std::to_string(i) +
                                " has non-identity boundary voltage");
  CoverComplex cv;
  cv.group_order = m;
  cv.base_vertices = base.vertices().size();
  cv.base_edges = base.edges().size();
  for (std::size_t g = 0; g < m; ++g)
    for (const auto& v : base.vertices())
      cv.complex.add_vertex(v.side, group.label(g) + "|" + v.label);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t e = 0; e < base.edges().size(); ++e) {
      const auto& edge = base.edges()[e];
      cv.complex.add_edge(cv.vertex(g, edge.source),
                          cv.vertex(group(g, phi.of_edge[e]), edge.target),
                          group.label(g) + "|" + edge.label, edge.element);
    }
  for (std::size_t ci = 0; ci < base.cells().size(); ++ci) {
    const auto& cell = base.cells()[ci];
    for (std::size_t g = 0; g < m; ++g) {
      complex::Cell lifted;
      lifted.signs = cell.signs;
      std::size_t cur = g;
      for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t e = cell.edges[i];
        if (cell.signs[i] > 0) {
          lifted.edges[i] = cur * cv.base_edges + e;
          cur = group(cur, phi.of_edge[e]);
        } else {
          // arrive at the target of the lift that leaves cur * phi(e)^-1
          cur = group(cur, group.inverse(phi.of_edge[e]));
          lifted.edges[i] = cur * cv.base_edges + e;
        }
      }
      if (cur != g) throw CellLiftObstruction("lift of cell " + std::to_string(ci));
      cv.complex.add_cell(lifted);
      cv.cell_base.push_back(ci);
      cv.cell_start.push_back(g);
    }
  }
  return cv;
}

/// tau(x): voltage product along the tree path from the root; the gauge
/// phi'(e) = tau(source) phi(e) tau(target)^-1 is the identity on tree edges.
inline Voltage tree_gauge_voltage(const Complex2& base, const complex::SpanningTree& tree,
                                  const Voltage& phi, const GroupTable& group) {
  std::vector<std::size_t> tau(base.vertices().size(), kNone);
  tau[tree.root] = group.identity();
  std::deque<std::size_t> queue{tree.root};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (auto e : base.incident(x)) {
      if (!tree.in_tree[e]) continue;
      auto y = base.other_end(e, x);
      if (tau[y] != kNone) continue;
      const auto& edge = base.edges()[e];
      tau[y] = edge.source == x ? group(tau[x], phi.of_edge[e])
                                : group(tau[x], group.inverse(phi.of_edge[e]));
      queue.push_back(y);
    }
  }
  Voltage out;
  out.of_edge.resize(base.edges().size(), group.identity());
  for (std::size_t e = 0; e < base.edges().size(); ++e) {
    const auto& edge = base.edges()[e];
    if (tau[edge.source] == kNone) {
      out.of_edge[e] = phi.of_edge[e];  // outside the tree's component
      continue;
    }
    out.of_edge[e] =
        group(group(tau[edge.source], phi.of_edge[e]), group.inverse(tau[edge.target]));
  }
  return out;
}

struct Connectivity {
  bool by_subgroup = false;
  bool by_reachability = false;
  std::size_t subgroup_order = 0;
  bool agree() const { return by_subgroup == by_reachability; }
};

/// Connected iff the voltages of the fundamental cycles generate G; checked
/// against a reachability sweep of the cover.
inline Connectivity cover_connected(const CoverComplex& cv, const Complex2& base,
                                    const GroupTable& group, const Voltage& phi) {
  Connectivity out;
  const auto comp = complex::components(base);
  if (comp.count != 1) throw InvalidInput("base complex must be connected");
  const auto tree = complex::spanning_tree(base, comp, 0, 0);
  const auto gauged = tree_gauge_voltage(base, tree, phi, group);
  std::vector<std::size_t> loops;
  for (std::size_t e = 0; e < base.edges().size(); ++e)
    if (!tree.in_tree[e]) loops.push_back(gauged.of_edge[e]);
  out.subgroup_order = grouppres::subgroup_generated(group, loops).size();
  out.by_subgroup = out.subgroup_order == group.order();
  out.by_reachability = complex::components(cv.complex).count == 1;
  return out;
}

struct CoverAxioms {
  bool vertex_count = false;      // |V| = |G| |V(base)|
  bool star_bijective = false;    // projection bijective on every star
  bool cell_lifts = false;        // each base cell lifts exactly |G| times
  bool euler = false;             // chi(cover) = |G| chi(base)
  bool fiber_collapse = false;    // quotient by G reproduces the base
  bool free_action = false;       // g.(h, x) = (gh, x) free, maps edges to edges
  bool all() const {
    return vertex_count && star_bijective && cell_lifts && euler && fiber_collapse &&
           free_action;
  }
};

inline CoverAxioms check_cover_axioms(const CoverComplex& cv, const Complex2& base,
                                      const GroupTable& group) {
  CoverAxioms ax;
  const auto& cover = cv.complex;
  const std::size_t m = group.order();
  ax.vertex_count = cover.vertices().size() == m * base.vertices().size();

  // star of (g, x) projects bijectively onto the star of x, respecting ends
  ax.star_bijective = true;
  for (std::size_t v = 0; v < cover.vertices().size() && ax.star_bijective; ++v) {
    const std::size_t x = cv.vertex_base(v);
    std::vector<std::size_t> up, down(base.incident(x));
    for (auto e : cover.incident(v)) {
      const auto be = cv.edge_base(e);
      const auto& ce = cover.edges()[e];
      const auto& bedge = base.edges()[be];
      const bool ends_ok = cv.vertex_base(ce.source) == bedge.source &&
                           cv.vertex_base(ce.target) == bedge.target;
      if (!ends_ok) ax.star_bijective = false;
      up.push_back(be);
    }
    std::sort(up.begin(), up.end());
    std::sort(down.begin(), down.end());
    if (up != down) ax.star_bijective = false;
  }

  std::vector<std::size_t> lifts(base.cells().size(), 0);
  for (auto b : cv.cell_base) ++lifts[b];
  ax.cell_lifts = cover.cells().size() == m * base.cells().size() &&
                  std::all_of(lifts.begin(), lifts.end(), [&](auto c) { return c == m; });
  for (std::size_t i = 0; i < cover.cells().size() && ax.cell_lifts; ++i) {
    const auto& lc = cover.cells()[i];
    const auto& bc = base.cells()[cv.cell_base[i]];
    for (std::size_t j = 0; j < 4; ++j)
      if (cv.edge_base(lc.edges[j]) != bc.edges[j] || lc.signs[j] != bc.signs[j])
        ax.cell_lifts = false;
  }

  auto chi = [](const Complex2& c) {
    return static_cast<std::int64_t>(c.vertices().size()) -
           static_cast<std::int64_t>(c.edges().size()) +
           static_cast<std::int64_t>(c.cells().size());
  };
  ax.euler = chi(cover) == static_cast<std::int64_t>(m) * chi(base);

  // quotient: fibres of vertices, edges and cells
  {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_image;
    bool ok = true;
    std::vector<std::size_t> edge_fibre(base.edges().size(), 0);
    for (std::size_t e = 0; e < cover.edges().size(); ++e) {
      const auto be = cv.edge_base(e);
      const auto& ce = cover.edges()[e];
      const auto& bedge = base.edges()[be];
      ++edge_fibre[be];
      ok = ok && cv.vertex_base(ce.source) == bedge.source &&
           cv.vertex_base(ce.target) == bedge.target;
    }
    ok = ok && std::all_of(edge_fibre.begin(), edge_fibre.end(),
                           [&](auto c) { return c == m; });
    std::vector<std::size_t> vertex_fibre(base.vertices().size(), 0);
    for (std::size_t v = 0; v < cover.vertices().size(); ++v) {
      ++vertex_fibre[cv.vertex_base(v)];
      ok = ok && cover.vertices()[v].side == base.vertices()[cv.vertex_base(v)].side;
    }
    ok = ok && std::all_of(vertex_fibre.begin(), vertex_fibre.end(),
                           [&](auto c) { return c == m; });
    ax.fiber_collapse = ok && ax.cell_lifts;
  }

  // translating by g maps the edge (s, x) -> (t, y) to (gs, x) -> (gt, y)
  ax.free_action = true;
  for (std::size_t g = 0; g < m && ax.free_action; ++g) {
    if (g == group.identity()) continue;
    for (std::size_t v = 0; v < cover.vertices().size(); ++v)
      if (group(g, cv.vertex_group(v)) == cv.vertex_group(v)) ax.free_action = false;
    for (std::size_t e = 0; e < cover.edges().size() && ax.free_action; ++e) {
      const auto& ce = cover.edges()[e];
      const auto s = group(g, cv.vertex_group(ce.source));
      const auto t = group(g, cv.vertex_group(ce.target));
      const auto image = cv.complex.edges()[s * cv.base_edges + cv.edge_base(e)];
      if (image.source != cv.vertex(s, cv.vertex_base(ce.source)) ||
          image.target != cv.vertex(t, cv.vertex_base(ce.target)))
        ax.free_action = false;
    }
  }
  return ax;
}

enum class Verdict { Yes, Inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::Yes ? "yes" : "inconclusive"; }

struct SimplyConnected {
  Verdict verdict = Verdict::Inconclusive;
  std::string method;  // "green-closure", "tietze" or "" when inconclusive
  bool all_green = false;
  std::size_t green_edges = 0, component_edges = 0;
  smith::AbelianInvariants h1;
  smith::AbelianInvariants presentation_abelianized;
  std::size_t generators = 0, relators = 0;
  std::size_t simplified_generators = 0, simplified_relators = 0;
  bool tietze_trivial = false;
  bool tietze_budget_exceeded = false;
};

struct Budgets {
  std::uint64_t enumeration = linmonoid::kDefaultEnumerationBudget;
  std::uint64_t cover_edges = kDefaultCoverEdgeBudget;
  std::size_t tietze_moves = grouppres::kDefaultTietzeBudget;
};

/// Verdict ladder on a connected complex: green closure, then Tietze, with
/// H_1 and the presentation abelianization attached either way. Never "no".
inline SimplyConnected is_simply_connected(const Complex2& c,
                                           std::size_t tietze_budget = grouppres::kDefaultTietzeBudget) {
  SimplyConnected out;
  const auto comp = complex::components(c);
  if (comp.count != 1) throw InvalidInput("simple connectivity needs a connected complex");
  const auto base = complex::default_basepoint(c, comp, 0);
  const auto tree = complex::spanning_tree(c, comp, 0, base);
  const auto green = complex::green_closure(c, comp, 0, tree);
  out.all_green = green.all_green;
  out.green_edges = green.green_count;
  out.component_edges = green.component_edges;
  out.h1 = complex::h1_abelian_invariants(c, comp, 0);
  const auto pres = complex::pi1_presentation(c, comp, 0, base, tree);
  out.generators = pres.presentation.generators;
  out.relators = pres.presentation.relators.size();
  out.presentation_abelianized = grouppres::abelian_invariants(pres.presentation);
  const auto simplified = grouppres::tietze_simplify(pres.presentation, tietze_budget);
  out.simplified_generators = simplified.presentation.generators;
  out.simplified_relators = simplified.presentation.relators.size();
  out.tietze_trivial = simplified.presentation.is_trivial();
  out.tietze_budget_exceeded = simplified.budget_exceeded;
  if (out.all_green) {
    out.verdict = Verdict::Yes;
    out.method = "green-closure";
  } else if (out.tietze_trivial) {
    out.verdict = Verdict::Yes;
    out.method = "tietze";
  }
  return out;
}

inline SimplyConnected is_simply_connected(const CoverComplex& cv,
                                           std::size_t tietze_budget = grouppres::kDefaultTietzeBudget) {
  return is_simply_connected(cv.complex, tietze_budget);
}

struct ComponentSummary {
  std::size_t vertices = 0, edges = 0, cells = 0;
  std::int64_t chi = 0;
  smith::AbelianInvariants h1;
  smith::AbelianInvariants pi1_abelianized;
  std::size_t pi1_generators = 0, pi1_relators = 0;
};

struct Report {
  std::size_t n = 0;
  std::uint32_t q = 0;
  std::size_t k = 0;
  std::string mode;  // "rank1", "free", "conjecture"
  // base complex
  std::size_t base_vertices = 0, base_edges = 0, base_cells = 0, base_components = 0;
  std::vector<ComponentSummary> base_component_summaries;
  // cover (absent for the free rank n-1 case)
  bool has_cover = false;
  std::size_t cover_vertices = 0, cover_edges = 0, cover_cells = 0;
  Connectivity connected;
  CoverAxioms axioms;
  SimplyConnected simply_connected;
  bool voltages_ok = false;
  // verdict
  std::string verdict;  // "yes", "inconclusive", "free"
  std::size_t group_order = 0;
  smith::AbelianInvariants group_invariants;
  std::size_t free_rank = 0;
  std::vector<std::string> warnings;
  std::map<std::string, double> timings_ms;
};

namespace detail {

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline ComponentSummary summarize_component(const Complex2& c, const complex::Components& comp,
                                            std::size_t id) {
  ComponentSummary s;
  const auto counts = complex::count_component(c, comp, id);
  s.vertices = counts.vertices;
  s.edges = counts.edges;
  s.cells = counts.cells;
  s.chi = complex::euler_characteristic(c, comp, id);
  s.h1 = complex::h1_abelian_invariants(c, comp, id);
  const auto bp = complex::default_basepoint(c, comp, id);
  const auto tree = complex::spanning_tree(c, comp, id, bp);
  const auto pres = complex::pi1_presentation(c, comp, id, bp, tree);
  s.pi1_generators = pres.presentation.generators;
  s.pi1_relators = pres.presentation.relators.size();
  s.pi1_abelianized = grouppres::abelian_invariants(pres.presentation);
  return s;
}

// F_q^* is cyclic of order q - 1.
inline smith::AbelianInvariants cyclic_invariants(std::size_t order) {
  smith::AbelianInvariants inv;
  if (order > 1) inv.torsion.push_back(static_cast<std::int64_t>(order));
  return inv;
}

}  // namespace detail

struct PipelineOptions {
  Budgets budgets;
  unsigned threads = 1;
};

/// Covers of K_{n,k} by GL_k(F_q) (units of F_q when k = 1) with the
/// simple-connectivity ladder on top.
inline Report run_cover_pipeline(std::size_t n, std::uint32_t q, std::size_t k,
                                 const PipelineOptions& opt, std::string mode) {
  Report r;
  r.n = n;
  r.q = q;
  r.k = k;
  r.mode = std::move(mode);
  detail::Stopwatch clock;
  const auto E = biorder::BiorderedSet::from_matrix_monoid(n, q, {k}, opt.budgets.enumeration);
  r.timings_ms["enumerate"] = clock.lap();
  const auto gh = complex::build_gh(E, {complex::SingularityMethod::Auto, opt.threads});
  r.timings_ms["complex"] = clock.lap();
  const auto& base = gh.complex;
  const auto comp = complex::components(base);
  r.base_vertices = base.vertices().size();
  r.base_edges = base.edges().size();
  r.base_cells = base.cells().size();
  r.base_components = comp.count;
  for (std::size_t id = 0; id < comp.count; ++id)
    r.base_component_summaries.push_back(detail::summarize_component(base, comp, id));
  r.timings_ms["base-homology"] = clock.lap();
  if (comp.count != 1) {
    r.warnings.push_back("base complex has " + std::to_string(comp.count) + " components");
    r.verdict = "inconclusive";
    return r;
  }
  const GroupTable group = k == 1 ? grouppres::units_group(q) : grouppres::gl_table(k, q);
  r.group_order = group.order();
  const Voltage phi = gh_voltage(base, E, group);
  r.voltages_ok = std::all_of(base.cells().begin(), base.cells().end(), [&](const auto& cell) {
    return boundary_voltage(base, cell, phi, group) == group.identity();
  });
  if (!r.voltages_ok) {
    r.warnings.push_back("some cell boundary has non-identity voltage");
    r.verdict = "inconclusive";
    return r;
  }
  const auto cv = build_cover(base, group, phi, opt.budgets.cover_edges);
  r.timings_ms["cover"] = clock.lap();
  r.has_cover = true;
  r.cover_vertices = cv.complex.vertices().size();
  r.cover_edges = cv.complex.edges().size();
  r.cover_cells = cv.complex.cells().size();
  r.axioms = check_cover_axioms(cv, base, group);
  r.connected = cover_connected(cv, base, group, phi);
  r.timings_ms["axioms"] = clock.lap();
  if (!r.connected.by_subgroup || !r.connected.by_reachability) {
    r.warnings.push_back("cover is not connected: voltages generate a subgroup of order " +
                         std::to_string(r.connected.subgroup_order));
    r.verdict = "inconclusive";
    return r;
  }
  r.simply_connected = is_simply_connected(cv, opt.budgets.tietze_moves);
  r.timings_ms["simply-connected"] = clock.lap();
  r.verdict = to_string(r.simply_connected.verdict);
  if (k == 1) r.group_invariants = detail::cyclic_invariants(group.order());
  return r;
}

/// The maximal subgroup at a rank-1 idempotent of M_n(F_q) is identified with
/// F_q^* when the cover of K_{n,1} by F_q^* is connected and simply connected.
inline Report verify_rank1(std::size_t n, std::uint32_t q, const PipelineOptions& opt = {}) {
  gf::check_modulus(q);
  std::vector<std::string> warnings;
  if (n < 3)
    warnings.push_back("HypothesisViolation: n = " + std::to_string(n) +
                       " < 3 is outside the proven range for rank 1; result reported anyway");
  if (n < 1) throw InvalidInput("n must be positive");
  Report r = run_cover_pipeline(n, q, 1, opt, "rank1");
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

/// Rank n-1: no singular squares, pi_1 free of rank E - V + 1 per component.
/// Rank k < n-1: the GL_k cover pipeline, verdict not asserted.
inline Report analyze_rank(std::size_t n, std::uint32_t q, std::size_t k,
                           const PipelineOptions& opt = {}) {
  gf::check_modulus(q);
  if (k < 1 || k + 1 > n) throw InvalidInput("analyze needs 1 <= k <= n - 1");
  if (k + 1 < n) return run_cover_pipeline(n, q, k, opt, "conjecture");
  Report r;
  r.n = n;
  r.q = q;
  r.k = k;
  r.mode = "free";
  detail::Stopwatch clock;
  const auto E = biorder::BiorderedSet::from_matrix_monoid(n, q, {k}, opt.budgets.enumeration);
  const auto gh = complex::build_gh(E, {complex::SingularityMethod::Auto, opt.threads});
  r.timings_ms["complex"] = clock.lap();
  const auto& base = gh.complex;
  const auto comp = complex::components(base);
  r.base_vertices = base.vertices().size();
  r.base_edges = base.edges().size();
  r.base_cells = base.cells().size();
  r.base_components = comp.count;
  for (std::size_t id = 0; id < comp.count; ++id)
    r.base_component_summaries.push_back(detail::summarize_component(base, comp, id));
  r.timings_ms["homology"] = clock.lap();
  if (r.base_cells != 0) {
    r.warnings.push_back("rank n-1 complex unexpectedly has 2-cells");
    r.verdict = "inconclusive";
    return r;
  }
  r.verdict = "free";
  // E - V + 1 of the basepoint component
  const auto& s = r.base_component_summaries.front();
  r.free_rank = s.edges + 1 - s.vertices;
  r.group_invariants.free_rank = r.free_rank;
  return r;
}

}  // namespace ghc::cover
