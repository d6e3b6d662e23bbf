#pragma once

// Square 2-complexes over bipartite graphs: the Graham-Houghton complex of a
// biordered set, components, spanning trees, fundamental group presentations,
// green-edge closure and first homology.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ghc/biorder.hpp"
#include "ghc/errors.hpp"
#include "ghc/grouppres.hpp"
#include "ghc/smith.hpp"

namespace ghc::complex {

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

enum class Side { L, R };

struct Vertex {
  Side side;
  std::string label;
};

/// Positively oriented from an L-side vertex to an R-side vertex.
struct Edge {
  std::size_t source;
  std::size_t target;
  std::string label;
  std::size_t element = kNone;  // idempotent behind the edge, if any
};

/// Boundary e f^-1 g h^-1: edges[i] traversed forward when signs[i] = +1.
struct Cell {
  std::array<std::size_t, 4> edges;
  std::array<int, 4> signs{1, -1, 1, -1};
};

class Complex2 {
 public:
  std::size_t add_vertex(Side side, std::string label) {
    vertices_.push_back({side, std::move(label)});
    incident_.emplace_back();
    return vertices_.size() - 1;
  }

  std::size_t add_edge(std::size_t source, std::size_t target, std::string label,
                       std::size_t element = kNone) {
    if (source >= vertices_.size() || target >= vertices_.size())
      throw InvalidInput("edge endpoint out of range");
    if (vertices_[source].side != Side::L || vertices_[target].side != Side::R)
      throw InvalidInput("edges run from an L-side vertex to an R-side vertex");
    edges_.push_back({source, target, std::move(label), element});
    incident_[source].push_back(edges_.size() - 1);
    incident_[target].push_back(edges_.size() - 1);
    return edges_.size() - 1;
  }

  /// Adds a cell after checking its boundary is a closed walk.
  std::size_t add_cell(const Cell& cell) {
    for (auto e : cell.edges)
      if (e >= edges_.size()) throw InvalidInput("cell edge out of range");
    if (!boundary_closes(cell)) throw InvalidInput("cell boundary is not closed");
    cells_.push_back(cell);
    return cells_.size() - 1;
  }

  bool boundary_closes(const Cell& cell) const {
    auto start = [&](std::size_t i) {
      const auto& e = edges_[cell.edges[i]];
      return cell.signs[i] > 0 ? e.source : e.target;
    };
    auto finish = [&](std::size_t i) {
      const auto& e = edges_[cell.edges[i]];
      return cell.signs[i] > 0 ? e.target : e.source;
    };
    for (std::size_t i = 0; i < 4; ++i)
      if (finish(i) != start((i + 1) % 4)) return false;
    return true;
  }

  /// First vertex of the boundary walk.
  std::size_t cell_base(const Cell& cell) const {
    const auto& e = edges_[cell.edges[0]];
    return cell.signs[0] > 0 ? e.source : e.target;
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<std::size_t>& incident(std::size_t v) const { return incident_[v]; }

  std::size_t other_end(std::size_t edge, std::size_t v) const {
    return edges_[edge].source == v ? edges_[edge].target : edges_[edge].source;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> incident_;
};

enum class SingularityMethod {
  /// Matrix backend: efghe = e band test, then the constructive singularizer
  /// (non-bands have none). Table backend: brute force.
  Auto,
  BruteForce,
};

struct GhOptions {
  SingularityMethod method = SingularityMethod::Auto;
  unsigned threads = 1;
};

struct SquareVerdict {
  biorder::ESquare square;
  bool band = false;
  std::optional<biorder::SingularizerWitness> witness;
};

struct GhComplex {
  Complex2 complex;
  std::vector<std::size_t> lvertex_of_class;  // L-class -> vertex
  std::vector<std::size_t> rvertex_of_class;  // R-class -> vertex
  std::vector<SquareVerdict> squares;         // every canonical E-square
  std::vector<std::size_t> cell_square;       // cell -> index into squares
};

inline SquareVerdict classify_square(const biorder::BiorderedSet& E,
                                     const biorder::ESquare& s,
                                     SingularityMethod method) {
  SquareVerdict v{s, biorder::is_rectangular_band(s, E), std::nullopt};
  if (method == SingularityMethod::Auto &&
      E.backend() == biorder::Backend::MatrixMonoid) {
    if (v.band) v.witness = biorder::construct_singularizer(s, E).witness;
  } else {
    v.witness = biorder::find_singularizer(s, E);
  }
  return v;
}

/// Vertices are the L-classes then the R-classes of E; one edge per
/// idempotent (element order); one cell per singular square.
inline GhComplex build_gh(const biorder::BiorderedSet& E, const GhOptions& opt = {}) {
  GhComplex gh;
  for (std::size_t c = 0; c < E.lclass_count(); ++c)
    gh.lvertex_of_class.push_back(gh.complex.add_vertex(Side::L, "L:" + E.lclass_key(c)));
  for (std::size_t c = 0; c < E.rclass_count(); ++c)
    gh.rvertex_of_class.push_back(gh.complex.add_vertex(Side::R, "R:" + E.rclass_key(c)));
  for (std::size_t i = 0; i < E.size(); ++i)
    gh.complex.add_edge(gh.lvertex_of_class[E.lclass_of(i)],
                        gh.rvertex_of_class[E.rclass_of(i)], E.label(i), i);

  const auto squares = biorder::enumerate_esquares(E);
  gh.squares.resize(squares.size());
  const unsigned threads = std::max(1u, opt.threads);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      gh.squares[i] = classify_square(E, squares[i], opt.method);
  };
  if (threads == 1 || squares.size() < 256) {
    work(0, squares.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (squares.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(squares.size(), t * chunk);
      const std::size_t e = std::min(squares.size(), b + chunk);
      pool.emplace_back([&, t, b, e] {
        try {
          work(b, e);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  for (std::size_t i = 0; i < gh.squares.size(); ++i) {
    if (!gh.squares[i].witness) continue;
    const auto& s = gh.squares[i].square;
    gh.complex.add_cell(Cell{{s.e, s.f, s.g, s.h}, {1, -1, 1, -1}});
    gh.cell_square.push_back(i);
  }
  return gh;
}

struct Components {
  std::vector<std::size_t> of_vertex;
  std::size_t count = 0;

  std::vector<std::size_t> vertices_of(std::size_t c) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < of_vertex.size(); ++v)
      if (of_vertex[v] == c) out.push_back(v);
    return out;
  }
};

/// Connected components of the 1-skeleton, numbered by least vertex.
inline Components components(const Complex2& c) {
  Components comp;
  comp.of_vertex.assign(c.vertices().size(), kNone);
  for (std::size_t s = 0; s < c.vertices().size(); ++s) {
    if (comp.of_vertex[s] != kNone) continue;
    const std::size_t id = comp.count++;
    std::deque<std::size_t> queue{s};
    comp.of_vertex[s] = id;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto e : c.incident(v)) {
        auto w = c.other_end(e, v);
        if (comp.of_vertex[w] == kNone) {
          comp.of_vertex[w] = id;
          queue.push_back(w);
        }
      }
    }
  }
  return comp;
}

struct SpanningTree {
  std::size_t root = kNone;
  std::vector<std::size_t> parent_edge;  // per vertex, kNone off-tree or at root
  std::vector<bool> in_tree;             // per edge
  std::size_t edge_count = 0;
};

/// Breadth-first tree; neighbours visited in increasing vertex order (ties by
/// edge index).
inline SpanningTree spanning_tree(const Complex2& c, const Components& comp,
                                  std::size_t component, std::size_t root) {
  if (root >= c.vertices().size() || comp.of_vertex[root] != component)
    throw RootNotInComponent("vertex " + std::to_string(root) +
                             " is not in component " + std::to_string(component));
  SpanningTree t;
  t.root = root;
  t.parent_edge.assign(c.vertices().size(), kNone);
  t.in_tree.assign(c.edges().size(), false);
  std::vector<bool> seen(c.vertices().size(), false);
  seen[root] = true;
  std::deque<std::size_t> queue{root};
  std::vector<std::pair<std::size_t, std::size_t>> nbrs;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    nbrs.clear();
    for (auto e : c.incident(v)) nbrs.emplace_back(c.other_end(e, v), e);
    std::sort(nbrs.begin(), nbrs.end());
    for (auto [w, e] : nbrs) {
      if (seen[w]) continue;
      seen[w] = true;
      t.parent_edge[w] = e;
      t.in_tree[e] = true;
      ++t.edge_count;
      queue.push_back(w);
    }
  }
  return t;
}

struct Pi1Presentation {
  grouppres::Presentation presentation;
  std::vector<std::size_t> generator_edge;  // generator -> edge
  std::size_t basepoint = kNone;
};

/// Generators are the non-tree edges of the component (edge order); one
/// relator per cell with its tree edges deleted.
inline Pi1Presentation pi1_presentation(const Complex2& c, const Components& comp,
                                        std::size_t component, std::size_t basepoint,
                                        const SpanningTree& tree) {
  if (basepoint >= c.vertices().size() || comp.of_vertex[basepoint] != component)
    throw BasepointNotInComponent("vertex " + std::to_string(basepoint));
  if (comp.of_vertex[tree.root] != component)
    throw InvalidInput("spanning tree belongs to another component");
  Pi1Presentation out;
  out.basepoint = basepoint;
  std::vector<std::int64_t> letter(c.edges().size(), 0);
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    if (comp.of_vertex[c.edges()[e].source] != component || tree.in_tree[e]) continue;
    out.generator_edge.push_back(e);
    letter[e] = static_cast<std::int64_t>(out.generator_edge.size());
    out.presentation.labels.push_back(c.edges()[e].label);
  }
  out.presentation.generators = out.generator_edge.size();
  for (const auto& cell : c.cells()) {
    if (comp.of_vertex[c.cell_base(cell)] != component) continue;
    grouppres::Word w;
    for (std::size_t i = 0; i < 4; ++i)
      if (letter[cell.edges[i]] != 0) w.push_back(cell.signs[i] * letter[cell.edges[i]]);
    out.presentation.relators.push_back(std::move(w));
  }
  return out;
}

/// Default basepoint: L-vertex of the first edge of the component.
inline std::size_t default_basepoint(const Complex2& c, const Components& comp,
                                     std::size_t component) {
  for (const auto& e : c.edges())
    if (comp.of_vertex[e.source] == component) return e.source;
  for (std::size_t v = 0; v < c.vertices().size(); ++v)
    if (comp.of_vertex[v] == component) return v;
  throw InvalidInput("empty component");
}

enum class Schedule { Forward, Reverse };

struct GreenClosure {
  std::vector<bool> green;  // per edge
  std::size_t green_count = 0;
  std::size_t component_edges = 0;
  bool all_green = false;
};

/// Starts from the tree edges and turns the fourth edge of any cell with
/// three green sides green, to a fixpoint. all_green certifies that pi_1 of
/// the component is trivial; a stall proves nothing.
inline GreenClosure green_closure(const Complex2& c, const Components& comp,
                                  std::size_t component, const SpanningTree& seed,
                                  Schedule schedule = Schedule::Forward) {
  const auto& edges = c.edges();
  GreenClosure out;
  out.green.assign(edges.size(), false);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (comp.of_vertex[edges[e].source] != component) continue;
    ++out.component_edges;
    if (seed.in_tree[e]) {
      out.green[e] = true;
      ++out.green_count;
    }
  }
  std::vector<std::vector<std::size_t>> cells_of_edge(edges.size());
  std::vector<std::size_t> cell_ids;
  for (std::size_t i = 0; i < c.cells().size(); ++i) {
    if (comp.of_vertex[c.cell_base(c.cells()[i])] != component) continue;
    cell_ids.push_back(i);
    for (auto e : c.cells()[i].edges) cells_of_edge[e].push_back(i);
  }
  if (schedule == Schedule::Reverse) std::reverse(cell_ids.begin(), cell_ids.end());
  // non-green sides counted with multiplicity: a repeated side only yields
  // x^2 = 1 or x x^-1 = 1, neither of which makes x trivial
  auto nongreen = [&](std::size_t cell) {
    std::size_t count = 0, found = kNone;
    for (auto e : c.cells()[cell].edges)
      if (!out.green[e]) {
        ++count;
        found = e;
      }
    return std::pair{count, found};
  };
  std::deque<std::size_t> work(cell_ids.begin(), cell_ids.end());
  while (!work.empty()) {
    std::size_t cell;
    if (schedule == Schedule::Forward) {
      cell = work.front();
      work.pop_front();
    } else {
      cell = work.back();
      work.pop_back();
    }
    auto [count, edge] = nongreen(cell);
    if (count != 1) continue;
    out.green[edge] = true;
    ++out.green_count;
    for (auto other : cells_of_edge[edge]) work.push_back(other);
  }
  out.all_green = out.green_count == out.component_edges;
  return out;
}

/// H_1 of one component from the cellular chain complex: torsion and rank
/// of coker(d2) over all component edges, corrected by rank(d1) = V - 1.
inline smith::AbelianInvariants h1_abelian_invariants(const Complex2& c,
                                                      const Components& comp,
                                                      std::size_t component) {
  std::vector<std::size_t> edge_index(c.edges().size(), kNone);
  std::size_t ne = 0, nv = 0;
  for (std::size_t e = 0; e < c.edges().size(); ++e)
    if (comp.of_vertex[c.edges()[e].source] == component) edge_index[e] = ne++;
  for (auto id : comp.of_vertex) nv += id == component;
  smith::LatticeReducer red(ne);
  for (const auto& cell : c.cells()) {
    if (comp.of_vertex[c.cell_base(cell)] != component) continue;
    smith::SparseVector v;
    for (std::size_t i = 0; i < 4; ++i) v.emplace_back(edge_index[cell.edges[i]], cell.signs[i]);
    red.add(v);
  }
  auto coker = red.quotient();
  const std::size_t rank_d1 = nv == 0 ? 0 : nv - 1;
  if (coker.free_rank < rank_d1)
    throw InternalCheckFailed("cokernel of d2 smaller than image of d1");
  coker.free_rank -= rank_d1;
  return coker;
}

inline std::int64_t euler_characteristic(const Complex2& c, const Components& comp,
                                         std::size_t component) {
  std::int64_t v = 0, e = 0, f = 0;
  for (auto id : comp.of_vertex) v += id == component;
  for (const auto& edge : c.edges()) e += comp.of_vertex[edge.source] == component;
  for (const auto& cell : c.cells()) f += comp.of_vertex[c.cell_base(cell)] == component;
  return v - e + f;
}

struct ComponentCounts {
  std::size_t vertices = 0, edges = 0, cells = 0;
};

inline ComponentCounts count_component(const Complex2& c, const Components& comp,
                                       std::size_t component) {
  ComponentCounts n;
  for (auto id : comp.of_vertex) n.vertices += id == component;
  for (const auto& edge : c.edges()) n.edges += comp.of_vertex[edge.source] == component;
  for (const auto& cell : c.cells()) n.cells += comp.of_vertex[c.cell_base(cell)] == component;
  return n;
}

}  // namespace ghc::complex
