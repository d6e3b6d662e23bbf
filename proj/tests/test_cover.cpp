#include <gtest/gtest.h>

#include <random>

#include "ghc/cover.hpp"

using namespace ghc;
using complex::Cell;
using complex::Complex2;
using complex::Side;
using cover::Voltage;
using smith::AbelianInvariants;

namespace {

struct RankOne {
  biorder::BiorderedSet E;
  complex::GhComplex gh;
  grouppres::GroupTable group;
  Voltage phi;
};

RankOne rank_one(std::size_t n, std::uint32_t q) {
  RankOne r{biorder::BiorderedSet::from_matrix_monoid(n, q, {1}), {}, grouppres::units_group(q), {}};
  r.gh = complex::build_gh(r.E);
  r.phi = cover::gh_voltage(r.gh.complex, r.E, r.group);
  return r;
}

// First nonzero entry scaled to 1.
std::vector<std::uint32_t> normalized(std::vector<std::uint32_t> x, std::uint32_t q) {
  std::uint32_t lead = 0;
  for (auto c : x)
    if (c != 0) {
      lead = c;
      break;
    }
  std::uint32_t inv = 1;
  while (lead * inv % q != 1) ++inv;
  for (auto& c : x) c = c * inv % q;
  return x;
}

Complex2 two_parallel_edges() {
  Complex2 c;
  const auto l = c.add_vertex(Side::L, "l");
  const auto r = c.add_vertex(Side::R, "r");
  c.add_edge(l, r, "a");
  c.add_edge(l, r, "b");
  return c;
}

// Random connected complex with a voltage that is either a coboundary
// (every cell lifts) or arbitrary.
struct RandomVoltageCase {
  Complex2 base;
  Voltage phi;
};

RandomVoltageCase random_case(std::mt19937& rng, const grouppres::GroupTable& g, bool coboundary) {
  RandomVoltageCase rc;
  auto& c = rc.base;
  const std::size_t nl = 1 + rng() % 3, nr = 1 + rng() % 3;
  for (std::size_t i = 0; i < nl; ++i) c.add_vertex(Side::L, "");
  for (std::size_t i = 0; i < nr; ++i) c.add_vertex(Side::R, "");
  for (std::size_t i = 0; i < nl; ++i) c.add_edge(i, nl, "");
  for (std::size_t j = 1; j < nr; ++j) c.add_edge(0, nl + j, "");
  const std::size_t extra = rng() % 5;
  for (std::size_t i = 0; i < extra; ++i) c.add_edge(rng() % nl, nl + rng() % nr, "");
  const std::size_t cells = rng() % 4;
  for (std::size_t i = 0; i < cells; ++i) {
    const auto e1 = rng() % c.edges().size(), e2 = rng() % c.edges().size();
    const auto& a = c.edges()[e1];
    const auto& b = c.edges()[e2];
    // e1 e2^-1 e1 e2^-1 closes on parallel edges, e1 e2^-1 e2 e1^-1 on
    // edges with a common target
    if (a.source == b.source && a.target == b.target && rng() % 2)
      c.add_cell(Cell{{e1, e2, e1, e2}, {1, -1, 1, -1}});
    else if (a.target == b.target)
      c.add_cell(Cell{{e1, e2, e2, e1}, {1, -1, 1, -1}});
  }
  std::vector<std::size_t> potential(c.vertices().size());
  for (auto& p : potential) p = rng() % g.order();
  for (const auto& e : c.edges())
    rc.phi.of_edge.push_back(coboundary ? g(g.inverse(potential[e.source]), potential[e.target])
                                        : rng() % g.order());
  return rc;
}

}  // namespace

TEST(GhVoltage, TrivialOverGf2) {
  const auto r = rank_one(3, 2);
  ASSERT_EQ(r.phi.of_edge.size(), 28u);
  for (auto x : r.phi.of_edge) EXPECT_EQ(x, r.group.identity());
}

TEST(GhVoltage, MatchesNormalizedPairing) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto r = rank_one(3, q);
    for (std::size_t i = 0; i < r.E.size(); ++i) {
      const auto& m = r.E.record(r.gh.complex.edges()[i].element).matrix;
      // a nonzero column spans the image, a nonzero row the row space
      std::vector<std::uint32_t> col(3), row(3);
      for (std::size_t j = 0; j < 3; ++j)
        if (!(m(0, j) == 0 && m(1, j) == 0 && m(2, j) == 0)) {
          for (std::size_t a = 0; a < 3; ++a) col[a] = m(a, j);
          break;
        }
      for (std::size_t a = 0; a < 3; ++a)
        if (!(m(a, 0) == 0 && m(a, 1) == 0 && m(a, 2) == 0)) {
          for (std::size_t j = 0; j < 3; ++j) row[j] = m(a, j);
          break;
        }
      const auto v0 = normalized(col, q), w0 = normalized(row, q);
      std::uint32_t pairing = 0;
      for (std::size_t a = 0; a < 3; ++a) pairing = (pairing + w0[a] * v0[a]) % q;
      EXPECT_EQ(r.group.label(r.phi.of_edge[i]), std::to_string(pairing));
    }
  }
}

TEST(GhVoltage, CellBoundariesAreTrivial) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const auto r = rank_one(3, q);
    for (const auto& cell : r.gh.complex.cells())
      EXPECT_EQ(cover::boundary_voltage(r.gh.complex, cell, r.phi, r.group), r.group.identity());
  }
}

TEST(GhVoltage, GlTwoCellBoundariesAreTrivial) {
  const auto E = biorder::BiorderedSet::from_matrix_monoid(3, 2, {2});
  const auto gh = complex::build_gh(E);
  const auto g = grouppres::gl_table(2, 2);
  const auto phi = cover::gh_voltage(gh.complex, E, g);
  EXPECT_EQ(phi.of_edge.size(), 28u);
  for (const auto& cell : gh.complex.cells())
    EXPECT_EQ(cover::boundary_voltage(gh.complex, cell, phi, g), g.identity());
}

TEST(BuildCover, TrivialGroupCopiesTheBase) {
  const auto r = rank_one(3, 2);
  const auto cv = cover::build_cover(r.gh.complex, r.group, r.phi);
  EXPECT_EQ(cv.complex.vertices().size(), 14u);
  EXPECT_EQ(cv.complex.edges().size(), 28u);
  EXPECT_EQ(cv.complex.cells().size(), 21u);
  EXPECT_TRUE(cover::check_cover_axioms(cv, r.gh.complex, r.group).all());
}

TEST(BuildCover, SingleEdgeGivesDisjointCopies) {
  Complex2 base;
  base.add_edge(base.add_vertex(Side::L, ""), base.add_vertex(Side::R, ""), "");
  const auto g = grouppres::units_group(5);
  const auto cv = cover::build_cover(base, g, Voltage{{*g.index_of("2")}});
  EXPECT_EQ(cv.complex.vertices().size(), 8u);
  EXPECT_EQ(cv.complex.edges().size(), 4u);
  EXPECT_EQ(complex::components(cv.complex).count, 4u);
  // (g, l) -> (2g, r)
  for (std::size_t e = 0; e < 4; ++e) {
    const auto& edge = cv.complex.edges()[e];
    const auto s = g.label(cv.vertex_group(edge.source));
    const auto t = g.label(cv.vertex_group(edge.target));
    EXPECT_EQ(std::stoi(s) * 2 % 5, std::stoi(t));
  }
  EXPECT_TRUE(cover::check_cover_axioms(cv, base, g).all());
}

TEST(BuildCover, Errors) {
  auto base = two_parallel_edges();
  base.add_cell(Cell{{0, 1, 1, 0}, {1, -1, 1, -1}});
  const auto g = grouppres::units_group(5);
  // boundary a b^-1 b a^-1 is trivial for any voltage
  EXPECT_NO_THROW(cover::build_cover(base, g, Voltage{{1, 2}}));
  base.add_cell(Cell{{0, 1, 0, 1}, {1, -1, 1, -1}});
  EXPECT_THROW(cover::build_cover(base, g, Voltage{{1, 0}}), CellLiftObstruction);
  EXPECT_NO_THROW(cover::build_cover(base, g, Voltage{{3, 3}}));
  EXPECT_THROW(cover::build_cover(base, g, Voltage{{0}}), InvalidInput);
  EXPECT_THROW(cover::build_cover(base, g, Voltage{{0, 0}}, 7), InfeasibleSize);
}

TEST(CoverConnected, Examples) {
  const auto base = two_parallel_edges();
  const auto g = grouppres::units_group(7);
  const auto id = g.identity();
  auto check = [&](std::size_t a, std::size_t b, std::size_t expected_order) {
    const Voltage phi{{a, b}};
    const auto cv = cover::build_cover(base, g, phi);
    const auto c = cover::cover_connected(cv, base, g, phi);
    EXPECT_EQ(c.subgroup_order, expected_order);
    EXPECT_EQ(c.by_subgroup, expected_order == 6);
    EXPECT_TRUE(c.agree());
  };
  check(id, id, 1);
  check(id, *g.index_of("3"), 6);
  check(id, *g.index_of("2"), 3);
  // the loop carries 2 * 6^-1 = 5, a generator
  check(*g.index_of("6"), *g.index_of("2"), 6);
}

TEST(CoverConnected, SubgroupTestAgreesWithReachability) {
  std::mt19937 rng(3);
  const auto g = grouppres::units_group(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rc = random_case(rng, g, trial % 2 == 0);
    bool lifts = true;
    for (const auto& cell : rc.base.cells())
      lifts = lifts && cover::boundary_voltage(rc.base, cell, rc.phi, g) == g.identity();
    if (!lifts) {
      EXPECT_THROW(cover::build_cover(rc.base, g, rc.phi), CellLiftObstruction);
      continue;
    }
    const auto cv = cover::build_cover(rc.base, g, rc.phi);
    const auto c = cover::cover_connected(cv, rc.base, g, rc.phi);
    EXPECT_TRUE(c.agree()) << "trial " << trial;
    EXPECT_TRUE(cover::check_cover_axioms(cv, rc.base, g).all());
    EXPECT_EQ(complex::components(cv.complex).count * c.subgroup_order, g.order());
  }
}

TEST(CoverAxioms, DetectTampering) {
  const auto r = rank_one(3, 3);
  const auto cv = cover::build_cover(r.gh.complex, r.group, r.phi);
  EXPECT_TRUE(cover::check_cover_axioms(cv, r.gh.complex, r.group).all());
  // a cover of a different base fails the vertex count and star checks
  const auto other = rank_one(3, 2);
  auto bad = cover::build_cover(other.gh.complex, r.group, Voltage{std::vector<std::size_t>(28, 0)});
  EXPECT_FALSE(cover::check_cover_axioms(bad, r.gh.complex, r.group).all());
}

TEST(SimplyConnected, Examples) {
  const auto r = rank_one(3, 3);
  const auto cv = cover::build_cover(r.gh.complex, r.group, r.phi);
  const auto sc = cover::is_simply_connected(cv);
  EXPECT_EQ(sc.verdict, cover::Verdict::Yes);
  EXPECT_TRUE(sc.h1.trivial());
  EXPECT_TRUE(sc.presentation_abelianized.trivial());

  const auto circle = cover::is_simply_connected(two_parallel_edges());
  EXPECT_EQ(circle.verdict, cover::Verdict::Inconclusive);
  EXPECT_EQ(circle.method, "");
  EXPECT_EQ(circle.h1, (AbelianInvariants{1, {}}));

  Complex2 split;
  split.add_vertex(Side::L, "");
  split.add_vertex(Side::R, "");
  EXPECT_THROW(cover::is_simply_connected(split), InvalidInput);
}

TEST(SimplyConnected, RepeatedSideIsNotMadeGreen) {
  // boundary a b^-1 a b^-1 with a in the tree gives b^2 = 1 only
  auto c = two_parallel_edges();
  c.add_cell(Cell{{0, 1, 0, 1}, {1, -1, 1, -1}});
  const auto sc = cover::is_simply_connected(c);
  EXPECT_FALSE(sc.all_green);
  EXPECT_EQ(sc.h1, (AbelianInvariants{0, {2}}));
  EXPECT_EQ(sc.verdict, cover::Verdict::Inconclusive);
  EXPECT_FALSE(sc.tietze_trivial);
}

TEST(VerifyRank1, Examples) {
  const auto r = cover::verify_rank1(3, 3);
  EXPECT_EQ(r.verdict, "yes");
  EXPECT_EQ(r.group_order, 2u);
  EXPECT_EQ(r.base_vertices, 26u);
  EXPECT_EQ(r.base_edges, 117u);
  EXPECT_EQ(r.base_cells, 468u);
  EXPECT_EQ(r.cover_vertices, 52u);
  EXPECT_EQ(r.cover_edges, 234u);
  EXPECT_EQ(r.cover_cells, 936u);
  EXPECT_TRUE(r.voltages_ok);
  EXPECT_TRUE(r.axioms.all());
  EXPECT_TRUE(r.connected.by_subgroup && r.connected.by_reachability);
  EXPECT_EQ(r.group_invariants, (AbelianInvariants{0, {2}}));
  EXPECT_TRUE(r.warnings.empty());
  ASSERT_EQ(r.base_component_summaries.size(), 1u);
  EXPECT_EQ(r.base_component_summaries[0].h1, (AbelianInvariants{0, {2}}));

  const auto r2 = cover::verify_rank1(3, 2);
  EXPECT_EQ(r2.verdict, "yes");
  EXPECT_EQ(r2.group_order, 1u);
  EXPECT_TRUE(r2.group_invariants.trivial());

  EXPECT_THROW(cover::verify_rank1(3, 4), InvalidModulus);
}

TEST(VerifyRank1, SmallNIsFlagged) {
  const auto r = cover::verify_rank1(2, 3);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.warnings[0].rfind("HypothesisViolation", 0), 0u);
}

TEST(AnalyzeRank, FreeCase) {
  const auto r = cover::analyze_rank(3, 2, 2);
  EXPECT_EQ(r.mode, "free");
  EXPECT_EQ(r.verdict, "free");
  EXPECT_EQ(r.base_cells, 0u);
  EXPECT_EQ(r.free_rank, r.base_edges - r.base_vertices + 1);
  EXPECT_EQ(r.free_rank, 15u);
  EXPECT_FALSE(r.has_cover);
  EXPECT_EQ(r.base_component_summaries[0].h1, (AbelianInvariants{15, {}}));

  EXPECT_EQ(cover::analyze_rank(3, 3, 2).free_rank, 92u);
  EXPECT_THROW(cover::analyze_rank(3, 2, 3), InvalidInput);
  EXPECT_THROW(cover::analyze_rank(3, 2, 0), InvalidInput);
}

TEST(AnalyzeRank, LowerRankRunsTheCoverPipeline) {
  const auto r = cover::analyze_rank(3, 5, 1);
  EXPECT_EQ(r.mode, "conjecture");
  EXPECT_TRUE(r.has_cover);
  EXPECT_EQ(r.group_order, 4u);
  EXPECT_TRUE(r.axioms.all());
}

TEST(Gauge, TreeGaugeKeepsInvariants) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto r = rank_one(3, q);
    const auto& base = r.gh.complex;
    const auto comp = complex::components(base);
    for (std::size_t root : {std::size_t{0}, base.vertices().size() - 1}) {
      const auto tree = complex::spanning_tree(base, comp, 0, root);
      const auto gauged = cover::tree_gauge_voltage(base, tree, r.phi, r.group);
      for (std::size_t e = 0; e < base.edges().size(); ++e)
        if (tree.in_tree[e]) EXPECT_EQ(gauged.of_edge[e], r.group.identity());
      const auto a = cover::build_cover(base, r.group, r.phi);
      const auto b = cover::build_cover(base, r.group, gauged);
      EXPECT_EQ(a.complex.edges().size(), b.complex.edges().size());
      EXPECT_EQ(complex::components(a.complex).count, complex::components(b.complex).count);
      const auto ca = complex::components(a.complex);
      const auto cb = complex::components(b.complex);
      EXPECT_EQ(complex::h1_abelian_invariants(a.complex, ca, 0),
                complex::h1_abelian_invariants(b.complex, cb, 0));
    }
  }
}

TEST(Pipeline, ThreadCountDoesNotChangeTheReport) {
  cover::PipelineOptions one, four;
  four.threads = 4;
  const auto a = cover::verify_rank1(3, 5, one);
  const auto b = cover::verify_rank1(3, 5, four);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.cover_cells, b.cover_cells);
  EXPECT_EQ(a.simply_connected.green_edges, b.simply_connected.green_edges);
  EXPECT_EQ(a.simply_connected.h1, b.simply_connected.h1);
}
