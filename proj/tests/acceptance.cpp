// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "ghc/cover.hpp"

using namespace ghc;
using gf::Matrix;
using smith::AbelianInvariants;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

bool report(int id, const std::string& desc, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  std::printf("criterion %d: %s %s%s%s\n", id, o.pass ? "PASS" : "FAIL", desc.c_str(),
              o.detail.empty() ? "" : " (", o.detail.empty() ? "" : (o.detail + ")").c_str());
  std::fflush(stdout);
  return o.pass;
}

std::string str(const AbelianInvariants& a) {
  std::string s = "Z^" + std::to_string(a.free_rank);
  for (auto t : a.torsion) s += " + Z/" + std::to_string(t);
  return s;
}

const std::vector<std::pair<std::size_t, std::uint32_t>> kRankOneCases = {
    {3, 2}, {3, 3}, {3, 5}, {4, 2}, {4, 3}};

std::vector<cover::Report>& rank_one_reports() {
  static std::vector<cover::Report> reports = [] {
    std::vector<cover::Report> out;
    for (auto [n, q] : kRankOneCases) out.push_back(cover::verify_rank1(n, q));
    return out;
  }();
  return reports;
}

std::vector<cover::Report>& free_reports() {
  static std::vector<cover::Report> reports = [] {
    std::vector<cover::Report> out;
    for (std::uint32_t q : {2u, 3u}) out.push_back(cover::analyze_rank(3, q, 2));
    return out;
  }();
  return reports;
}

std::string tag(const cover::Report& r) {
  return "n=" + std::to_string(r.n) + " q=" + std::to_string(r.q) + " k=" + std::to_string(r.k);
}

// Order of a as a residue mod q, by repeated multiplication.
std::size_t residue_order(std::uint32_t a, std::uint32_t q) {
  std::size_t k = 1;
  for (std::uint64_t x = a; x != 1; x = x * a % q) ++k;
  return k;
}

struct Scope {
  std::size_t n;
  std::uint32_t q;
  std::size_t k;
};

const std::vector<Scope> kSquareScope = {{3, 2, 1}, {3, 2, 2}, {3, 3, 1}};

std::string scope_tag(const Scope& s) {
  return "M" + std::to_string(s.n) + "(F" + std::to_string(s.q) + ") rank " + std::to_string(s.k);
}

const Matrix& mat(const biorder::BiorderedSet& E, std::size_t i) { return E.record(i).matrix; }

Matrix product(std::initializer_list<Matrix> ms) {
  auto it = ms.begin();
  Matrix acc = *it++;
  for (; it != ms.end(); ++it) acc = gf::mat_mul(acc, *it);
  return acc;
}

bool band_by_matrices(const biorder::BiorderedSet& E, const biorder::ESquare& s) {
  return product({mat(E, s.e), mat(E, s.f), mat(E, s.g), mat(E, s.h), mat(E, s.e)}) == mat(E, s.e);
}

bool nondegenerate(const biorder::ESquare& s) {
  return s.e != s.f && s.f != s.g && s.g != s.h && s.h != s.e && s.e != s.g && s.f != s.h;
}

// Every invertible k x k matrix over F_q.
std::vector<Matrix> all_invertible(std::size_t k, std::uint32_t q) {
  std::vector<Matrix> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k * k; ++i) total *= q;
  for (std::uint64_t code = 0; code < total; ++code) {
    Matrix m(k, k, q);
    std::uint64_t c = code;
    for (std::size_t i = 0; i < k * k; ++i, c /= q) m.set(i / k, i % k, c % q);
    if (gf::is_invertible(m)) out.push_back(m);
  }
  return out;
}

Outcome criterion1() {
  Outcome o;
  for (const auto& r : rank_one_reports()) {
    const auto units = grouppres::units_group(r.q);
    bool cyclic = false;
    for (std::uint32_t a = 1; a < r.q; ++a) cyclic = cyclic || residue_order(a, r.q) == r.q - 1;
    AbelianInvariants expected;
    if (r.q > 2) expected.torsion = {static_cast<std::int64_t>(r.q - 1)};
    if (r.verdict != "yes") o.fail(tag(r) + " verdict " + r.verdict);
    if (r.group_order != r.q - 1 || units.order() != r.q - 1)
      o.fail(tag(r) + " group order " + std::to_string(r.group_order));
    if (!cyclic || r.group_invariants != expected)
      o.fail(tag(r) + " group " + str(r.group_invariants));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const auto& r : free_reports()) {
    if (r.base_cells != 0) o.fail(tag(r) + " has " + std::to_string(r.base_cells) + " cells");
    if (r.verdict != "free") o.fail(tag(r) + " verdict " + r.verdict);
    if (r.base_components != 1) o.fail(tag(r) + " is not connected");
    const std::size_t cycle_rank = r.base_edges - r.base_vertices + 1;
    const AbelianInvariants free{cycle_rank, {}};
    const auto& s = r.base_component_summaries.at(0);
    if (r.free_rank != cycle_rank || s.h1 != free || s.pi1_abelianized != free ||
        s.pi1_generators != cycle_rank || s.pi1_relators != 0)
      o.fail(tag(r) + " rank " + std::to_string(r.free_rank));
    if (r.q == 2 && r.free_rank != 28 - 14 + 1) o.fail(tag(r) + " rank is not 15");
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t singular = 0;
  for (const auto& sc : kSquareScope) {
    const auto E = biorder::BiorderedSet::from_matrix_monoid(sc.n, sc.q, {sc.k});
    for (const auto& s : biorder::enumerate_esquares(E)) {
      if (!biorder::find_singularizer(s, E)) continue;
      ++singular;
      if (!band_by_matrices(E, s) || !biorder::is_rectangular_band(s, E))
        o.fail(scope_tag(sc) + " singular square is not a band");
    }
  }
  if (singular == 0) o.fail("no singular squares in scope");
  o.detail = o.pass ? std::to_string(singular) + " singular squares checked" : o.detail;
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t bands = 0;
  for (const auto& sc : kSquareScope) {
    const auto E = biorder::BiorderedSet::from_matrix_monoid(sc.n, sc.q, {sc.k});
    for (const auto& s : biorder::enumerate_esquares(E)) {
      if (!nondegenerate(s) || !band_by_matrices(E, s)) continue;
      ++bands;
      if (!biorder::find_singularizer(s, E)) o.fail(scope_tag(sc) + " band without singularizer");
      const auto c = biorder::construct_singularizer(s, E);
      const Matrix& t = c.eta;
      const bool idempotent = gf::mat_mul(t, t) == t;
      // te = e, th = h, et = f, ht = g
      const bool equations = gf::mat_mul(t, mat(E, s.e)) == mat(E, s.e) &&
                             gf::mat_mul(t, mat(E, s.h)) == mat(E, s.h) &&
                             gf::mat_mul(mat(E, s.e), t) == mat(E, s.f) &&
                             gf::mat_mul(mat(E, s.h), t) == mat(E, s.g);
      if (!idempotent || !equations || c.witness.direction != biorder::Direction::LeftRight ||
          !(E.record(c.witness.t).matrix == t))
        o.fail(scope_tag(sc) + " constructed singularizer fails");
    }
  }
  if (bands == 0) o.fail("no nondegenerate bands in scope");
  o.detail = o.pass ? std::to_string(bands) + " bands checked" : o.detail;
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t checks = 0;
  for (const auto& sc : kSquareScope) {
    const auto E = biorder::BiorderedSet::from_matrix_monoid(sc.n, sc.q, {sc.k});
    const auto gl = all_invertible(sc.k, sc.q);
    for (const auto& s : biorder::enumerate_esquares(E)) {
      const bool band = band_by_matrices(E, s);
      const auto& e = E.record(s.e);
      const auto& g = E.record(s.g);
      if (biorder::star_identity_holds(s, E) != band) o.fail(scope_tag(sc) + " identity != band");
      for (const auto& x : gl) {
        const Matrix xi = gf::mat_inv(x);
        // representative change keeping e = v w^T, on either idempotent
        const bool a = biorder::star_identity_holds(gf::mat_mul(e.v, x), gf::mat_mul(xi, e.wT),
                                                    g.v, g.wT);
        const bool b = biorder::star_identity_holds(e.v, e.wT, gf::mat_mul(g.v, x),
                                                    gf::mat_mul(xi, g.wT));
        // v -> v x, w^T -> x w^T on both at once
        const bool c = biorder::star_identity_holds(gf::mat_mul(e.v, x), gf::mat_mul(x, e.wT),
                                                    gf::mat_mul(g.v, x), gf::mat_mul(x, g.wT));
        checks += 3;
        if (a != band || b != band || c != band)
          o.fail(scope_tag(sc) + " verdict changes under representative change");
      }
    }
  }
  o.detail = o.pass ? std::to_string(checks) + " representative changes checked" : o.detail;
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (const auto& r : rank_one_reports()) {
    if (!r.has_cover) {
      o.fail(tag(r) + " built no cover");
      continue;
    }
    const auto& a = r.axioms;
    if (!a.vertex_count) o.fail(tag(r) + " vertex count");
    if (!a.star_bijective) o.fail(tag(r) + " star bijectivity");
    if (!a.cell_lifts) o.fail(tag(r) + " cell lifts");
    if (!a.euler) o.fail(tag(r) + " Euler characteristic");
    if (!a.fiber_collapse) o.fail(tag(r) + " fibre collapse");
    if (r.cover_vertices != r.group_order * r.base_vertices ||
        r.cover_cells != r.group_order * r.base_cells)
      o.fail(tag(r) + " counts");
  }
  o.detail = o.pass ? "rank-1 covers; the rank n-1 cases build none" : o.detail;
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::size_t compared = 0;
  auto check_summaries = [&](const cover::Report& r) {
    for (const auto& s : r.base_component_summaries) {
      ++compared;
      if (s.h1 != s.pi1_abelianized)
        o.fail(tag(r) + " base: " + str(s.h1) + " vs " + str(s.pi1_abelianized));
    }
  };
  for (const auto& r : rank_one_reports()) {
    check_summaries(r);
    ++compared;
    if (r.simply_connected.h1 != r.simply_connected.presentation_abelianized)
      o.fail(tag(r) + " cover");
  }
  for (const auto& r : free_reports()) check_summaries(r);

  const std::vector<std::pair<std::string, biorder::SemigroupTable>> tables = {
      {"left-zero", {2, {0, 0, 1, 1}}},
      {"right-zero", {2, {0, 1, 0, 1}}},
      {"2x2 band", {4, {0, 1, 0, 1, 0, 1, 0, 1, 2, 3, 2, 3, 2, 3, 2, 3}}}};
  for (const auto& [name, t] : tables) {
    const auto E = biorder::BiorderedSet::from_table(t);
    const auto gh = complex::build_gh(E);
    const auto& c = gh.complex;
    const auto comp = complex::components(c);
    for (std::size_t id = 0; id < comp.count; ++id) {
      const auto bp = complex::default_basepoint(c, comp, id);
      const auto tree = complex::spanning_tree(c, comp, id, bp);
      const auto pres = complex::pi1_presentation(c, comp, id, bp, tree);
      ++compared;
      if (grouppres::abelian_invariants(pres.presentation) !=
          complex::h1_abelian_invariants(c, comp, id))
        o.fail(name + " component " + std::to_string(id));
    }
  }
  o.detail = o.pass ? std::to_string(compared) + " components compared" : o.detail;
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t green = 0;
  for (const auto& r : rank_one_reports()) {
    const auto& sc = r.simply_connected;
    if (!sc.all_green) continue;
    ++green;
    if (!sc.tietze_trivial) o.fail(tag(r) + " all green but Tietze is not trivial");
    if (!sc.h1.trivial()) o.fail(tag(r) + " all green but H1 = " + str(sc.h1));
  }
  o.detail = o.pass ? std::to_string(green) + " all-green covers" : o.detail;
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto E = biorder::BiorderedSet::from_matrix_monoid(3, 3, {1});
  const auto gh = complex::build_gh(E);
  const auto& base = gh.complex;
  const auto group = grouppres::units_group(3);
  const auto phi = cover::gh_voltage(base, E, group);
  const auto comp = complex::components(base);
  const auto tree = complex::spanning_tree(base, comp, 0, complex::default_basepoint(base, comp, 0));
  const auto gauged = cover::tree_gauge_voltage(base, tree, phi, group);
  for (std::size_t e = 0; e < base.edges().size(); ++e)
    if (tree.in_tree[e] && gauged.of_edge[e] != group.identity())
      o.fail("tree edge with non-identity voltage");

  struct Summary {
    std::size_t v, e, f, components;
    std::vector<AbelianInvariants> h1;
  };
  auto summarize = [&](const cover::Voltage& volt) {
    const auto cv = cover::build_cover(base, group, volt);
    const auto cc = complex::components(cv.complex);
    Summary s{cv.complex.vertices().size(), cv.complex.edges().size(),
              cv.complex.cells().size(), cc.count, {}};
    for (std::size_t id = 0; id < cc.count; ++id)
      s.h1.push_back(complex::h1_abelian_invariants(cv.complex, cc, id));
    std::sort(s.h1.begin(), s.h1.end(), [](const auto& a, const auto& b) {
      return std::tie(a.free_rank, a.torsion) < std::tie(b.free_rank, b.torsion);
    });
    return s;
  };
  const auto a = summarize(phi);
  const auto b = summarize(gauged);
  if (a.v != b.v || a.e != b.e || a.f != b.f) o.fail("counts differ");
  if (a.components != b.components) o.fail("connectivity differs");
  if (a.h1 != b.h1) o.fail("H1 differs");
  o.detail = o.pass ? "V=" + std::to_string(a.v) + " E=" + std::to_string(a.e) +
                          " F=" + std::to_string(a.f) + " components=" +
                          std::to_string(a.components)
                    : o.detail;
  return o;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "rank-1 covers give verdict yes with cyclic group of order q-1", criterion1);
  ok &= report(2, "rank n-1 complexes have no 2-cells and free pi1 of rank E-V+1", criterion2);
  ok &= report(3, "every singular E-square is a rectangular band", criterion3);
  ok &= report(4, "every nondegenerate band has a brute-force and a constructed singularizer",
               criterion4);
  ok &= report(5, "star identity matches the band test under every representative change",
               criterion5);
  ok &= report(6, "cover axioms hold", criterion6);
  ok &= report(7, "abelianized pi1 equals Smith-form H1", criterion7);
  ok &= report(8, "all-green covers have trivial Tietze reduction and H1", criterion8);
  ok &= report(9, "tree gauge and pairing voltages give matching covers", criterion9);
  return ok ? 0 : 1;
}
