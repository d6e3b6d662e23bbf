// ghc: command-line front end for the Graham-Houghton complex library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghc/biorder.hpp"
#include "ghc/complex.hpp"
#include "ghc/cover.hpp"
#include "ghc/errors.hpp"
#include "ghc/grouppres.hpp"
#include "ghc/io.hpp"
#include "ghc/linmonoid.hpp"

namespace {

using ghc::io::Json;

struct RunConfig {
  std::string command;
  std::size_t n = 0;
  std::uint32_t q = 0;
  std::vector<std::size_t> k;
  std::string table;
  std::string complex_path;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  std::optional<std::uint64_t> edge_budget;
  std::optional<std::uint64_t> enum_budget;
  std::optional<std::size_t> tietze_budget;
  std::size_t component = 0;
  bool simplify = false;
  bool timings = false;
};

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

// GHC_BUDGET: "enum=N,edges=N,tietze=N" or a bare edge budget.
ghc::cover::Budgets budgets_from_env() {
  ghc::cover::Budgets b;
  const char* raw = std::getenv("GHC_BUDGET");
  if (raw == nullptr || *raw == '\0') return b;
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw ghc::InvalidInput("GHC_BUDGET: bad number '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      b.cover_edges = number(item);
      continue;
    }
    const auto key = item.substr(0, eq);
    const auto value = number(item.substr(eq + 1));
    if (key == "enum")
      b.enumeration = value;
    else if (key == "edges")
      b.cover_edges = value;
    else if (key == "tietze")
      b.tietze_moves = value;
    else
      throw ghc::InvalidInput("GHC_BUDGET: unknown key '" + key + "'");
  }
  return b;
}

ghc::cover::PipelineOptions pipeline_options(const RunConfig& cfg) {
  ghc::cover::PipelineOptions opt;
  opt.budgets = budgets_from_env();
  if (cfg.edge_budget) opt.budgets.cover_edges = *cfg.edge_budget;
  if (cfg.enum_budget) opt.budgets.enumeration = *cfg.enum_budget;
  if (cfg.tietze_budget) opt.budgets.tietze_moves = *cfg.tietze_budget;
  opt.threads = cfg.threads;
  return opt;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw ghc::IOError("cannot write " + cfg.out);
  os << text;
}

void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw ghc::InvalidInput("format '" + cfg.format + "' not supported by " + cfg.command);
}

std::vector<std::size_t> ranks_or_all(const RunConfig& cfg) {
  if (!cfg.k.empty()) return cfg.k;
  std::vector<std::size_t> all;
  for (std::size_t k = 0; k <= cfg.n; ++k) all.push_back(k);
  return all;
}

bool uses_matrix(const RunConfig& cfg) { return cfg.table.empty(); }

ghc::biorder::BiorderedSet load_biordered_set(const RunConfig& cfg) {
  if (!cfg.table.empty()) {
    auto j = ghc::io::parse_json(ghc::io::read_file(cfg.table), cfg.table);
    auto E = ghc::biorder::BiorderedSet::from_table(ghc::io::table_from_json(j));
    if (!E.regular())
      std::cerr << "warning: RegularityWarning: " << cfg.table << " is not a regular semigroup\n";
    return E;
  }
  if (cfg.n == 0 || cfg.q == 0) throw ghc::InvalidInput("--n and --q are required");
  return ghc::biorder::BiorderedSet::from_matrix_monoid(cfg.n, cfg.q, ranks_or_all(cfg),
                                                        pipeline_options(cfg).budgets.enumeration);
}

ghc::complex::GhOptions gh_options(const RunConfig& cfg) {
  return {ghc::complex::SingularityMethod::Auto, cfg.threads};
}

// Union of green closures, one per component, seeded by the default tree.
std::vector<bool> green_edges(const ghc::complex::Complex2& c) {
  const auto comp = ghc::complex::components(c);
  std::vector<bool> green(c.edges().size(), false);
  for (std::size_t id = 0; id < comp.count; ++id) {
    const auto bp = ghc::complex::default_basepoint(c, comp, id);
    const auto tree = ghc::complex::spanning_tree(c, comp, id, bp);
    const auto g = ghc::complex::green_closure(c, comp, id, tree);
    for (std::size_t e = 0; e < green.size(); ++e)
      if (g.green[e]) green[e] = true;
  }
  return green;
}

int exit_for_verdict(const std::string& verdict) {
  return verdict == "inconclusive" ? kExitInconclusive : kExitOk;
}

int cmd_idempotents(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  ghc::gf::check_modulus(cfg.q);
  if (cfg.k.size() != 1) throw ghc::InvalidInput("idempotents needs exactly one --k");
  auto recs = ghc::linmonoid::enumerate_idempotents(cfg.n, cfg.q, cfg.k[0],
                                                    pipeline_options(cfg).budgets.enumeration);
  emit_json(cfg, ghc::io::idempotents_to_json(cfg.n, cfg.q, recs));
  return kExitOk;
}

std::string complex_text(const Json& j) {
  std::ostringstream os;
  os << "vertices " << j["vertices"].size() << "\nedges " << j["edges"].size() << "\ncells "
     << j["cells"].size() << "\ncomponents " << j["components"].get<std::size_t>() << "\n";
  if (j.contains("squares"))
    os << "squares " << j["squares"].get<std::size_t>() << "\nsingular_squares "
       << j["singular_squares"].get<std::size_t>() << "\n";
  for (const auto& r : j["component_reports"]) {
    os << "component " << r["id"].get<std::size_t>() << ": V=" << r["vertices"].get<std::size_t>()
       << " E=" << r["edges"].get<std::size_t>() << " F=" << r["cells"].get<std::size_t>()
       << " chi=" << r["chi"].get<std::int64_t>()
       << " H1 free=" << r["h1"]["free_rank"].get<std::size_t>() << " torsion=[";
    bool first = true;
    for (const auto& t : r["h1"]["torsion"]) {
      os << (first ? "" : ",") << t.get<std::int64_t>();
      first = false;
    }
    os << "]\n";
  }
  return os.str();
}

int cmd_complex(const RunConfig& cfg) {
  require_format(cfg, {"json", "dot", "text"});
  ghc::complex::Complex2 c;
  std::optional<std::size_t> squares, singular;
  if (!cfg.complex_path.empty()) {
    c = ghc::io::complex_from_json(
        ghc::io::parse_json(ghc::io::read_file(cfg.complex_path), cfg.complex_path));
  } else {
    const auto E = load_biordered_set(cfg);
    auto gh = ghc::complex::build_gh(E, gh_options(cfg));
    squares = gh.squares.size();
    singular = gh.cell_square.size();
    c = std::move(gh.complex);
  }
  if (cfg.format == "dot") {
    emit(cfg, ghc::io::to_dot(c, green_edges(c)));
    return kExitOk;
  }
  Json j = ghc::io::complex_report(c);
  if (squares) {
    j["squares"] = *squares;
    j["singular_squares"] = *singular;
  }
  emit(cfg, cfg.format == "json" ? j.dump(2) + "\n" : complex_text(j));
  return kExitOk;
}

int cmd_squares(const RunConfig& cfg) {
  require_format(cfg, {"json", "text"});
  const auto E = load_biordered_set(cfg);
  const auto gh = ghc::complex::build_gh(E, gh_options(cfg));
  const Json j = ghc::io::squares_to_json(E, gh.squares);
  if (cfg.format == "json") {
    emit_json(cfg, j);
    return kExitOk;
  }
  std::ostringstream os;
  for (const auto& s : j) {
    os << s["e"].get<std::size_t>() << " " << s["f"].get<std::size_t>() << " "
       << s["g"].get<std::size_t>() << " " << s["h"].get<std::size_t>()
       << (s["band"].get<bool>() ? " band" : " nonband");
    if (s.contains("witness"))
      os << " singular " << s["witness"]["direction"].get<std::string>() << " "
         << s["witness"]["t"].get<std::string>();
    os << "\n";
  }
  emit(cfg, os.str());
  return kExitOk;
}

int cmd_pi1(const RunConfig& cfg) {
  require_format(cfg, {"text", "json"});
  ghc::complex::Complex2 c;
  if (!cfg.complex_path.empty()) {
    c = ghc::io::complex_from_json(
        ghc::io::parse_json(ghc::io::read_file(cfg.complex_path), cfg.complex_path));
  } else {
    c = ghc::complex::build_gh(load_biordered_set(cfg), gh_options(cfg)).complex;
  }
  const auto comp = ghc::complex::components(c);
  if (cfg.component >= comp.count)
    throw ghc::InvalidInput("component " + std::to_string(cfg.component) + " does not exist");
  const auto bp = ghc::complex::default_basepoint(c, comp, cfg.component);
  const auto tree = ghc::complex::spanning_tree(c, comp, cfg.component, bp);
  auto pres = ghc::complex::pi1_presentation(c, comp, cfg.component, bp, tree).presentation;
  bool exceeded = false;
  if (cfg.simplify) {
    auto t = ghc::grouppres::tietze_simplify(pres, pipeline_options(cfg).budgets.tietze_moves);
    pres = std::move(t.presentation);
    exceeded = t.budget_exceeded;
  }
  if (cfg.format == "text") {
    emit(cfg, pres.to_text());
    return kExitOk;
  }
  Json j = ghc::io::presentation_to_json(pres);
  j["component"] = cfg.component;
  j["basepoint"] = bp;
  j["abelianized"] = ghc::io::invariants_to_json(ghc::grouppres::abelian_invariants(pres));
  j["h1"] = ghc::io::invariants_to_json(ghc::complex::h1_abelian_invariants(c, comp, cfg.component));
  if (cfg.simplify) j["tietze_budget_exceeded"] = exceeded;
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_cover(const RunConfig& cfg) {
  require_format(cfg, {"json", "dot"});
  if (cfg.k.size() != 1) throw ghc::InvalidInput("cover needs exactly one --k");
  const auto k = cfg.k[0];
  const auto opt = pipeline_options(cfg);
  if (cfg.format == "json") {
    const auto r = ghc::cover::run_cover_pipeline(cfg.n, cfg.q, k, opt, "cover");
    emit_json(cfg, ghc::io::report_to_json(r, cfg.timings));
    return exit_for_verdict(r.verdict);
  }
  const auto E = ghc::biorder::BiorderedSet::from_matrix_monoid(cfg.n, cfg.q, {k},
                                                                opt.budgets.enumeration);
  const auto gh = ghc::complex::build_gh(E, gh_options(cfg));
  const auto group =
      k == 1 ? ghc::grouppres::units_group(cfg.q) : ghc::grouppres::gl_table(k, cfg.q);
  const auto phi = ghc::cover::gh_voltage(gh.complex, E, group);
  const auto cv = ghc::cover::build_cover(gh.complex, group, phi, opt.budgets.cover_edges);
  emit(cfg, ghc::io::to_dot(cv.complex, green_edges(cv.complex)));
  return kExitOk;
}

int cmd_verify_rank1(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  const auto r = ghc::cover::verify_rank1(cfg.n, cfg.q, pipeline_options(cfg));
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  emit_json(cfg, ghc::io::report_to_json(r, cfg.timings));
  return exit_for_verdict(r.verdict);
}

int cmd_analyze(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (cfg.k.size() != 1) throw ghc::InvalidInput("analyze needs exactly one --k");
  const auto r = ghc::cover::analyze_rank(cfg.n, cfg.q, cfg.k[0], pipeline_options(cfg));
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  emit_json(cfg, ghc::io::report_to_json(r, cfg.timings));
  return exit_for_verdict(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graham-Houghton complexes, covers and maximal subgroups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_field = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "matrix size")->check(CLI::PositiveNumber);
    sub->add_option("--q", cfg.q, "prime field order");
  };
  auto add_common = [&](CLI::App* sub, const char* default_format) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json, dot or text")->default_str(default_format);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--edge-budget", cfg.edge_budget, "cover edge cap");
    sub->add_option("--enum-budget", cfg.enum_budget, "idempotent enumeration cap");
    sub->add_option("--tietze-budget", cfg.tietze_budget, "Tietze move cap");
    sub->add_flag("--timings", cfg.timings, "add stage timings to reports");
    sub->parse_complete_callback([&, sub, default_format] {
      cfg.command = sub->get_name();
      if (sub->count("--format") == 0) cfg.format = default_format;
    });
  };

  auto* idem = app.add_subcommand("idempotents", "list idempotents of rank k");
  add_field(idem);
  idem->add_option("--k", cfg.k, "rank")->required()->expected(1);
  add_common(idem, "json");

  auto* cplx = app.add_subcommand("complex", "build the GH complex");
  add_field(cplx);
  cplx->add_option("--k", cfg.k, "ranks (comma separated; default all)")->delimiter(',');
  cplx->add_option("--table", cfg.table, "semigroup table JSON");
  cplx->add_option("--complex", cfg.complex_path, "re-ingest a complex JSON");
  add_common(cplx, "json");

  auto* sq = app.add_subcommand("squares", "classify E-squares");
  add_field(sq);
  sq->add_option("--k", cfg.k, "ranks (comma separated; default all)")->delimiter(',');
  sq->add_option("--table", cfg.table, "semigroup table JSON");
  add_common(sq, "json");

  auto* pi1 = app.add_subcommand("pi1", "fundamental group presentation");
  add_field(pi1);
  pi1->add_option("--k", cfg.k, "ranks (comma separated; default all)")->delimiter(',');
  pi1->add_option("--table", cfg.table, "semigroup table JSON");
  pi1->add_option("--complex", cfg.complex_path, "complex JSON");
  pi1->add_option("--component", cfg.component, "component index");
  pi1->add_flag("--simplify", cfg.simplify, "apply Tietze moves");
  add_common(pi1, "text");

  auto* cov = app.add_subcommand("cover", "build the group-labelled cover");
  add_field(cov);
  cov->add_option("--k", cfg.k, "rank")->required()->expected(1);
  add_common(cov, "json");

  auto* rank1 = app.add_subcommand("verify-rank1", "rank-1 maximal subgroup check");
  add_field(rank1);
  add_common(rank1, "json");

  auto* an = app.add_subcommand("analyze", "rank-k analysis");
  add_field(an);
  an->add_option("--k", cfg.k, "rank")->required()->expected(1);
  add_common(an, "json");

  for (auto* sub : {rank1, an, cov}) {
    sub->get_option("--n")->required();
    sub->get_option("--q")->required();
  }
  idem->get_option("--n")->required();
  idem->get_option("--q")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (!cfg.table.empty() && !cfg.complex_path.empty())
      throw ghc::InvalidInput("--table and --complex are exclusive");
    if (uses_matrix(cfg) && cfg.complex_path.empty() && cfg.q != 0) ghc::gf::check_modulus(cfg.q);
    if (cfg.command == "idempotents") return cmd_idempotents(cfg);
    if (cfg.command == "complex") return cmd_complex(cfg);
    if (cfg.command == "squares") return cmd_squares(cfg);
    if (cfg.command == "pi1") return cmd_pi1(cfg);
    if (cfg.command == "cover") return cmd_cover(cfg);
    if (cfg.command == "verify-rank1") return cmd_verify_rank1(cfg);
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    throw ghc::InvalidInput("unknown command " + cfg.command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
