// Command-line front end: graph generation, finite-section spectra, R-limit
// detection and the named experiment scenarios.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectra/spectra.hpp"

using namespace spectra;

namespace {

struct GenerateArgs {
  std::string family, out;
  std::size_t degree = 3, depth = 6, n = 2, levels = 4, arm = 4, spine = 8, k = 3, ray = 50, tail = 0;
  std::vector<std::size_t> k_values{2}, branch_levels{4, 8}, cycle_levels{6}, blocks{20, 40, 80};
  std::vector<int> girths{4, 5, 5};
  std::uint64_t seed = 1;
};

struct SpectrumArgs {
  std::string graph, potential = "free", convention = "adj", out;
  std::vector<std::size_t> radii;
  long center = -1;
  double gap = 0.0;
};

struct RLimitArgs {
  std::string graph, potential = "free", convention = "adj", out;
  std::size_t rmax = 2, margin = 2, model_radius = 10;
  double eps = 1e-9, gap = 0.05;
};

struct ExperimentArgs {
  std::string name, out = "out";
  std::vector<std::string> params;
  long seed = -1;
};

RootedGraph generate(const GenerateArgs& a) {
  if (a.family == "tree") return build_regular_tree(a.degree, a.depth);
  if (a.family == "znxn") return build_znxn(a.n, a.levels);
  if (a.family == "comb") return build_comb(a.arm, a.spine);
  if (a.family == "star") return build_star(a.k, a.ray);
  if (a.family == "sparse-cycles") {
    std::vector<std::size_t> ks = a.k_values;
    if (ks.size() == 1 && a.branch_levels.size() > 1) ks.assign(a.branch_levels.size(), ks.front());
    return build_sparse_tree_with_cycles(ks, a.branch_levels, a.cycle_levels, a.depth);
  }
  if (a.family == "counterexample") return build_counterexample(a.degree, a.blocks, a.girths, a.seed, a.tail);
  throw parameter_error("unknown family '" + a.family + "'");
}

SchrodingerOperator load_operator(const std::string& graph, const std::string& potential, const std::string& conv) {
  auto g = std::make_shared<const RootedGraph>(read_graph(graph));
  return make_operator(g, parse_potential(potential), parse_convention(conv));
}

int run_spectrum(const SpectrumArgs& a) {
  auto h = load_operator(a.graph, a.potential, a.convention);
  vertex_id c = a.center < 0 ? h.graph().root() : static_cast<vertex_id>(a.center);
  SpectrumOptions opt;
  opt.gap_threshold = a.gap;
  auto s = spectrum_approx(h, c, a.radii, opt);
  CsvTable t{{"eigenvalue", "interval_lo", "interval_hi"}, {}};
  std::size_t iv = 0;
  for (double x : s.eigenvalues) {
    while (iv + 1 < s.intervals.size() && x > s.intervals[iv].hi) ++iv;
    t.add({x, s.intervals[iv].lo, s.intervals[iv].hi});
  }
  write_text_file(a.out, t.str());
  std::printf("radius %zu: %zu eigenvalues, gap threshold %s\n", s.truncation_radius, s.eigenvalues.size(),
              format_g12(s.gap_threshold).c_str());
  for (const auto& x : s.intervals) std::printf("  [%s, %s]\n", format_g12(x.lo).c_str(), format_g12(x.hi).c_str());
  for (std::size_t i = 0; i < s.stability.size(); ++i)
    std::printf("  hausdorff(r%zu, r%zu) = %s\n", a.radii[i], a.radii[i + 1], format_g12(s.stability[i]).c_str());
  return 0;
}

int run_rlimits(const RLimitArgs& a) {
  auto h = load_operator(a.graph, a.potential, a.convention);
  auto report = detect_rlimits(h, sample_paths(h.graph()), a.rmax, a.eps, a.margin);
  json j;
  j["eligible"] = report.eligible;
  j["diagnostics"] = report.diagnostics;
  json cands = json::array();
  if (!report.candidates.empty()) {
    std::vector<CandidateModel> models;
    std::vector<std::string> diag;
    auto uni = union_spectrum(report.candidates, a.model_radius, a.gap, &diag, &models);
    // Models are only produced for coherent candidates; match them up by position.
    std::size_t m = 0;
    for (const auto& c : report.candidates) {
      if (!detail::coherence_problem(c).empty()) continue;
      cands.push_back(candidate_to_json(c, models.at(m++), a.gap));
    }
    j["union"] = intervals_to_json(uni.intervals);
    for (const auto& d : diag) j["diagnostics"].push_back(d);
  } else {
    j["union"] = json::array();
  }
  j["candidates"] = std::move(cands);
  write_text_file(a.out, j.dump(2) + "\n");
  std::printf("%zu eligible vertices, %zu candidates\n", report.eligible, report.candidates.size());
  for (const auto& c : report.candidates)
    std::printf("  %s  witnesses %zu  %s\n", c.hash_hex().c_str(), c.stability_count,
                c.catalog.kind == CatalogEntry::Kind::none ? "" : c.catalog.name().c_str());
  for (const auto& d : report.diagnostics) std::printf("  note: %s\n", d.c_str());
  return 0;
}

int run_named_experiment(const ExperimentArgs& a) {
  std::map<std::string, std::string> params;
  for (const auto& kv : a.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw parameter_error("--param expects key=value, got '" + kv + "'");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (a.seed >= 0) params["seed"] = std::to_string(a.seed);
  auto report = run_experiment(a.name, params, a.out);
  for (const auto& c : report.claims)
    std::printf("%s  %s: observed %s, expected %s (%s, tol %s)\n", c.pass ? "PASS" : "FAIL", c.description.c_str(),
                format_g12(c.observed).c_str(), format_g12(c.expected).c_str(), c.relation.c_str(),
                format_g12(c.tolerance).c_str());
  std::printf("%s: %s\n", report.name.c_str(), report.pass() ? "all claims pass" : "some claims fail");
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Schroedinger operators on graphs: finite sections, R-limits, localization checks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a graph family member as canonical graph JSON");
  g->add_option("--family", gen.family, "tree|znxn|comb|star|sparse-cycles|counterexample")
      ->required()
      ->check(CLI::IsMember({"tree", "znxn", "comb", "star", "sparse-cycles", "counterexample"}));
  g->add_option("--degree,-d", gen.degree, "tree degree / block regularity");
  g->add_option("--depth", gen.depth, "tree depth");
  g->add_option("--n", gen.n, "lattice dimension (znxn)");
  g->add_option("--levels", gen.levels, "box levels (znxn)");
  g->add_option("--arm", gen.arm, "arm length (comb)");
  g->add_option("--spine", gen.spine, "spine half-length (comb)");
  g->add_option("--k", gen.k, "number of rays (star)");
  g->add_option("--ray", gen.ray, "ray length (star)");
  g->add_option("--k-values", gen.k_values, "branching numbers (sparse-cycles)")->delimiter(',');
  g->add_option("--branch-levels", gen.branch_levels, "branching levels (sparse-cycles)")->delimiter(',');
  g->add_option("--cycle-levels", gen.cycle_levels, "cycle levels (sparse-cycles)")->delimiter(',');
  g->add_option("--blocks", gen.blocks, "block sizes (counterexample)")->delimiter(',');
  g->add_option("--girths", gen.girths, "block girth floors (counterexample)")->delimiter(',');
  g->add_option("--seed", gen.seed, "random seed (counterexample)");
  g->add_option("--tail", gen.tail, "spine length past the last block (counterexample)");
  g->add_option("--out", gen.out, "output file")->required();

  SpectrumArgs sp;
  auto* s = app.add_subcommand("spectrum", "Finite-section spectrum around a vertex");
  s->add_option("--graph", sp.graph, "graph JSON")->required();
  s->add_option("--potential", sp.potential, "free | constant:C | sparse-squares:A | radial:q0,q1,... | JSON");
  s->add_option("--convention", sp.convention, "adj|lap")->check(CLI::IsMember({"adj", "lap"}));
  s->add_option("--radii", sp.radii, "increasing ball radii")->required()->delimiter(',');
  s->add_option("--center", sp.center, "centre vertex (default: root)");
  s->add_option("--gap", sp.gap, "gap threshold (default: 10 * diameter / N)");
  s->add_option("--out", sp.out, "output CSV")->required();

  RLimitArgs rl;
  auto* r = app.add_subcommand("rlimits", "Detect recurring local patterns along paths to the boundary");
  r->add_option("--graph", rl.graph, "graph JSON")->required();
  r->add_option("--potential", rl.potential, "potential rule");
  r->add_option("--convention", rl.convention, "adj|lap")->check(CLI::IsMember({"adj", "lap"}));
  r->add_option("--rmax", rl.rmax, "largest pattern radius")->required();
  r->add_option("--eps", rl.eps, "operator-norm tolerance")->required();
  r->add_option("--margin", rl.margin, "minimal distance from the truncation boundary")->required();
  r->add_option("--model-radius", rl.model_radius, "radius of the finite candidate models");
  r->add_option("--gap", rl.gap, "gap threshold for candidate spectra");
  r->add_option("--out", rl.out, "output JSON")->required();

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "Run a named scenario and write its report");
  e->add_option("name", ex.name, "scenario name")->required()->check(CLI::IsMember(experiment_names()));
  e->add_option("--param", ex.params, "scenario parameter key=value (repeatable)");
  e->add_option("--seed", ex.seed, "random seed");
  e->add_option("--out", ex.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) {
      write_graph(gen.out, generate(gen));
      return 0;
    }
    if (*s) return run_spectrum(sp);
    if (*r) return run_rlimits(rl);
    if (*e) return run_named_experiment(ex);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  return 2;
}
