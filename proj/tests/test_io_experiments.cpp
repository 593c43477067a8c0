#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "spectra/spectra.hpp"

using namespace spectra;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("spectra_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const char* exe = std::getenv("SPECTRA_CLI");
  if (exe == nullptr) return -1;
  std::string cmd = std::string("\"") + exe + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(GraphJson, RoundTripIsExact) {
  for (const RootedGraph& g : {build_regular_tree(3, 4), build_znxn(2, 1), build_comb(2, 3), build_path(9, 4)}) {
    std::string text = graph_to_string(g);
    RootedGraph back = graph_from_string(text);
    EXPECT_TRUE(back == g);
    EXPECT_EQ(graph_to_string(back), text);
    EXPECT_EQ(back.boundary_marked(), g.boundary_marked());
    if (g.boundary_marked()) {
      EXPECT_EQ(std::vector<vertex_id>(back.boundary().begin(), back.boundary().end()),
                std::vector<vertex_id>(g.boundary().begin(), g.boundary().end()));
    }
  }
  auto comb = graph_from_string(graph_to_string(build_comb(1, 1)));
  EXPECT_TRUE(comb.has_labels());
  EXPECT_EQ(comb.label(comb.root()), "(0,0)");
}

TEST(GraphJson, FixedText) {
  GraphBuilder b(3);
  b.add_edge(2, 1);
  b.add_edge(0, 1);
  auto g = std::move(b).finish(1);
  EXPECT_EQ(graph_to_string(g), "{\"edges\":[[0,1],[1,2]],\"root\":1,\"vertex_count\":3}\n");
}

TEST(GraphJson, RejectsMalformedInput) {
  EXPECT_THROW(graph_from_string("not json"), parameter_error);
  EXPECT_THROW(graph_from_string("[]"), parameter_error);
  EXPECT_THROW(graph_from_string("{\"root\":0,\"edges\":[]}"), parameter_error);
  EXPECT_THROW(graph_from_string("{\"vertex_count\":2,\"root\":0,\"edges\":[[0]]}"), parameter_error);
  EXPECT_THROW(graph_from_string("{\"vertex_count\":2,\"root\":0,\"edges\":[[0,0]]}"), parameter_error);
  // Vertex 1 is unreachable.
  EXPECT_THROW(graph_from_string("{\"vertex_count\":2,\"root\":0,\"edges\":[]}"), parameter_error);
  EXPECT_THROW(graph_from_string("{\"vertex_count\":2,\"root\":0,\"edges\":[[0,1]],\"labels\":[\"a\"]}"),
               parameter_error);
  EXPECT_THROW(read_graph("/nonexistent/graph.json"), std::runtime_error);
}

TEST(Potential, ShorthandsAndJson) {
  auto g = std::make_shared<const RootedGraph>(build_path(10));
  EXPECT_EQ(make_operator(g, parse_potential("free")).diagonal(3), 0.0);
  EXPECT_EQ(make_operator(g, parse_potential("constant:1.5")).diagonal(3), 1.5);
  auto sq = make_operator(g, parse_potential("sparse-squares:2"));
  EXPECT_EQ(sq.diagonal(4), 2.0);
  EXPECT_EQ(sq.diagonal(5), 0.0);
  auto tree = std::make_shared<const RootedGraph>(build_regular_tree(3, 2));
  auto rad = make_operator(tree, parse_potential("radial:0.5,-1,2"));
  EXPECT_EQ(rad.diagonal(0), 0.5);
  EXPECT_EQ(rad.diagonal(9), 2.0);
  auto js = parse_potential("{\"rule\":\"sparse-squares\",\"alpha\":3}");
  EXPECT_EQ(potential_to_json(js), json::parse("{\"rule\":\"sparse-squares\",\"alpha\":3.0}"));
  EXPECT_THROW(parse_potential("constant:x"), parameter_error);
  EXPECT_THROW(parse_potential("constant:1.5abc"), parameter_error);
  EXPECT_THROW(parse_potential("bogus:1"), parameter_error);
  EXPECT_THROW(parse_potential("bogus"), parameter_error);
  EXPECT_THROW(parse_potential("{\"rule\":\"radial\"}"), parameter_error);
  EXPECT_THROW(parse_potential("{broken"), parameter_error);
}

TEST(Experiments, RegistryAndUnknownName) {
  auto names = experiment_names();
  for (const char* n : {"sparse-tree", "counterexample", "znxn", "comb-sparse-cycles", "localization-bounds",
                        "jacobi-limits", "shnol"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  EXPECT_THROW(run_experiment("no-such-thing", {}, scratch("unknown").string()), parameter_error);
  EXPECT_THROW(run_experiment("shnol", {{"no_such_param", "1"}}, scratch("badparam").string()), parameter_error);
}

TEST(Experiments, ReportsAreDeterministic) {
  for (const char* name : {"shnol", "sparse-tree"}) {
    auto a = scratch(std::string(name) + "_a"), b = scratch(std::string(name) + "_b");
    auto ra = run_experiment(name, {}, a.string());
    auto rb = run_experiment(name, {}, b.string());
    EXPECT_TRUE(ra.pass()) << name;
    ASSERT_EQ(ra.artifacts, rb.artifacts);
    EXPECT_EQ(ra.artifacts.front(), "report.json");
    for (const auto& f : ra.artifacts)
      EXPECT_EQ(read_text_file((a / f).string()), read_text_file((b / f).string())) << name << "/" << f;
    auto j = json::parse(read_text_file((a / "report.json").string()));
    EXPECT_EQ(j.at("name"), name);
    EXPECT_EQ(j.at("claims").size(), ra.claims.size());
  }
}

TEST(Experiments, ClaimRelations) {
  Claim c;
  c.expected = 1.0;
  c.observed = 1.05;
  c.tolerance = 0.1;
  EXPECT_TRUE(evaluate_claim(c));
  c.relation = "at_most";
  c.observed = 1.2;
  EXPECT_FALSE(evaluate_claim(c));
  c.relation = "at_least";
  EXPECT_TRUE(evaluate_claim(c));
  c.observed = std::nan("");
  EXPECT_FALSE(evaluate_claim(c));
}

TEST(Cli, GenerateSpectrumAndRLimits) {
  if (std::getenv("SPECTRA_CLI") == nullptr) GTEST_SKIP() << "SPECTRA_CLI not set";
  auto dir = scratch("cli");
  auto graph = dir / "path.json";
  ASSERT_EQ(run_cli("generate --family tree --degree 2 --depth 60 --out " + graph.string(), dir / "gen.log"), 0);
  EXPECT_TRUE(read_graph(graph.string()) == build_regular_tree(2, 60));

  auto csv = dir / "spectrum.csv";
  ASSERT_EQ(run_cli("spectrum --graph " + graph.string() + " --radii 20,40,60 --out " + csv.string(), dir / "s.log"),
            0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "eigenvalue,interval_lo,interval_hi");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  EXPECT_EQ(rows, 121u);

  auto rj = dir / "rl.json";
  ASSERT_EQ(run_cli("rlimits --graph " + graph.string() + " --rmax 2 --eps 1e-9 --margin 4 --model-radius 40 --out " +
                        rj.string(),
                    dir / "r.log"),
            0);
  auto j = json::parse(read_text_file(rj.string()));
  ASSERT_EQ(j.at("candidates").size(), 1u);
  EXPECT_EQ(j["candidates"][0]["catalog"], "Z");
  EXPECT_EQ(j["candidates"][0]["radius"], 2);
}

TEST(Cli, ExitCodes) {
  if (std::getenv("SPECTRA_CLI") == nullptr) GTEST_SKIP() << "SPECTRA_CLI not set";
  auto dir = scratch("cli_errors");
  EXPECT_NE(run_cli("", dir / "none.log"), 0);
  EXPECT_NE(run_cli("generate --family nope --out " + (dir / "x.json").string(), dir / "fam.log"), 0);
  EXPECT_NE(run_cli("spectrum --graph /nonexistent.json --radii 1 --out " + (dir / "y.csv").string(), dir / "g.log"),
            0);
  EXPECT_NE(run_cli("experiment no-such-thing", dir / "e.log"), 0);
  EXPECT_EQ(run_cli("experiment shnol --out " + (dir / "shnol").string(), dir / "ok.log"), 0);
  EXPECT_TRUE(fs::exists(dir / "shnol" / "report.json"));
}
