#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vfwalk/cli.hpp"

using namespace vfwalk;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(VFWALK_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("vfwalk_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, InfoK4) {
  const Result r = run({"info", data("k4.emb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "n=4\nl=6\ns=4\ng=0\ntype=(3,3)\ncircular=true\ntrace=1.333333333333\ntrace_formula=1.333333333333\n");
  EXPECT_EQ(run({data("k4.emb")}).out, r.out);
  EXPECT_EQ(run({"info", "--builtin", "k4-planar"}).out, r.out);
}

TEST(Cli, InfoTorus) {
  const Result r = run({"--builtin", "torus-grid:4", "info"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("g=1\n"), std::string::npos);
  EXPECT_NE(r.out.find("type=(4,4)\n"), std::string::npos);
  EXPECT_EQ(r.out, run({"info", data("torus4.emb")}).out);
}

TEST(Cli, SpectrumJson) {
  const Result r = run({"spectrum", data("k4.emb")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["arcs"], 12);
  EXPECT_EQ(j["rank_C"], 4);
  EXPECT_EQ(j["total_multiplicity"], 12);
  ASSERT_EQ(j["classes"].size(), 3u);
  EXPECT_EQ(j["classes"][0]["eigenvalue"], "1");
  EXPECT_EQ(j["classes"][0]["multiplicity"], 6);
  EXPECT_EQ(j["classes"][1]["multiplicity"], 3);
  EXPECT_DOUBLE_EQ(j["classes"][1]["cos_theta"].get<double>(), -0.777777777778);
  EXPECT_DOUBLE_EQ(j["classes"][1]["mu"].get<double>(), 0.111111111111);
  EXPECT_LE(j["reconstruction_residual"].get<double>(), 1e-9);

  const auto torus = nlohmann::json::parse(run({"spectrum", "--builtin", "torus-grid:4"}).out);
  int total = 0;
  for (const auto& c : torus["classes"]) total += c["multiplicity"].get<int>();
  EXPECT_EQ(total, 64);
}

TEST(Cli, Hamiltonian) {
  const Result r = run({"hamiltonian", data("k4.emb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("theta=2.461918834682\n"), std::string::npos);
  EXPECT_NE(r.out.find("S_entries_in_range=true\n"), std::string::npos);
  EXPECT_NE(r.out.find("degrees_match=true\n"), std::string::npos);
}

TEST(Cli, HDigraphDot) {
  const std::string path = temp_path("h.dot");
  const Result r = run({"hdigraph", data("k4.emb"), "--dot", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string dot = slurp(path);
  std::remove(path.c_str());
  EXPECT_EQ(dot.rfind("digraph H {", 0), 0u);
  EXPECT_NE(dot.find("[label=\"0->1\"]"), std::string::npos);
  std::size_t edges = 0;
  for (const auto& l : lines(dot)) edges += l.find("->") != std::string::npos && l.find("weight=") != std::string::npos;
  EXPECT_EQ(edges, 24u);
  EXPECT_EQ(run({"hdigraph", data("k4.emb"), "--dot"}).out, dot);
}

TEST(Cli, Classify) {
  const auto j = nlohmann::json::parse(run({"classify", data("k4.emb")}).out);
  EXPECT_EQ(j["kind"], "two-design");
  EXPECT_EQ(j["two_design"]["lambda"], 2);
  EXPECT_EQ(j["partial_geometric"]["t"], 6);
  EXPECT_EQ(j["partial_geometric"]["c"], 2);

  const std::string fano = temp_path("fano.csv");
  {
    std::ofstream f(fano);
    const int blocks[7][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
    for (int p = 0; p < 7; ++p) {
      for (int b = 0; b < 7; ++b) {
        const bool in = blocks[b][0] == p || blocks[b][1] == p || blocks[b][2] == p;
        f << (b ? "," : "") << (in ? 1 : 0);
      }
      f << "\n";
    }
  }
  const Result r = run({"classify", "--matrix", fano});
  std::remove(fano.c_str());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto jf = nlohmann::json::parse(r.out);
  EXPECT_EQ(jf["kind"], "two-design");
  EXPECT_EQ(jf["two_design"]["v"], 7);
  EXPECT_EQ(jf["two_design"]["lambda"], 1);
  EXPECT_EQ(run({"classify", "--matrix", fano, data("k4.emb")}).code, 1);
}

TEST(Cli, CoverOutputReparses) {
  const Result r = run({"cover", data("k4.emb"), data("k4_swap.vlt"), "--check", "quotient,pgd,cycles"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Embedding cube = trace_faces(parse_embedding(r.out));
  EXPECT_EQ(cube.vertex_count(), 8);
  EXPECT_EQ(genus(cube), 1);
  EXPECT_NE(r.out.find("# quotient"), std::string::npos);
  EXPECT_NE(r.out.find("# pgd base=true hypothesis=true cover=partial-geometric holds=true"), std::string::npos);
  EXPECT_EQ(r.out.find("holds=false"), std::string::npos);

  const Result mixed = run({"cover", data("k4.emb"), data("k4_mixed.vlt"), "--check", "pgd"});
  ASSERT_EQ(mixed.code, 0) << mixed.err;
  EXPECT_NE(mixed.out.find("hypothesis=false"), std::string::npos);

  EXPECT_EQ(run({"cover", data("k4.emb"), data("k4_swap.vlt"), "--check", "bogus"}).code, 1);
  EXPECT_EQ(run({"cover", data("k4.emb"), data("missing.vlt")}).code, 2);
}

TEST(Cli, SearchCsv) {
  const Result r = run({"search", data("torus4.emb"), "--mark", "0", "--steps", "5", "--baseline", "arc-reversal"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "t,p_vertexface,p_arcreversal");
  EXPECT_EQ(ls[1], "0,0.062500000000,0.062500000000");
  EXPECT_EQ(ls[4].substr(0, 17), "3,0.472656250000,");

  const std::string path = temp_path("search.csv");
  ASSERT_EQ(run({"search", data("torus4.emb"), "--mark", "0", "--steps", "5", "--baseline", "arc-reversal", "--csv",
                 path}).code,
            0);
  EXPECT_EQ(slurp(path), r.out);
  std::remove(path.c_str());

  EXPECT_EQ(run({"search", data("k4.emb"), "--mark", "9", "--steps", "5"}).code, 1);
  EXPECT_EQ(run({"search", data("k4.emb"), "--mark", "0", "--steps", "0"}).code, 1);
  EXPECT_EQ(run({"search", data("k4.emb"), "--mark", "0", "--steps", "3", "--baseline", "grover"}).code, 1);
}

TEST(Cli, MixAndTraceCheck) {
  const Result m = run({"mix", "--builtin", "k4-planar", "--steps", "2", "--csv"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(m.out, "t,min_diagonal\n1,0.012345679012\n2,0.365950312452\n");

  const Result t = run({"trace-check", data("k4.emb")});
  ASSERT_EQ(t.code, 0) << t.err;
  const auto ls = lines(t.out);
  ASSERT_EQ(ls.size(), 11u);
  EXPECT_EQ(ls[0], "t,direct,formula,abs_diff");
  EXPECT_EQ(ls[2].substr(0, 32), "2,7.259259259259,7.259259259259,");
}

TEST(Cli, DumpIncidence) {
  const Result r = run({"info", data("k4.emb"), "--dump-incidence"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0->1,1,0,0,0"), std::string::npos);
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[1], "arc,f0,f1,f2,f3");
}

TEST(Cli, OutFlagWritesFile) {
  const std::string path = temp_path("info.txt");
  const Result r = run({"--out", path, "info", data("k4.emb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(path), run({"info", data("k4.emb")}).out);
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"info", data("no_such_file.emb")}).code, 2);
  EXPECT_EQ(run({data("no_such_file.emb")}).code, 2);
  EXPECT_EQ(run({"info", "--builtin", "torus-grid:2"}).code, 1);
  EXPECT_EQ(run({"info", "--builtin", "petersen"}).code, 1);
  EXPECT_EQ(run({"info", data("k4.emb"), "--builtin", "k4-planar"}).code, 1);
  EXPECT_EQ(run({"info", data("k4.emb"), "--frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"info", "--tol", "-1", data("k4.emb")}).code, 1);
  const Result bad = run({"info", data("k4_swap.vlt")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.err.rfind("vfwalk: parse:", 0), 0u) << bad.err;
}

TEST(Cli, Deterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"spectrum", data("torus4.emb")}, {"hamiltonian", "--builtin", "torus-grid:3"}, {"classify", data("k4.emb")}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
}
