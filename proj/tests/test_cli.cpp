#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_fgstat;

int run_tool(const std::string& args) {
  const int rc = std::system((g_fgstat + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "fgstat_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_config(const std::string& name, const json& j) {
  fs::path path = scratch() / name;
  std::ofstream(path) << j.dump(2);
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json tree_weight() {
  return {{"kind", "tree"}, {"lengths", {1.0, 1.4142135623730951}}};
}

}  // namespace

TEST_CASE("count subcommand reports formula and enumeration") {
  json cfg = {{"p", 2}, {"weight", tree_weight()}, {"class", "a1.a2"}, {"m_grid", {0, 1, 2}}};
  fs::path out = scratch() / "count_out";
  CHECK(run_tool("count " + write_config("count.json", cfg).string() + " --output-dir " +
                 out.string()) == 0);
  const std::string csv = slurp(out / "count.csv");
  CHECK(csv == "m,n,size_formula,size_enumerated\n0,2,2,2\n1,4,4,4\n2,6,12,12\n");
  json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["files"].size() == 2);
  CHECK(manifest["config"]["class"] == "a1.a2");
}

TEST_CASE("derivatives of the constant weight") {
  json cfg = {{"p", 2},
              {"weight", {{"kind", "table"}, {"depth", 1},
                          {"entries", json::array({{{"block", "a1"}, {"value", 1.0}},
                                                   {{"block", "A1"}, {"value", 1.0}},
                                                   {{"block", "a2"}, {"value", 1.0}},
                                                   {{"block", "A2"}, {"value", 1.0}}})}}}};
  fs::path out = scratch() / "deriv_out";
  CHECK(run_tool("derivatives " + write_config("deriv.json", cfg).string() + " --output-dir " +
                 out.string()) == 0);
  json s = json::parse(slurp(out / "summary.json"));
  CHECK(std::abs(s["lambda"].get<double>() - 1.0) < 1e-12);
  CHECK(std::abs(s["sigma2"].get<double>()) < 1e-10);
  CHECK(s["within_tolerance"] == true);
}

TEST_CASE("reruns are byte-identical") {
  json cfg = {{"p", 2},
              {"weight", tree_weight()},
              {"class", "a1.a2"},
              {"m_grid", {3}},
              {"mode", "sampled"},
              {"sample_count", 2000},
              {"seed", 99}};
  fs::path cfgp = write_config("rerun.json", cfg);
  fs::path o1 = scratch() / "rerun1", o2 = scratch() / "rerun2";
  CHECK(run_tool("sample " + cfgp.string() + " --output-dir " + o1.string()) == 0);
  CHECK(run_tool("sample " + cfgp.string() + " --output-dir " + o2.string()) == 0);
  for (const char* name : {"sample_m3.csv", "summary.json"})
    CHECK(slurp(o1 / name) == slurp(o2 / name));
  // manifests differ only in stage timings; the digest lists must agree
  json m1 = json::parse(slurp(o1 / "manifest.json"));
  json m2 = json::parse(slurp(o2 / "manifest.json"));
  CHECK(m1["files"] == m2["files"]);
}

TEST_CASE("error exit codes") {
  SUBCASE("missing config file") {
    CHECK(run_tool("count " + (scratch() / "nope.json").string()) == 2);
  }
  SUBCASE("malformed config") {
    json cfg = {{"weight", tree_weight()}};  // no "p"
    CHECK(run_tool("count " + write_config("bad.json", cfg).string()) == 2);
  }
  SUBCASE("non-ascending m_grid") {
    json cfg = {{"p", 2}, {"weight", tree_weight()}, {"class", "a1"}, {"m_grid", {3, 1}}};
    CHECK(run_tool("count " + write_config("bad_grid.json", cfg).string()) == 2);
  }
  SUBCASE("degenerate weight") {
    json cfg = {{"p", 2},
                {"weight", {{"kind", "tree"}, {"lengths", {1.0, 1.0}}}},
                {"class", "a1.a2"},
                {"m_grid", {2}}};
    fs::path out = scratch() / "degen_out";
    CHECK(run_tool("clt " + write_config("degen.json", cfg).string() + " --output-dir " +
                   out.string()) == 3);
  }
  SUBCASE("enumeration cap") {
    json cfg = {{"p", 2},
                {"weight", tree_weight()},
                {"class", "a1.a2"},
                {"m_grid", {12}},
                {"enumeration_cap", 100}};
    fs::path out = scratch() / "cap_out";
    CHECK(run_tool("sample " + write_config("cap.json", cfg).string() + " --output-dir " +
                   out.string()) == 4);
  }
  SUBCASE("unknown subcommand fails") {
    CHECK(run_tool("frobnicate x.json") != 0);
  }
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-fgstat>\n");
    return 1;
  }
  g_fgstat = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  return ctx.run();
}
