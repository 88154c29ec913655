#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "config.h"
#include "manifest.h"
#include "roughwave/observability.h"
#include "roughwave/sequences.h"
#include "svg.h"

namespace roughwave {
namespace cli {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string DropFirstLine(const std::string& s) { return s.substr(s.find('\n') + 1); }

fs::path Scratch(const std::string& name) {
  const auto p = fs::path(::testing::TempDir()) / ("roughwave_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(ConfigText, Grammar) {
  const auto c = ParseConfigText(
      "# comment\n"
      "; also a comment\n"
      "[numerics]\n"
      "resolution = 512\n"
      "cfl = 0.5   \n"
      "[observability]\n"
      "cutoffs = 8, 16,32\n"
      "adversarial = false\n"
      "[coefficient]\n"
      "family = weierstrass\n");
  EXPECT_EQ(c["numerics"]["resolution"], 512.0);
  EXPECT_EQ(c["numerics"]["cfl"], 0.5);
  EXPECT_EQ(c["observability"]["cutoffs"], nlohmann::json({8.0, 16.0, 32.0}));
  EXPECT_EQ(c["observability"]["adversarial"], false);
  EXPECT_EQ(c["coefficient"]["family"], "weierstrass");
}

TEST(ConfigText, SyntaxErrors) {
  EXPECT_THROW(ParseConfigText("resolution = 3\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("[numerics\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("[numerics]\nresolution\n"), ConfigError);
  EXPECT_THROW(ParseConfigText("[]\n"), ConfigError);
}

TEST(ConfigResolve, DefaultsAndValidation) {
  const auto c = Resolve(ParseConfigText("[numerics]\nresolution = 256\n"), "simulate");
  EXPECT_EQ(c["numerics"]["resolution"], 256);
  EXPECT_TRUE(c["numerics"]["resolution"].is_number_integer());
  EXPECT_EQ(c["numerics"]["cfl"], Defaults()["numerics"]["cfl"]);
  EXPECT_EQ(c["experiment"]["kind"], "simulate");

  EXPECT_THROW(Resolve(ParseConfigText("[nosuch]\na = 1\n"), "simulate"), ConfigError);
  EXPECT_THROW(Resolve(ParseConfigText("[numerics]\nbogus = 1\n"), "simulate"), ConfigError);
  EXPECT_THROW(Resolve(ParseConfigText("[numerics]\nresolution = big\n"), "simulate"), ConfigError);
  EXPECT_THROW(Resolve(ParseConfigText("[numerics]\nresolution = 2.5\n"), "simulate"), ConfigError);
  EXPECT_THROW(Resolve(ParseConfigText("[experiment]\nkind = modulus\n"), "simulate"), ConfigError);
}

TEST(ConfigHashing, TextAndJsonAgree) {
  const auto text = Resolve(ParseConfigText("[numerics]\nresolution = 256\nT = 3\n"
                                            "[observability]\nbetas = 0.1\n"),
                            "observability");
  const auto json = Resolve(nlohmann::json::parse(R"({"numerics": {"resolution": 256, "T": 3.0},
                                                      "observability": {"betas": [0.1]}})"),
                            "observability");
  EXPECT_EQ(ConfigHash(text), ConfigHash(json));
  // The emitted copy parses back to the same config.
  EXPECT_EQ(ConfigHash(Resolve(ParseConfigText(ToText(text)), "observability")), ConfigHash(text));

  auto threaded = text;
  threaded["experiment"]["jobs"] = 8;
  EXPECT_EQ(ConfigHash(threaded), ConfigHash(text));
  auto reseeded = text;
  reseeded["experiment"]["seed"] = 2;
  EXPECT_NE(ConfigHash(reseeded), ConfigHash(text));
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Writer, ProvenanceManifestAndConfinement) {
  const auto dir = Scratch("writer");
  OutputWriter out(dir / "run", {"9.9", "cafe", 7, "simulate"});
  out.Json("a.json", {{"x", 1}});
  out.Csv("sub/b.csv", "h\n1\n");
  out.Svg("c.svg", "<?xml version=\"1.0\"?>\n<svg/>\n");
  EXPECT_THROW(out.Text("../escape.txt", "x"), std::invalid_argument);
  EXPECT_THROW(out.Text((dir / "abs.txt").string(), "x"), std::invalid_argument);
  const auto m = out.Finish();
  ASSERT_EQ(m["files"].size(), 3u);
  EXPECT_FALSE(fs::exists(dir / "escape.txt"));

  EXPECT_EQ(nlohmann::json::parse(Slurp(dir / "run/a.json"))["provenance"]["config_hash"], "cafe");
  EXPECT_EQ(Slurp(dir / "run/sub/b.csv"), "# roughwave 9.9 config cafe seed 7\nh\n1\n");
  EXPECT_NE(Slurp(dir / "run/c.svg").find("<!-- roughwave 9.9 config cafe seed 7 -->"), std::string::npos);
  for (const auto& f : m["files"]) {
    EXPECT_EQ(f["sha256"], Sha256Hex(Slurp(dir / "run" / f["path"].get<std::string>())));
  }

  auto agg = AggregateManifests(dir);
  ASSERT_EQ(agg["count"], 1);
  EXPECT_TRUE(agg["manifests"][0]["intact"].get<bool>());
  std::ofstream(dir / "run/a.json") << "tampered";
  agg = AggregateManifests(dir);
  EXPECT_FALSE(agg["manifests"][0]["intact"].get<bool>());
}

TEST(Svg, StandaloneDocument) {
  Plot p{"t<itle", "x", "y", false, true, {{"s", {1, 2, 3}, {1, 10, 100}}, {"p", {1, 2}, {0, 5}, true}}};
  const auto svg = RenderSvg(p);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("t&lt;itle"), std::string::npos);
  // The y = 0 marker is dropped on the log axis, the other one kept.
  size_t circles = 0;
  for (size_t at = svg.find("<circle"); at != std::string::npos; at = svg.find("<circle", at + 1)) ++circles;
  EXPECT_EQ(circles, 1u);
}

int RunCli(const std::string& args) {
  const int status = std::system((std::string(ROUGHWAVE_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path WriteConfig(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

TEST(Cli, SimulateSmoke) {
  const auto dir = Scratch("cli_sim");
  ASSERT_EQ(RunCli("simulate --resolution 256 --out " + (dir / "out").string()), 0);
  const auto m = nlohmann::json::parse(Slurp(dir / "out/manifest.json"));
  std::set<std::string> files;
  for (const auto& f : m["files"]) files.insert(f["path"]);
  for (const char* f : {"summary.json", "traces.csv", "energy.csv", "config.ini", "config.json"}) {
    EXPECT_TRUE(files.count(f)) << f;
  }
  EXPECT_EQ(m["status"], "ok");
}

// Two runs are bit-identical, and the table equals the library's own CSV.
TEST(Cli, CounterexampleTableIsDeterministic) {
  const auto dir = Scratch("cli_ce");
  const auto cfg = WriteConfig(dir, "ce.ini", "[sequence]\nj_hi = 3\n[counterexample]\nm_list = 0, 1, 2\n");
  ASSERT_EQ(RunCli("counterexample --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(RunCli("counterexample --config " + cfg.string() + " --jobs 2 --out " + (dir / "b").string()), 0);
  for (const char* f : {"divergence.csv", "divergence.json", "sequences.json"}) {
    EXPECT_EQ(Slurp(dir / "a" / f), Slurp(dir / "b" / f)) << f;
  }

  auto params = coeff::MakeSequences(coeff::PsiIdentity(), 1, 2, 3, coeff::SequenceMode::kScaled,
                                     coeff::ReferenceM());
  const auto pairs = coeff::BuildPairs(params);
  const auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  observability::SweepOptions so;
  const auto table = observability::RunCounterexampleSweep(params, pairs, omega, so);
  EXPECT_EQ(DropFirstLine(Slurp(dir / "a/divergence.csv")), observability::DivergenceCsv(table));
}

TEST(Cli, ExitCodes) {
  const auto dir = Scratch("cli_exit");
  const auto bad = WriteConfig(dir, "bad.ini", "[numerics]\nbogus = 1\n");
  EXPECT_EQ(RunCli("simulate --config " + bad.string() + " --out " + (dir / "bad").string()), 2);
  EXPECT_EQ(RunCli("simulate --resolution 1000 --out " + (dir / "res").string()), 2);
  const auto n2 = WriteConfig(dir, "n2.ini", "[sequence]\nN = 2\nj_hi = 3\n");
  EXPECT_EQ(RunCli("counterexample --strict-paper --config " + n2.string() + " --out " + (dir / "n2").string()), 2);
  const auto strict = WriteConfig(dir, "strict.ini", "[sequence]\nmode = paper-strict\nN = 8\n");
  EXPECT_EQ(RunCli("counterexample --config " + strict.string() + " --out " + (dir / "strict").string()), 3);
  EXPECT_EQ(RunCli("nosuchcommand"), 2);
}

TEST(Cli, ReportAggregates) {
  const auto dir = Scratch("cli_report");
  ASSERT_EQ(RunCli("simulate --resolution 64 --out " + (dir / "runs/one").string()), 0);
  ASSERT_EQ(RunCli("modulus --out " + (dir / "runs/two").string()), 0);
  const auto cfg = WriteConfig(dir, "r.ini", "[report]\ninput = " + (dir / "runs").string() + "\n");
  ASSERT_EQ(RunCli("report --config " + cfg.string() + " --out " + (dir / "agg").string()), 0);
  const auto r = nlohmann::json::parse(Slurp(dir / "agg/report.json"));
  EXPECT_EQ(r["count"], 2);
  for (const auto& m : r["manifests"]) EXPECT_TRUE(m["intact"].get<bool>());
}

}  // namespace
}  // namespace cli
}  // namespace roughwave
