#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "hpconc/cli.hpp"

using namespace hpconc;
using cli::parse_eps_grid;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

/// Runs the built CLI through the shell and captures stdout.
Result run_cli(const std::string& args) {
  const std::string cmd = std::string(HPCONC_CLI_PATH) + " " + args + " 2>/dev/null";
  Result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
  const int raw = pclose(pipe);
  res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return res;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hpconc_cli_test_" + name);
}

}  // namespace

TEST(ParseEpsGrid, Examples) {
  EXPECT_EQ(parse_eps_grid("0:1:0.25"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(parse_eps_grid("0.5:0.5:0.1"), (std::vector<double>{0.5}));
  EXPECT_THROW(parse_eps_grid("1:0:0.1"), error);
}

TEST(ParseEpsGrid, RoundingAndEndpoints) {
  const auto g = parse_eps_grid("0:1:0.02");
  ASSERT_EQ(g.size(), 51u);
  EXPECT_EQ(g[3], 0.06);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(parse_eps_grid("0.05:1.0:0.05").size(), 20u);
  EXPECT_EQ(parse_eps_grid("0:1:0.4"), (std::vector<double>{0, 0.4, 0.8}));
  // Stop within half a step of the last point is kept.
  EXPECT_EQ(parse_eps_grid("0:0.99:0.25").back(), 1.0);
}

TEST(ParseEpsGrid, Malformed) {
  for (const char* bad : {"", "0:1", "0:1:0", "0:1:-0.1", "a:1:0.1", "0:1:0.1:2", "0:inf:0.1", "0:1:1e-9"}) {
    EXPECT_THROW(parse_eps_grid(bad), error) << bad;
  }
}

TEST(Cli, ValidateCounterexampleWritesCsvAndExitsZero) {
  const auto res = run_cli("validate --example counterexample1 --n 8 --eps-grid 0.05:1.0:0.05");
  EXPECT_EQ(res.status, 0);
  const auto rows = lines(res.out);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0], "epsilon,exact_tail,p,exp_term,bound_total,dominated");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(rows[i].rfind(',') + 1), "true");
}

TEST(Cli, ValidateToyWithQuotedBoundColumn) {
  const auto res = run_cli("validate --example toy --n 6 --B 1e9 --centered --paper-toy-bound --eps-grid 0:1:0.5");
  EXPECT_EQ(res.status, 0);
  const auto rows = lines(res.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[0].find("quoted_toy_bound"), std::string::npos);
  EXPECT_EQ(run_cli("validate --example counterexample1 --n 3 --paper-toy-bound").status, 1);
}

TEST(Cli, ValidateExitsTwoOnViolation) {
  const auto path = temp_file("violating.json");
  std::ofstream(path) << R"({"n": 2, "alphabet_sizes": [2, 2], "probs": [[0.5, 0.5], [0.5, 0.5]], "c": [0, 0],
    "f": {"type": "builtin", "name": "coordinate", "params": {"index": 0}}, "Y": {"type": "builtin", "name": "all"}})";
  const auto res = run_cli("validate --instance " + path.string() + " --eps 0.25");
  EXPECT_EQ(res.status, 2);
  EXPECT_NE(res.out.find("false"), std::string::npos);
  // With --verify the uncertified instance is rejected up front.
  EXPECT_EQ(run_cli("validate --verify --instance " + path.string() + " --eps 0.25").status, 1);
  const auto cert = io::json::parse(run_cli("certify --instance " + path.string()).out);
  EXPECT_FALSE(cert["ok"].get<bool>());
  EXPECT_EQ(cert["witness"]["delta_f"], 1.0);
  std::filesystem::remove(path);
}

TEST(Cli, BoundAtZeroEpsilon) {
  const auto res = run_cli("bound --eps 0 --p 0.1 --c 1,1");
  EXPECT_EQ(res.status, 0);
  const auto j = io::json::parse(res.out);
  EXPECT_EQ(j["total"], 1.0);
  EXPECT_EQ(j["formula"], "hp_one_sided");
}

TEST(Cli, BoundGridAndFormulas) {
  const auto grid = io::json::parse(run_cli("bound --eps-grid 0:1:0.5 --p 0 --c 1,1,1,1").out);
  ASSERT_EQ(grid.size(), 3u);
  const auto mc = io::json::parse(run_cli("bound --mcdiarmid --eps-grid 0:1:0.5 --c 1,1,1,1").out);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(grid[i]["total"], mc[i]["total"]);
  const auto two = io::json::parse(run_cli("bound --two-sided --eps 2 --p 0 --c 1,1,1,1").out);
  EXPECT_DOUBLE_EQ(two["total"].get<double>(), 2.0 * std::exp(-2.0));
  EXPECT_EQ(run_cli("bound --eps 0.5 --c 1,1").status, 1);
  EXPECT_EQ(run_cli("bound --eps -1 --p 0 --c 1").status, 1);
}

TEST(Cli, StatsAndExtend) {
  const auto stats = io::json::parse(run_cli("stats --example counterexample1 --n 3 --with-extension").out);
  EXPECT_EQ(stats["p"], 0.125);
  EXPECT_EQ(stats["mu"], 1.0);
  EXPECT_EQ(stats["m"], 0.0);
  EXPECT_EQ(stats["M"], 0.0);
  const auto ext = io::json::parse(run_cli("extend --example toy --n 3 --B 4").out);
  EXPECT_EQ(ext["type"], "table");
  EXPECT_EQ(ext["values"].size(), 8u);
  const auto csv = run_cli("extend --example toy --n 3 --B 4 --format csv");
  EXPECT_EQ(lines(csv.out).size(), 9u);
}

TEST(Cli, ExampleRoundTripsThroughInstanceFile) {
  const auto path = temp_file("toy.json");
  const auto built = run_cli("example --example toy --n 4 --B 7 --output " + path.string());
  EXPECT_EQ(built.status, 0);
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(io::canonical(io::to_json(io::instance_from_json(io::json::parse(text)))), text);
  const auto stats = io::json::parse(run_cli("stats --instance " + path.string()).out);
  EXPECT_EQ(stats["p"], 0.125);
  EXPECT_DOUBLE_EQ(stats["m"].get<double>(), -1.0);
  std::filesystem::remove(path);
}

TEST(Cli, ExampleChain) {
  const auto res = run_cli("example --example counterexample1 --n 4 --chain certify,stats,validate");
  EXPECT_EQ(res.status, 0);
  const auto j = io::json::parse(res.out);
  EXPECT_TRUE(j["certify"]["ok"].get<bool>());
  EXPECT_EQ(j["stats"]["p"], 0.0625);
  EXPECT_TRUE(j["validate"]["all_dominated"].get<bool>());
}

TEST(Cli, MonteCarloToyTwentyDimensions) {
  const auto res = run_cli("mc --example toy --n 20 --B 1e9 --seed 42 --samples 1000000 --eps 0.5");
  ASSERT_EQ(res.status, 0);
  const auto j = io::json::parse(res.out);
  const double exact_p = 2.0 * std::ldexp(1.0, -20);
  const double p_hat = j["p_hat"].get<double>();
  ASSERT_FALSE(j["p_se"].is_null());
  EXPECT_LE(std::abs(p_hat - exact_p), 4.0 * j["p_se"].get<double>() + 1e-300) << "p_hat " << p_hat;
  const auto again = run_cli("mc --example toy --n 20 --B 1e9 --seed 42 --samples 1000000 --eps 0.5");
  EXPECT_EQ(again.out, res.out);
}

TEST(Cli, ErrorsExitOne) {
  EXPECT_EQ(run_cli("stats").status, 1);
  EXPECT_EQ(run_cli("stats --example nothing").status, 1);
  EXPECT_EQ(run_cli("stats --instance /nonexistent/file.json").status, 1);
  EXPECT_EQ(run_cli("validate --example toy --n 4 --eps-grid 1:0:0.1").status, 1);
  EXPECT_EQ(run_cli("stats --example counterexample1 --n 12 --cap 100").status, 1);
  EXPECT_EQ(run_cli("frobnicate").status, 1);
  EXPECT_EQ(run_cli("").status, 1);
}

TEST(Cli, CapFromEnvironment) {
  EXPECT_EQ(run_cli("stats --example counterexample1 --n 12").status, 0);
  const std::string env = "HPCONC_CAP=100 ";
  const std::string cmd = env + HPCONC_CLI_PATH + " stats --example counterexample1 --n 12 >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(raw), 1);
}

TEST(RunConfig, ExecuteInProcess) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::validate;
  cfg.example = "toy";
  cfg.n = 5;
  cfg.b = 1.0;
  cfg.eps_grid = "0:1:0.1";
  cfg.format = cli::Format::json;
  const auto res = cli::execute(cfg);
  EXPECT_EQ(res.status, cli::kExitOk);
  EXPECT_TRUE(io::json::parse(res.text)["all_dominated"].get<bool>());

  cfg.instance_path = "x.json";
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitError);
  EXPECT_NE(err.str().find("not both"), std::string::npos);
}
