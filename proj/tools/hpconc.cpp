// Command-line front end for the hpconc toolkit.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpconc/cli.hpp"

namespace {

using hpconc::cli::Command;
using hpconc::cli::Format;
using hpconc::cli::RunConfig;

struct Flags {
  std::string instance, example, eps_grid, c, output, format, center_text;
  double eps = 0.0, p = 0.0;
  std::uint64_t cap = 0;
};

void add_instance_options(CLI::App* sub, RunConfig& cfg, Flags& fl) {
  sub->add_option("--instance", fl.instance, "Instance JSON file");
  sub->add_option("--example", fl.example, "Builtin instance: counterexample1 | toy | random");
  sub->add_option("--n", cfg.n, "Dimension for builtin examples");
  sub->add_option("--B", cfg.b, "Out-of-Y magnitude for the toy example");
  sub->add_flag("--centered", cfg.centered, "Shift the toy example by +1 so that m = 0");
  sub->add_option("--seed", cfg.seed, "Seed for random instances and Monte Carlo");
  sub->add_option("--cap", fl.cap, "Enumeration cap in points (overrides HPCONC_CAP)");
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  sub->add_option("--output,-o", fl.output, "Write the report to this file");
  sub->add_option("--format", fl.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_grid_options(CLI::App* sub, Flags& fl) {
  sub->add_option("--eps", fl.eps, "Single deviation epsilon");
  sub->add_option("--eps-grid", fl.eps_grid, "Epsilon grid start:stop:step");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration bounds for functions with bounded differences on a high-probability set"};
  app.require_subcommand(1);

  RunConfig cfg;
  Flags fl;

  auto* certify = app.add_subcommand("certify", "Check bounded differences of f on Y");
  auto* extend = app.add_subcommand("extend", "Dump the Lipschitz extension of f from Y");
  auto* stats = app.add_subcommand("stats", "Exact p, mu, m (and M) by enumeration");
  auto* bound = app.add_subcommand("bound", "Evaluate the tail bounds");
  auto* validate = app.add_subcommand("validate", "Compare exact tails against the bound");
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimates of p, m and tails");
  auto* example = app.add_subcommand("example", "Build a builtin instance and optionally run commands on it");

  for (auto* sub : {certify, extend, stats, bound, validate, mc, example}) add_instance_options(sub, cfg, fl);
  for (auto* sub : {bound, validate, mc}) add_grid_options(sub, fl);

  extend->add_flag("--verify", cfg.verify, "Certify bounded differences on Y first");
  validate->add_flag("--verify", cfg.verify, "Certify bounded differences on Y first");
  stats->add_flag("--with-extension", cfg.with_extension, "Also compute M = E fbar(X)");
  example->add_flag("--with-extension", cfg.with_extension, "Also compute M in chained stats");

  bound->add_option("--p", fl.p, "Probability of the complement of Y");
  bound->add_option("--c", fl.c, "Comma-separated weights c_1,...,c_n");
  bound->add_flag("--mcdiarmid", cfg.mcdiarmid, "Plain McDiarmid bound (p = 0, centered at the mean)");
  for (auto* sub : {bound, validate, mc}) sub->add_flag("--two-sided", cfg.two_sided, "Bound P[|f - m| >= eps]");

  validate->add_option("--center", fl.center_text, "Tail center (default m)");
  mc->add_option("--center", fl.center_text, "Tail center (default exact m)");
  validate->add_flag("--paper-toy-bound", cfg.paper_toy_bound,
                     "Toy example only: add the quoted closed-form bound as an extra column");

  mc->add_option("--samples", cfg.samples, "Number of samples")->check(CLI::PositiveNumber);
  example->add_option("--chain", cfg.chain, "Commands to run on the instance (certify, stats, validate, ...)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hpconc::cli::kExitError;
  }

  const std::pair<CLI::App*, Command> table[] = {
      {certify, Command::certify}, {extend, Command::extend},     {stats, Command::stats}, {bound, Command::bound},
      {validate, Command::validate}, {mc, Command::mc},          {example, Command::example},
  };
  CLI::App* chosen = nullptr;
  for (const auto& [sub, cmd] : table) {
    if (sub->parsed()) {
      cfg.command = cmd;
      chosen = sub;
    }
  }

  auto given = [&](const char* name) { return chosen->get_option_no_throw(name) && chosen->count(name) > 0; };
  if (given("--instance")) cfg.instance_path = fl.instance;
  if (given("--example")) cfg.example = fl.example;
  if (given("--eps")) cfg.eps = fl.eps;
  if (given("--eps-grid")) cfg.eps_grid = fl.eps_grid;
  if (given("--p")) cfg.p = fl.p;
  if (given("--c")) cfg.c = fl.c;
  if (given("--output")) cfg.output = fl.output;
  if (given("--cap")) cfg.cap = fl.cap;
  if (given("--format")) cfg.format = fl.format == "csv" ? Format::csv : Format::json;
  if (given("--center")) {
    const auto v = hpconc::cli::parse_real(fl.center_text);
    if (!v) {
      std::cerr << "error: --center expects a number\n";
      return hpconc::cli::kExitError;
    }
    cfg.center = *v;
  }

  return hpconc::cli::run(cfg, std::cout, std::cerr);
}
