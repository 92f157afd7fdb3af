#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spge/cli.hpp"

namespace cli = spge::cli;

int main(int argc, char** argv) {
  CLI::App app{"Smoothing proximal gradient with extrapolation for capped-l1 regression"};
  app.require_subcommand(1);

  std::string config_path;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Solve the problem described by a config file");
  solve->add_option("config", config_path, "Config file (key = value lines)")->required();
  solve->add_option("--out", solve_out, "Output directory");

  int example = 0;
  cli::ReproduceOptions rep;
  std::string rep_out;
  auto* reproduce = app.add_subcommand("reproduce", "Rerun one of the benchmark studies");
  reproduce->add_option("example", example, "1 = toy, 2 = l1 regression, 3 = censored")
      ->required()
      ->check(CLI::Range(1, 3));
  reproduce->add_option("--seeds", rep.seeds, "Seeds per problem size")->check(CLI::PositiveNumber);
  reproduce->add_option("--out", rep_out, "Output directory");
  reproduce->add_flag("--timing", rep.timing, "Record wall-clock times");
  reproduce->add_flag("--full-grid", rep.full_grid, "Sweep every lambda0 in 0.001:0.001:0.1");
  reproduce->add_option("--repeats", rep.repeats, "Timing repeats for the toy study")
      ->check(CLI::PositiveNumber);

  std::string suite;
  auto* check = app.add_subcommand("check", "Run a randomized verification suite");
  check->add_option("suite", suite, "prox, grad, monitor or rate")
      ->required()
      ->check(CLI::IsMember({"prox", "grad", "monitor", "rate"}));

  std::string kind;
  std::string gen_out;
  cli::GenOptions gen_opt;
  double lambda = 0, v = 0, lambda0 = 0, noise = 0, censor = 0;
  long long m = gen_opt.m, n = gen_opt.n, s = gen_opt.s;
  auto* gen = app.add_subcommand("gen", "Generate a problem instance file");
  gen->add_option("kind", kind, "toy, l1_regression or censored_regression")->required();
  auto* o_m = gen->add_option("--m", m, "Rows")->check(CLI::PositiveNumber);
  auto* o_n = gen->add_option("--n", n, "Columns")->check(CLI::PositiveNumber);
  auto* o_s = gen->add_option("--s", s, "Nonzeros of the ground truth")->check(CLI::PositiveNumber);
  auto* o_seed = gen->add_option("--seed", gen_opt.seed, "Generator seed");
  auto* o_lambda = gen->add_option("--lambda", lambda, "Penalty weight");
  auto* o_v = gen->add_option("--v", v, "Cap parameter (toy only)");
  auto* o_lambda0 = gen->add_option("--lambda0", lambda0, "Scaled penalty weight (censored)");
  auto* o_noise = gen->add_option("--noise-std", noise, "Additive Gaussian noise on b");
  auto* o_censor = gen->add_option("--censor-level", censor, "Censoring level c (censored)");
  gen->add_option("--out", gen_out, "Instance file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  try {
    if (*solve) {
      std::optional<std::filesystem::path> out;
      if (!solve_out.empty()) out = solve_out;
      return cli::cmd_solve(config_path, std::cout, std::cerr, out);
    }
    if (*reproduce) {
      if (!rep_out.empty()) rep.out_dir = rep_out;
      return cli::cmd_reproduce(example, rep, std::cout, std::cerr);
    }
    if (*check) return cli::cmd_check(suite, std::cout, std::cerr);
    if (*gen) {
      gen_opt.m = m;
      gen_opt.n = n;
      gen_opt.s = s;
      gen_opt.size_given = *o_m || *o_n || *o_s || *o_seed;
      if (*o_lambda) gen_opt.lambda = lambda;
      if (*o_v) gen_opt.v = v;
      if (*o_lambda0) gen_opt.lambda0 = lambda0;
      if (*o_noise) gen_opt.noise_std = noise;
      if (*o_censor) gen_opt.censor_level = censor;
      return cli::cmd_gen(kind, gen_opt, gen_out, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitOk;
}
