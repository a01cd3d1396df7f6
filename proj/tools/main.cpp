#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment.hpp"

namespace {

using mixq::cli::Command;
using mixq::cli::ExperimentConfig;
using mixq::cli::ResultRow;

struct SubArgs {
  ExperimentConfig config;
  std::string out;
};

void add_common_options(CLI::App* cmd, SubArgs& args) {
  cmd->set_config("--config", "", "flat key=value experiment file; flags win");
  cmd->add_option("--mix", args.config.mix, "batch | sampling");
  cmd->add_option("--n", args.config.n, "number of senders");
  cmd->add_option("--k", args.config.k, "batch size");
  cmd->add_option("--lambda", args.config.lambda, "per-sender Poisson rate");
  cmd->add_option("--p-a,--p_a", args.config.p_a, "sampling-mix selection probability");
  cmd->add_option("--m", args.config.m, "receivers per sender");
  cmd->add_option("--horizon", args.config.horizon, "run length in messages");
  cmd->add_option("--seed", args.config.seed, "master seed; rep r uses seed+r");
  cmd->add_option("--reps", args.config.reps, "replications per sweep point");
  cmd->add_option("--warmup", args.config.warmup, "warm-up fraction in [0,1)");
  cmd->add_option("--sweep", args.config.sweep, "none | k | lambda | p_a");
  cmd->add_option("--sweep-values,--sweep_values", args.config.sweep_values,
                  "sweep axis values")->delimiter(',');
  cmd->add_option("--attack", args.config.attack,
                  "none | intersection | stateful | stateless");
  cmd->add_option("--jobs", args.config.jobs, "parallel workers");
  cmd->add_option("--out", args.out, "output CSV path (MIXQ_OUT_DIR prefixes relative paths)");
}

int emit(const std::vector<ResultRow>& rows, const std::string& out,
         const std::string& default_name) {
  std::string path = out.empty() ? default_name : out;
  path = mixq::cli::resolve_out_path(path, std::getenv("MIXQ_OUT_DIR"));
  std::ofstream file(path);
  if (!file) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return 1;
  }
  mixq::cli::write_rows(rows, file);
  std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(n,k) anonymity mix simulator, analytic toolkit, and attack harness"};
  app.require_subcommand(1);

  SubArgs analytic_args, simulate_args, attack_args, compare_args;
  CLI::App* analytic = app.add_subcommand("analytic", "closed forms and fixed points only");
  CLI::App* simulate = app.add_subcommand("simulate", "discrete-event simulation runs");
  CLI::App* attack = app.add_subcommand("attack", "run an attack per replication");
  CLI::App* compare = app.add_subcommand("compare", "simulation joined with analytic predictions");
  add_common_options(analytic, analytic_args);
  add_common_options(simulate, simulate_args);
  add_common_options(attack, attack_args);
  add_common_options(compare, compare_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analytic->parsed())
      return emit(mixq::cli::run_analytic(analytic_args.config), analytic_args.out,
                  "analytic.csv");
    if (simulate->parsed())
      return emit(mixq::cli::run_simulate(simulate_args.config), simulate_args.out,
                  "simulate.csv");
    if (attack->parsed())
      return emit(mixq::cli::run_attack(attack_args.config), attack_args.out,
                  "attack.csv");
    if (compare->parsed())
      return emit(mixq::cli::run_compare(compare_args.config), compare_args.out,
                  "compare.csv");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
