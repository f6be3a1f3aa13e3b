#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_overrides(CLI::App* cmd, weakmeas::cli::Overrides& o) {
  cmd->add_option("--trials", o.trials, "Override the number of trials");
  cmd->add_option("--seed", o.seed, "Override the 64-bit seed");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores); output is unaffected");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace weakmeas::cli;

  CLI::App app{"Weak-measurement simulator: unsharp pointer couplings, post-selection and weak values"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Monte Carlo run; writes the per-trial CSV and prints a summary");
  run->add_option("config", run_opts.config, "Experiment config file")->required();
  run->add_option("-o,--output", run_opts.output, "CSV output path");
  add_overrides(run, run_opts.overrides);

  std::filesystem::path exact_config;
  auto* exact = app.add_subcommand("exact", "Print the exact joint outcome distribution as CSV");
  exact->add_option("config", exact_config, "Experiment config file")->required();

  WeakValueOptions wv_opts;
  auto* wv = app.add_subcommand("weakvalue", "Exact weak value, optionally estimated by simulation");
  wv->add_option("--pre", wv_opts.pre, "Pre-selected state (x+, z-, or a direction)")->required();
  wv->add_option("--post", wv_opts.post, "Post-selected state")->required();
  wv->add_option("--direction", wv_opts.direction, "Observable sigma.n direction")->capture_default_str();
  wv->add_option("--epsilon", wv_opts.epsilon, "Coupling strength (a-b)/(a+b) for the simulation");
  wv->add_option("--trials", wv_opts.trials, "Trials per readout for the simulation");
  wv->add_option("--seed", wv_opts.seed, "64-bit seed")->capture_default_str();
  wv->add_option("--threads", wv_opts.threads, "Worker threads (0 = all cores)")->capture_default_str();

  CompareOptions cmp_opts;
  auto* cmp = app.add_subcommand("compare", "Monte Carlo against the exact distribution");
  cmp->add_option("config", cmp_opts.config, "Experiment config file")->required();
  add_overrides(cmp, cmp_opts.overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (*run) return cmd_run(run_opts, std::cout, std::cerr);
  if (*exact) return cmd_exact(exact_config, std::cout, std::cerr);
  if (*wv) return cmd_weakvalue(wv_opts, std::cout, std::cerr);
  return cmd_compare(cmp_opts, std::cout, std::cerr);
}
