#include "conedeflate/cli.hpp"

#include "CLI11.hpp"

#include <map>
#include <string>

namespace {

using conedeflate::RunConfig;

void add_tolerance_flags(CLI::App* cmd, RunConfig& config, double& rank_tol) {
  cmd->add_option("--psd-tol", config.tolerances.psd_tol,
                  "relative PSD certification slack");
  cmd->add_option("--hermit-tol", config.tolerances.hermit_tol,
                  "relative Hermitian symmetry slack");
  cmd->add_option("--rank-tol", rank_tol,
                  "relative null-space cutoff (default dim * epsilon)");
}

void add_stop_flags(CLI::App* cmd, RunConfig& config, double& trace_tol,
                    double& opnorm_tol) {
  cmd->add_option("--max-steps", config.max_steps, "maximum update steps");
  cmd->add_option("--trace-tol", trace_tol,
                  "absolute residual-trace stopping threshold");
  cmd->add_option("--opnorm-tol", opnorm_tol,
                  "absolute operator-norm stopping threshold");
  cmd->add_option("--stagnation-window", config.stagnation_window,
                  "consecutive low-energy steps before stopping");
  cmd->add_option("--stagnation-energy", config.stagnation_energy_tol,
                  "energy threshold for the stagnation rule");
}

void add_strategy_flags(CLI::App* cmd, RunConfig& config) {
  const std::map<std::string, conedeflate::StrategyKind> names{
      {"greedy", conedeflate::StrategyKind::Greedy},
      {"weak-greedy", conedeflate::StrategyKind::WeakGreedy},
      {"cyclic", conedeflate::StrategyKind::CyclicBasis},
      {"random", conedeflate::StrategyKind::RandomSphere},
      {"explicit", conedeflate::StrategyKind::ExplicitList},
  };
  cmd->add_option("--strategy", config.strategy, "direction-selection policy")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
  cmd->add_option("--c", config.weak_greedy_c, "weak-greedy constant in (0,1]");
  cmd->add_option("--seed", config.seed, "random-direction seed");
  cmd->add_option("--strategy-file", config.strategy_file,
                  "StrategyConfig JSON (pools and explicit direction lists)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "conedeflate: residual-weighted rank-one decomposition of PSD matrices"};
  app.require_subcommand(1);

  RunConfig config;
  double trace_tol = -1.0;
  double opnorm_tol = -1.0;
  double rank_tol = -1.0;

  auto* decompose = app.add_subcommand(
      "decompose", "run the residual iteration on a matrix");
  decompose->add_option("--input", config.input_path, "matrix JSON")
      ->required();
  decompose->add_option("--output", config.output_path, "chain report JSON")
      ->required();
  decompose->add_flag("--emit-vectors", config.emit_vectors,
                      "include residual vectors E_n in the report");
  decompose->add_flag("--emit-chain", config.emit_chain,
                      "also write the full (R, E) chain JSON");
  add_strategy_flags(decompose, config);
  add_stop_flags(decompose, config, trace_tol, opnorm_tol);
  add_tolerance_flags(decompose, config, rank_tol);

  auto* parsevalize = app.add_subcommand(
      "parsevalize", "build a Parseval frame from the identity");
  long long dim = 0;
  parsevalize->add_option("--dim", dim, "ambient dimension")->required();
  parsevalize->add_option("--output", config.output_path, "frame JSON")
      ->required();
  add_strategy_flags(parsevalize, config);
  add_stop_flags(parsevalize, config, trace_tol, opnorm_tol);
  add_tolerance_flags(parsevalize, config, rank_tol);

  auto* verify = app.add_subcommand(
      "verify-chain", "test whether a rank-one chain arises from the dynamics");
  verify->add_option("--input", config.input_path, "chain JSON {R, E}")
      ->required();
  verify->add_option("--output", config.output_path, "witness JSON")
      ->required();
  verify->add_option("--norm-tol", config.norm_tol,
                     "normalization tolerance for <E, pinv(R) E> = 1");
  add_tolerance_flags(verify, config, rank_tol);

  auto* kernel = app.add_subcommand(
      "kernel-features", "iterative feature maps for a kernel Gram matrix");
  kernel->add_option("--input", config.input_path, "dataset CSV");
  kernel->add_option("--output", config.output_path, "feature CSV")
      ->required();
  const std::map<std::string, conedeflate::KernelKind> kernel_names{
      {"gaussian", conedeflate::KernelKind::Gaussian},
      {"poly", conedeflate::KernelKind::Polynomial},
      {"linear", conedeflate::KernelKind::Linear},
      {"explicit", conedeflate::KernelKind::ExplicitGram},
  };
  kernel->add_option("--kernel", config.kernel, "kernel family")
      ->transform(CLI::CheckedTransformer(kernel_names, CLI::ignore_case));
  kernel->add_option("--sigma", config.sigma, "gaussian bandwidth");
  kernel->add_option("--degree", config.degree, "polynomial degree");
  kernel->add_option("--offset", config.offset, "polynomial offset");
  kernel->add_option("--kernel-file", config.kernel_file,
                     "kernel config JSON (required for explicit Gram)");
  const std::map<std::string, conedeflate::ScheduleKind> schedule_names{
      {"cyclic", conedeflate::ScheduleKind::Cyclic},
      {"greedy", conedeflate::ScheduleKind::Greedy},
  };
  kernel->add_option("--schedule", config.schedule, "point-visit order")
      ->transform(CLI::CheckedTransformer(schedule_names, CLI::ignore_case));
  add_stop_flags(kernel, config, trace_tol, opnorm_tol);
  add_tolerance_flags(kernel, config, rank_tol);

  auto* report = app.add_subcommand(
      "report", "recompute report and energy series from raw chain data");
  report->add_option("--input", config.input_path, "chain JSON {R, E}")
      ->required();
  report->add_option("--output", config.output_path, "chain report JSON")
      ->required();
  report->add_flag("--emit-vectors", config.emit_vectors,
                   "include residual vectors E_n in the report");
  add_tolerance_flags(report, config, rank_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return conedeflate::kExitUsage;
  }

  if (decompose->parsed()) config.command = RunConfig::Command::Decompose;
  if (parsevalize->parsed()) config.command = RunConfig::Command::Parsevalize;
  if (verify->parsed()) config.command = RunConfig::Command::VerifyChain;
  if (kernel->parsed()) config.command = RunConfig::Command::KernelFeatures;
  if (report->parsed()) config.command = RunConfig::Command::Report;

  config.dim = static_cast<Eigen::Index>(dim);
  if (trace_tol >= 0.0) config.trace_tol = trace_tol;
  if (opnorm_tol >= 0.0) config.opnorm_tol = opnorm_tol;
  if (rank_tol >= 0.0) config.tolerances.rank_tol = rank_tol;

  return conedeflate::run_command(config);
}
