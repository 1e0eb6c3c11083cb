#pragma once

#include "conedeflate/dynamics.hpp"
#include "conedeflate/kernels.hpp"
#include "conedeflate/strategies.hpp"
#include "conedeflate/types.hpp"

#include <cstdint>
#include <string>

namespace conedeflate {

// Exit codes: 0 success, 1 usage/input error, 2 numerical failure,
// 3 uncertified frame, 4 inconsistent chain, 5 invalid chain.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUncertified = 3;
inline constexpr int kExitInconsistent = 4;
inline constexpr int kExitInvalidChain = 5;

struct RunConfig {
  enum class Command {
    Decompose,
    Parsevalize,
    VerifyChain,
    KernelFeatures,
    Report,
  };

  Command command = Command::Decompose;
  std::string input_path;
  std::string output_path;
  std::string strategy_file;  // StrategyConfig JSON; overrides flag fields
  std::string kernel_file;    // kernel config JSON (explicit Gram lives here)

  StrategyKind strategy = StrategyKind::Greedy;
  double weak_greedy_c = 1.0;
  std::uint64_t seed = 0;

  int max_steps = 1000;
  std::optional<double> trace_tol;
  std::optional<double> opnorm_tol;
  int stagnation_window = 0;
  double stagnation_energy_tol = 0.0;

  ToleranceConfig tolerances;
  double norm_tol = 1e-8;

  bool emit_vectors = false;
  bool emit_chain = false;

  Eigen::Index dim = 0;  // parsevalize only

  KernelKind kernel = KernelKind::Gaussian;
  double sigma = 1.0;
  int degree = 2;
  double offset = 0.0;
  ScheduleKind schedule = ScheduleKind::Cyclic;

  StopRule stop_rule() const {
    StopRule stop;
    stop.max_steps = max_steps;
    stop.trace_tol = trace_tol;
    stop.opnorm_tol = opnorm_tol;
    stop.stagnation_window = stagnation_window;
    stop.stagnation_energy_tol = stagnation_energy_tol;
    return stop;
  }
};

int cmd_decompose(const RunConfig& config);
int cmd_parsevalize(const RunConfig& config);
int cmd_verify_chain(const RunConfig& config);
int cmd_kernel_features(const RunConfig& config);
int cmd_report(const RunConfig& config);

/// Dispatches on config.command and maps thrown errors onto the exit-code
/// taxonomy, with diagnostics on stderr.
int run_command(const RunConfig& config);

/// Sibling output path: report.json -> report.energy.csv, etc.
std::string sibling_path(const std::string& path, const std::string& suffix);

/// Verbosity from the CONEDEFLATE_LOG environment variable
/// (unset/quiet, "info", "debug").
int log_level();
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace conedeflate
