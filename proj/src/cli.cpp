#include "conedeflate/cli.hpp"

#include "conedeflate/frames.hpp"
#include "conedeflate/inverse.hpp"
#include "conedeflate/io.hpp"
#include "conedeflate/psd.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace conedeflate {

namespace {

constexpr double kAuditThreshold = 1e-9;

StrategyConfig resolve_strategy(const RunConfig& config) {
  if (!config.strategy_file.empty()) {
    return strategy_from_json(Json::parse(read_file(config.strategy_file)));
  }
  StrategyConfig cfg;
  cfg.kind = config.strategy;
  cfg.c = config.weak_greedy_c;
  cfg.seed = config.seed;
  validate_strategy(cfg);
  return cfg;
}

void require_output(const RunConfig& config) {
  if (config.output_path.empty()) {
    throw InvalidConfig("--output is required");
  }
}

Matrix load_matrix(const std::string& path) {
  if (path.empty()) throw InvalidConfig("--input is required");
  return matrix_from_json(Json::parse(read_file(path)));
}

// Rebuilds chain bookkeeping from raw (R, E) data so the report command can
// audit chains produced elsewhere. Directions are unknown and left empty.
ResidualChain chain_from_data(std::vector<Matrix> rs, std::vector<Vector> es,
                              const ToleranceConfig& tol) {
  if (rs.empty() || rs.size() != es.size() + 1) {
    throw DimensionMismatch(
        "chain data requires one more operator than residual vectors");
  }
  ResidualChain chain;
  chain.tolerances = tol;
  chain.residuals = std::move(rs);
  for (std::size_t n = 0; n < es.size(); ++n) {
    PhiStep step;
    step.index = static_cast<int>(n);
    step.residual_vector = std::move(es[n]);
    step.step_energy = step.residual_vector.squaredNorm();
    step.residual_trace_after = chain.residuals[n + 1].trace().real();
    step.residual_opnorm_after = opnorm(chain.residuals[n + 1]);
    step.zero_energy =
        step.step_energy <= tol.rank_tol_rel(chain.dim()) *
                                opnorm(chain.residuals[n]);
    chain.steps.push_back(std::move(step));
  }
  chain.stop_reason = StopReason::MaxSteps;
  return chain;
}

int audit_and_exit(const ResidualChain& chain) {
  const double telescoping =
      telescoping_defect(chain, chain.steps.size());
  const double gap = energy_report(chain).trace_identity_gap;
  if (telescoping > kAuditThreshold || gap > kAuditThreshold) {
    std::cerr << "self-audit failed: telescoping_defect=" << telescoping
              << " trace_identity_gap=" << gap << "\n";
    return kExitNumeric;
  }
  log_debug("self-audit: telescoping_defect=" + std::to_string(telescoping) +
            " trace_identity_gap=" + std::to_string(gap));
  return kExitOk;
}

}  // namespace

std::string sibling_path(const std::string& path, const std::string& suffix) {
  namespace fs = std::filesystem;
  fs::path p(path);
  fs::path stem = p.parent_path() / p.stem();
  return stem.string() + suffix;
}

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("CONEDEFLATE_LOG");
    if (env == nullptr) return 0;
    const std::string value(env);
    if (value == "debug") return 2;
    if (value == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= 1) std::cerr << "[conedeflate] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= 2) std::cerr << "[conedeflate] " << message << "\n";
}

int cmd_decompose(const RunConfig& config) {
  require_output(config);
  const Matrix r0 = load_matrix(config.input_path);
  const StrategyConfig strategy = resolve_strategy(config);
  const DirectionSource source =
      make_direction_source(strategy, r0.rows(), config.tolerances);

  log_info("decompose: dim=" + std::to_string(r0.rows()) +
           " strategy=" + to_string(strategy.kind));
  const ResidualChain chain =
      run_chain(r0, source, config.stop_rule(), config.tolerances);

  write_file_atomic(config.output_path,
                    dump_json(chain_report_json(chain, config.emit_vectors)));
  write_file_atomic(sibling_path(config.output_path, ".energy.csv"),
                    energy_csv(chain));
  if (config.emit_chain) {
    write_file_atomic(sibling_path(config.output_path, ".chain.json"),
                      dump_json(chain_data_json(chain)));
  }
  return audit_and_exit(chain);
}

int cmd_parsevalize(const RunConfig& config) {
  require_output(config);
  if (config.dim < 1) {
    throw InvalidConfig("parsevalize requires --dim >= 1");
  }
  const StrategyConfig strategy = resolve_strategy(config);
  const DirectionSource source =
      make_direction_source(strategy, config.dim, config.tolerances);

  const FrameSystem frame = parsevalize(config.dim, source,
                                        config.stop_rule(), config.tolerances);
  write_file_atomic(config.output_path, dump_json(frame_to_json(frame)));
  if (!frame.certified) {
    std::cerr << "frame is not Parseval-certified: defect="
              << frame.parseval_defect_vs_identity << "\n";
    return kExitUncertified;
  }
  return kExitOk;
}

int cmd_verify_chain(const RunConfig& config) {
  require_output(config);
  if (config.input_path.empty()) throw InvalidConfig("--input is required");
  auto [rs, es] = chain_data_from_json(Json::parse(read_file(config.input_path)));

  ChainWitness witness =
      verify_chain(rs, es, config.tolerances, config.norm_tol);
  if (witness.valid) {
    const auto recovered =
        recover_directions(rs, es, config.tolerances, config.norm_tol);
    for (std::size_t n = 0; n < recovered.size(); ++n) {
      witness.steps[n].recovered_u = recovered[n];
    }
  }
  write_file_atomic(config.output_path, dump_json(witness_to_json(witness)));
  if (!witness.valid) {
    std::cerr << "chain invalid at step " << witness.failure_step << ": "
              << witness.failure_reason << "\n";
    return kExitInvalidChain;
  }
  return kExitOk;
}

int cmd_kernel_features(const RunConfig& config) {
  require_output(config);
  KernelConfig kernel;
  if (!config.kernel_file.empty()) {
    kernel = kernel_config_from_json(Json::parse(read_file(config.kernel_file)));
  } else {
    kernel.kind = config.kernel;
    kernel.sigma = config.sigma;
    kernel.degree = config.degree;
    kernel.offset = config.offset;
    if (kernel.kind == KernelKind::ExplicitGram) {
      throw InvalidConfig(
          "explicit Gram kernels must come from --kernel-file");
    }
  }

  RealMatrix points(0, 0);
  if (kernel.kind != KernelKind::ExplicitGram) {
    if (config.input_path.empty()) {
      throw InvalidConfig("--input dataset CSV is required");
    }
    points = points_from_csv(read_file(config.input_path));
  }

  const KernelModel model =
      make_kernel_model(kernel, points, config.tolerances);
  log_info("kernel-features: m=" + std::to_string(model.gram.rows()) +
           " schedule=" + to_string(config.schedule));

  Schedule schedule;
  schedule.kind = config.schedule;
  const KernelFeatureResult result = kernel_feature_chain(
      model, schedule, config.stop_rule(), config.tolerances);

  write_file_atomic(config.output_path, feature_csv(result.table));
  write_file_atomic(sibling_path(config.output_path, ".summary.json"),
                    dump_json(feature_summary_json(model, result)));
  return kExitOk;
}

int cmd_report(const RunConfig& config) {
  require_output(config);
  if (config.input_path.empty()) throw InvalidConfig("--input is required");
  auto [rs, es] = chain_data_from_json(Json::parse(read_file(config.input_path)));
  const ResidualChain chain =
      chain_from_data(std::move(rs), std::move(es), config.tolerances);

  write_file_atomic(config.output_path,
                    dump_json(chain_report_json(chain, config.emit_vectors)));
  write_file_atomic(sibling_path(config.output_path, ".energy.csv"),
                    energy_csv(chain));
  return audit_and_exit(chain);
}

int run_command(const RunConfig& config) {
  try {
    switch (config.command) {
      case RunConfig::Command::Decompose:
        return cmd_decompose(config);
      case RunConfig::Command::Parsevalize:
        return cmd_parsevalize(config);
      case RunConfig::Command::VerifyChain:
        return cmd_verify_chain(config);
      case RunConfig::Command::KernelFeatures:
        return cmd_kernel_features(config);
      case RunConfig::Command::Report:
        return cmd_report(config);
    }
    throw InvalidConfig("unknown command");
  } catch (const InvalidConfig& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InconsistentChain& e) {
    std::cerr << "inconsistent chain: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const InvalidChain& e) {
    std::cerr << "invalid chain: " << e.what() << "\n";
    return kExitInvalidChain;
  } catch (const Json::exception& e) {
    std::cerr << "input parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace conedeflate
