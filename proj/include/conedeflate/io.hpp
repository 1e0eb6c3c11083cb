#pragma once

#include "conedeflate/dynamics.hpp"
#include "conedeflate/frames.hpp"
#include "conedeflate/inverse.hpp"
#include "conedeflate/kernels.hpp"
#include "conedeflate/strategies.hpp"
#include "conedeflate/types.hpp"

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace conedeflate {

using Json = nlohmann::json;

// Shared matrix/vector format: {"dim": n, "real": [...], "imag": [...]},
// row-major, imag omitted when identically zero.
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json tolerances_to_json(const ToleranceConfig& tol);
ToleranceConfig tolerances_from_json(const Json& j);

StrategyConfig strategy_from_json(const Json& j);
Json strategy_to_json(const StrategyConfig& cfg);

KernelConfig kernel_config_from_json(const Json& j);

/// Chain report: R0 summary, per-step scalars, stop reason, tolerance echo
/// and the self-audit block. E_n vectors are included only on request.
Json chain_report_json(const ResidualChain& chain, bool emit_vectors);

/// {"R": [matrix...], "E": [vector...]} — the verify-chain input format.
Json chain_data_json(const ResidualChain& chain);
std::pair<std::vector<Matrix>, std::vector<Vector>> chain_data_from_json(
    const Json& j);

/// CSV columns: n, energy, partial_sum, trace_after.
std::string energy_csv(const ResidualChain& chain);

Json witness_to_json(const ChainWitness& witness);

Json frame_to_json(const FrameSystem& frame);

/// Dataset CSV: one point per row, d comma-separated columns.
RealMatrix points_from_csv(const std::string& text);

/// Feature CSV: one row per point; per feature a re/im column pair.
std::string feature_csv(const FeatureTable& table);
Json feature_summary_json(const KernelModel& model,
                          const KernelFeatureResult& result);

std::string dump_json(const Json& j);

/// Writes through a temp file and renames, so interrupted runs never leave
/// a partial report.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace conedeflate
