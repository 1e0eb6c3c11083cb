#include "conedeflate/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace conedeflate {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::vector<double> numbers_from_json(const Json& j, const char* what,
                                      std::size_t expected) {
  if (!j.is_array() || j.size() != expected) {
    throw InvalidConfig(std::string(what) + " must be an array of " +
                        std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw InvalidConfig(std::string(what) + " must contain numbers only");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::Index dim_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") ||
      !j["dim"].is_number_integer()) {
    throw InvalidConfig("expected an object with an integer 'dim' field");
  }
  const auto dim = j["dim"].get<long long>();
  if (dim < 1) throw InvalidConfig("'dim' must be a positive integer");
  return static_cast<Eigen::Index>(dim);
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json j;
  j["dim"] = a.rows();
  Json real = Json::array();
  Json imag = Json::array();
  bool any_imag = false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      real.push_back(a(i, k).real());
      imag.push_back(a(i, k).imag());
      any_imag = any_imag || a(i, k).imag() != 0.0;
    }
  }
  j["real"] = std::move(real);
  if (any_imag) j["imag"] = std::move(imag);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::Index dim = dim_from_json(j);
  const auto n = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (!j.contains("real")) {
    throw InvalidConfig("matrix object requires a 'real' field");
  }
  const std::vector<double> real = numbers_from_json(j["real"], "real", n);
  std::vector<double> imag(n, 0.0);
  if (j.contains("imag")) {
    imag = numbers_from_json(j["imag"], "imag", n);
  }
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto idx = static_cast<std::size_t>(i * dim + k);
      a(i, k) = Scalar(real[idx], imag[idx]);
    }
  }
  return a;
}

Json vector_to_json(const Vector& v) {
  Json j;
  j["dim"] = v.size();
  Json real = Json::array();
  Json imag = Json::array();
  bool any_imag = false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    real.push_back(v(i).real());
    imag.push_back(v(i).imag());
    any_imag = any_imag || v(i).imag() != 0.0;
  }
  j["real"] = std::move(real);
  if (any_imag) j["imag"] = std::move(imag);
  return j;
}

Vector vector_from_json(const Json& j) {
  const Eigen::Index dim = dim_from_json(j);
  if (!j.contains("real")) {
    throw InvalidConfig("vector object requires a 'real' field");
  }
  const auto n = static_cast<std::size_t>(dim);
  const std::vector<double> real = numbers_from_json(j["real"], "real", n);
  std::vector<double> imag(n, 0.0);
  if (j.contains("imag")) {
    imag = numbers_from_json(j["imag"], "imag", n);
  }
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = Scalar(real[static_cast<std::size_t>(i)],
                  imag[static_cast<std::size_t>(i)]);
  }
  return v;
}

Json tolerances_to_json(const ToleranceConfig& tol) {
  Json j;
  j["psd_tol"] = tol.psd_tol;
  j["hermit_tol"] = tol.hermit_tol;
  if (tol.rank_tol) {
    j["rank_tol"] = *tol.rank_tol;
  } else {
    j["rank_tol"] = "auto";
  }
  return j;
}

ToleranceConfig tolerances_from_json(const Json& j) {
  ToleranceConfig tol;
  if (j.contains("psd_tol")) tol.psd_tol = j["psd_tol"].get<double>();
  if (j.contains("hermit_tol")) tol.hermit_tol = j["hermit_tol"].get<double>();
  if (j.contains("rank_tol") && j["rank_tol"].is_number()) {
    tol.rank_tol = j["rank_tol"].get<double>();
  }
  tol.validate();
  return tol;
}

StrategyConfig strategy_from_json(const Json& j) {
  StrategyConfig cfg;
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidConfig("strategy object requires a 'kind' field");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "greedy") {
    cfg.kind = StrategyKind::Greedy;
  } else if (kind == "weak-greedy") {
    cfg.kind = StrategyKind::WeakGreedy;
  } else if (kind == "cyclic") {
    cfg.kind = StrategyKind::CyclicBasis;
  } else if (kind == "random") {
    cfg.kind = StrategyKind::RandomSphere;
  } else if (kind == "explicit") {
    cfg.kind = StrategyKind::ExplicitList;
  } else {
    throw InvalidConfig("unknown strategy kind '" + kind + "'");
  }
  if (j.contains("c")) cfg.c = j["c"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("pool")) {
    for (const auto& v : j["pool"]) {
      cfg.candidate_pool.push_back(vector_from_json(v));
    }
  }
  if (j.contains("explicit")) {
    for (const auto& v : j["explicit"]) {
      cfg.explicit_list.push_back(vector_from_json(v));
    }
  }
  validate_strategy(cfg);
  return cfg;
}

Json strategy_to_json(const StrategyConfig& cfg) {
  Json j;
  j["kind"] = to_string(cfg.kind);
  if (cfg.kind == StrategyKind::WeakGreedy) j["c"] = cfg.c;
  if (cfg.kind == StrategyKind::RandomSphere) j["seed"] = cfg.seed;
  if (!cfg.candidate_pool.empty()) {
    Json pool = Json::array();
    for (const Vector& v : cfg.candidate_pool) pool.push_back(vector_to_json(v));
    j["pool"] = std::move(pool);
  }
  if (!cfg.explicit_list.empty()) {
    Json list = Json::array();
    for (const Vector& v : cfg.explicit_list) list.push_back(vector_to_json(v));
    j["explicit"] = std::move(list);
  }
  return j;
}

KernelConfig kernel_config_from_json(const Json& j) {
  KernelConfig cfg;
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidConfig("kernel object requires a 'kind' field");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "gaussian") {
    cfg.kind = KernelKind::Gaussian;
  } else if (kind == "poly") {
    cfg.kind = KernelKind::Polynomial;
  } else if (kind == "linear") {
    cfg.kind = KernelKind::Linear;
  } else if (kind == "explicit") {
    cfg.kind = KernelKind::ExplicitGram;
  } else {
    throw InvalidConfig("unknown kernel kind '" + kind + "'");
  }
  if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
  if (j.contains("degree")) cfg.degree = j["degree"].get<int>();
  if (j.contains("offset")) cfg.offset = j["offset"].get<double>();
  if (cfg.kind == KernelKind::ExplicitGram) {
    if (!j.contains("gram")) {
      throw InvalidConfig("explicit kernel requires a 'gram' matrix");
    }
    cfg.gram = matrix_from_json(j["gram"]);
  }
  return cfg;
}

Json chain_report_json(const ResidualChain& chain, bool emit_vectors) {
  Json j;
  j["r0"] = {
      {"dim", chain.dim()},
      {"trace", chain.initial().trace().real()},
      {"opnorm", opnorm(chain.initial())},
  };
  Json steps = Json::array();
  for (const PhiStep& step : chain.steps) {
    steps.push_back({
        {"n", step.index},
        {"energy", step.step_energy},
        {"trace_after", step.residual_trace_after},
        {"opnorm_after", step.residual_opnorm_after},
        {"clamp", step.clamp_magnitude},
        {"zero_energy", step.zero_energy},
    });
  }
  j["steps"] = std::move(steps);
  j["stop_reason"] = to_string(chain.stop_reason);
  j["tolerances"] = tolerances_to_json(chain.tolerances);

  const EnergyReport report = energy_report(chain);
  j["audit"] = {
      {"telescoping_defect", telescoping_defect(chain, chain.steps.size())},
      {"trace_identity_gap", report.trace_identity_gap},
      {"energy_sum", report.partial_sums.empty() ? 0.0
                                                 : report.partial_sums.back()},
  };
  if (emit_vectors) {
    Json vectors = Json::array();
    for (const PhiStep& step : chain.steps) {
      vectors.push_back(vector_to_json(step.residual_vector));
    }
    j["vectors"] = std::move(vectors);
  }
  return j;
}

Json chain_data_json(const ResidualChain& chain) {
  Json j;
  Json rs = Json::array();
  for (const Matrix& r : chain.residuals) rs.push_back(matrix_to_json(r));
  Json es = Json::array();
  for (const PhiStep& step : chain.steps) {
    es.push_back(vector_to_json(step.residual_vector));
  }
  j["R"] = std::move(rs);
  j["E"] = std::move(es);
  return j;
}

std::pair<std::vector<Matrix>, std::vector<Vector>> chain_data_from_json(
    const Json& j) {
  if (!j.is_object() || !j.contains("R") || !j.contains("E")) {
    throw InvalidConfig("chain data requires 'R' and 'E' arrays");
  }
  std::vector<Matrix> rs;
  for (const auto& r : j["R"]) rs.push_back(matrix_from_json(r));
  std::vector<Vector> es;
  for (const auto& e : j["E"]) es.push_back(vector_from_json(e));
  return {std::move(rs), std::move(es)};
}

std::string energy_csv(const ResidualChain& chain) {
  std::string out = "n,energy,partial_sum,trace_after\n";
  double sum = 0.0;
  for (const PhiStep& step : chain.steps) {
    sum += step.step_energy;
    out += std::to_string(step.index);
    out += ',';
    out += format_double(step.step_energy);
    out += ',';
    out += format_double(sum);
    out += ',';
    out += format_double(step.residual_trace_after);
    out += '\n';
  }
  return out;
}

Json witness_to_json(const ChainWitness& witness) {
  Json j;
  j["valid"] = witness.valid;
  j["failure_step"] = witness.failure_step;
  j["failure_reason"] = witness.failure_reason;
  j["norm_tol"] = witness.norm_tol;
  Json steps = Json::array();
  for (const StepWitness& step : witness.steps) {
    Json s = {
        {"n", step.index},
        {"range_membership", step.range_membership},
        {"normalization_value", step.normalization_value},
        {"excluded_zero_step", step.excluded_zero_step},
    };
    if (step.recovered_u) s["recovered_u"] = vector_to_json(*step.recovered_u);
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

Json frame_to_json(const FrameSystem& frame) {
  Json j;
  j["dim"] = frame.dim;
  j["count"] = frame.vectors.size();
  Json vectors = Json::array();
  for (const Vector& v : frame.vectors) vectors.push_back(vector_to_json(v));
  j["vectors"] = std::move(vectors);
  j["certified"] = frame.certified;
  j["parseval_defect"] = frame.parseval_defect_vs_identity;
  j["source"] = frame.source;
  return j;
}

RealMatrix points_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const std::string cell = line.substr(start, comma - start);
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidConfig("dataset CSV cell is not a number: '" + cell +
                            "'");
      }
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidConfig("dataset CSV rows have inconsistent column counts");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidConfig("dataset CSV contains no points");
  RealMatrix points(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rows[i][k];
    }
  }
  return points;
}

std::string feature_csv(const FeatureTable& table) {
  std::string out = "point";
  for (Eigen::Index n = 0; n < table.values.cols(); ++n) {
    out += ",f" + std::to_string(n) + "_re,f" + std::to_string(n) + "_im";
  }
  out += '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index n = 0; n < table.values.cols(); ++n) {
      out += ',';
      out += format_double(table.values(i, n).real());
      out += ',';
      out += format_double(table.values(i, n).imag());
    }
    out += '\n';
  }
  return out;
}

Json feature_summary_json(const KernelModel& model,
                          const KernelFeatureResult& result) {
  Json j;
  j["m"] = model.gram.rows();
  j["N"] = result.table.values.cols();
  j["residual_gram_defect"] = result.table.residual_gram_defect;
  j["sup_defect"] = kernel_reconstruction_error(model, result.table);
  j["stop_reason"] = to_string(result.chain.stop_reason);
  j["skipped_points"] = model.zero_sections;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !target.parent_path().empty()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
      throw Error("short write to '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidConfig("cannot read input file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace conedeflate
