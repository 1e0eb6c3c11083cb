#include "conedeflate/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace conedeflate {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Gaussian:
      return "gaussian";
    case KernelKind::Polynomial:
      return "poly";
    case KernelKind::Linear:
      return "linear";
    case KernelKind::ExplicitGram:
      return "explicit";
  }
  return "unknown";
}

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Cyclic:
      return "cyclic";
    case ScheduleKind::Greedy:
      return "greedy";
    case ScheduleKind::Explicit:
      return "explicit";
  }
  return "unknown";
}

Matrix gram_matrix(const KernelConfig& kernel, const RealMatrix& points) {
  if (kernel.kind == KernelKind::ExplicitGram) {
    if (kernel.gram.rows() == 0 || kernel.gram.rows() != kernel.gram.cols()) {
      throw InvalidKernelParams("explicit Gram matrix must be square");
    }
    return kernel.gram;
  }
  const Eigen::Index m = points.rows();
  if (m < 1) throw InvalidKernelParams("at least one sample point required");

  auto eval = [&kernel](const RealVector& x, const RealVector& y) -> double {
    switch (kernel.kind) {
      case KernelKind::Gaussian:
        return std::exp(-(x - y).squaredNorm() /
                        (2.0 * kernel.sigma * kernel.sigma));
      case KernelKind::Polynomial:
        return std::pow(x.dot(y) + kernel.offset, kernel.degree);
      case KernelKind::Linear:
        return x.dot(y);
      default:
        throw InvalidKernelParams("unsupported kernel kind");
    }
  };

  if (kernel.kind == KernelKind::Gaussian && !(kernel.sigma > 0.0)) {
    throw InvalidKernelParams("gaussian bandwidth sigma must be positive");
  }
  if (kernel.kind == KernelKind::Polynomial &&
      (kernel.degree < 1 || kernel.offset < 0.0)) {
    throw InvalidKernelParams(
        "polynomial kernel requires degree >= 1 and offset >= 0");
  }

  Matrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double value = eval(points.row(i), points.row(j));
      g(i, j) = Scalar(value, 0.0);
      g(j, i) = Scalar(value, 0.0);
    }
  }
  return g;
}

std::vector<Vector> embed_sections(const Matrix& gram,
                                   const ToleranceConfig& tol) {
  const Matrix root = sqrt_psd(gram, tol);
  std::vector<Vector> sections;
  sections.reserve(gram.rows());
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    sections.push_back(root.col(i));
  }
  return sections;
}

KernelModel make_kernel_model(const KernelConfig& kernel,
                              const RealMatrix& points,
                              const ToleranceConfig& tol) {
  KernelModel model;
  model.points = points;
  model.kernel = kernel;
  model.gram = gram_matrix(kernel, points);
  require_hermitian(model.gram, tol);
  model.sections = embed_sections(model.gram, tol);  // certifies PSD

  const double lmax = opnorm(model.gram);
  const double cutoff = tol.rank_tol_rel(model.gram.rows()) * lmax;
  for (Eigen::Index i = 0; i < model.gram.rows(); ++i) {
    if (model.gram(i, i).real() <= cutoff) {
      model.zero_sections.push_back(static_cast<int>(i));
    }
  }
  return model;
}

namespace {

struct SectionDirections {
  const KernelModel* model;
  Schedule schedule;
  std::vector<int> live;  // unskipped section indices, ascending
  std::shared_ptr<std::vector<int>> visits;
  std::shared_ptr<std::size_t> explicit_cursor;

  bool skipped(int i) const {
    return std::find(model->zero_sections.begin(), model->zero_sections.end(),
                     i) != model->zero_sections.end();
  }

  std::optional<int> pick(const Matrix& residual, int step) const {
    switch (schedule.kind) {
      case ScheduleKind::Cyclic:
        return live[static_cast<std::size_t>(step) % live.size()];
      case ScheduleKind::Greedy: {
        int best = -1;
        double best_value = -1.0;
        for (int i : live) {
          const Vector& k = model->sections[static_cast<std::size_t>(i)];
          const double value =
              k.dot(residual * k).real() / model->gram(i, i).real();
          if (value > best_value) {
            best_value = value;
            best = i;
          }
        }
        if (best < 0) return std::nullopt;
        return best;
      }
      case ScheduleKind::Explicit: {
        // Own cursor: skipped entries consume schedule positions but no steps.
        while (*explicit_cursor < schedule.order.size()) {
          const int i = schedule.order[(*explicit_cursor)++];
          if (i < 0 || i >= static_cast<int>(model->gram.rows())) {
            throw InvalidConfig("schedule index out of range");
          }
          if (!skipped(i)) return i;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

KernelFeatureResult kernel_feature_chain(const KernelModel& model,
                                         const Schedule& schedule,
                                         const StopRule& stop,
                                         const ToleranceConfig& tol) {
  const Eigen::Index m = model.gram.rows();
  if (m < 1) throw InvalidKernelParams("model has no sample points");
  if (model.zero_sections.size() == static_cast<std::size_t>(m)) {
    throw EmptySchedule("every kernel section is numerically zero");
  }
  if (schedule.kind == ScheduleKind::Explicit && schedule.order.empty()) {
    throw EmptySchedule("explicit schedule has no indices");
  }

  SectionDirections picker{&model, schedule, {},
                           std::make_shared<std::vector<int>>(),
                           std::make_shared<std::size_t>(0)};
  for (int i = 0; i < static_cast<int>(m); ++i) {
    if (!picker.skipped(i)) picker.live.push_back(i);
  }

  DirectionSource source = [picker](const Matrix& residual,
                                    int step) -> std::optional<Vector> {
    std::optional<int> index = picker.pick(residual, step);
    if (!index) return std::nullopt;
    const Vector& k = picker.model->sections[static_cast<std::size_t>(*index)];
    picker.visits->push_back(*index);
    return (k / k.norm()).eval();
  };

  KernelFeatureResult result;
  result.chain = run_chain(Matrix::Identity(m, m), source, stop, tol);
  result.visit_order = *picker.visits;

  const auto n = static_cast<Eigen::Index>(result.chain.steps.size());
  result.table.values.resize(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector& e = result.chain.steps[static_cast<std::size_t>(j)]
                          .residual_vector;
    for (Eigen::Index i = 0; i < m; ++i) {
      result.table.values(i, j) = model.sections[static_cast<std::size_t>(i)]
                                      .dot(e);
    }
  }
  result.table.residual_gram_defect =
      (model.gram - result.table.values * result.table.values.adjoint())
          .norm() /
      (1.0 + model.gram.norm());

  result.achieved_ratios.reserve(result.chain.steps.size());
  double previous_norm = 1.0;  // ||I|| = 1
  for (const PhiStep& step : result.chain.steps) {
    result.achieved_ratios.push_back(
        previous_norm > 0.0 ? step.step_energy / previous_norm : 0.0);
    previous_norm = step.residual_opnorm_after;
  }
  return result;
}

double kernel_reconstruction_error(const KernelModel& model,
                                   const FeatureTable& table) {
  if (table.values.rows() != model.gram.rows()) {
    throw DimensionMismatch("feature table does not match model size");
  }
  if (table.values.cols() == 0) {
    return maxabs(model.gram);
  }
  return maxabs(model.gram - table.values * table.values.adjoint());
}

}  // namespace conedeflate
