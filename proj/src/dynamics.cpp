#include "conedeflate/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace conedeflate {

namespace {

double real_trace(const Matrix& a) { return a.trace().real(); }

void require_unit(const Vector& u) {
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw NotUnitVector("direction norm deviates from 1 by more than 1e-9; "
                        "callers must pre-normalize");
  }
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxSteps:
      return "MaxSteps";
    case StopReason::TraceBelowTol:
      return "TraceBelowTol";
    case StopReason::OpNormBelowTol:
      return "OpNormBelowTol";
    case StopReason::Stagnation:
      return "Stagnation";
    case StopReason::ExactZero:
      return "ExactZero";
  }
  return "Unknown";
}

PhiOutcome phi_update(const Matrix& r, const Vector& u,
                      const ToleranceConfig& tol) {
  if (u.size() != r.rows()) {
    throw DimensionMismatch("direction length does not match residual");
  }
  require_unit(u);

  EigenSystem es = eig_hermitian(r, tol);
  const double lmax = es.eigenvalues.maxCoeff();
  const double scale = std::max(lmax, 0.0);
  if (es.eigenvalues.minCoeff() < -tol.psd_tol * scale) {
    throw NotPSD("phi_update requires a PSD residual");
  }

  const Matrix root = es.eigenvectors *
                      es.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      es.eigenvectors.adjoint();
  PhiOutcome out;
  out.residual = root * u;
  out.opnorm_before = scale;
  ClampOutcome clamped =
      clamp_psd(hermitian_part(r - out.residual * out.residual.adjoint()), tol,
                scale);
  out.next = std::move(clamped.matrix);
  out.clamp_magnitude = clamped.clamped_mass;
  out.opnorm_after = clamped.lambda_max;
  return out;
}

Matrix phi_update_congruence(const Matrix& r, const Vector& u,
                             const ToleranceConfig& tol) {
  if (u.size() != r.rows()) {
    throw DimensionMismatch("direction length does not match residual");
  }
  require_unit(u);
  const Matrix root = sqrt_psd(r, tol);
  const Matrix compress =
      Matrix::Identity(r.rows(), r.cols()) - u * u.adjoint();
  return hermitian_part(root * compress * root);
}

ResidualChain run_chain(const Matrix& r0, const DirectionSource& directions,
                        const StopRule& stop, const ToleranceConfig& tol) {
  tol.validate();
  if (stop.max_steps < 1) {
    throw InvalidConfig("max_steps must be >= 1");
  }
  if (stop.stagnation_window < 0) {
    throw InvalidConfig("stagnation_window must be >= 0");
  }
  require_hermitian(r0, tol);

  ResidualChain chain;
  chain.tolerances = tol;
  chain.residuals.push_back(r0);

  const double zero_tol = 1e-12 * std::max(real_trace(r0), 0.0);
  double trace = real_trace(r0);
  bool stopped = false;

  while (!stopped) {
    const Matrix& current = chain.residuals.back();

    if (trace <= zero_tol) {
      chain.stop_reason = StopReason::ExactZero;
      break;
    }
    if (stop.trace_tol && trace <= *stop.trace_tol) {
      chain.stop_reason = StopReason::TraceBelowTol;
      break;
    }
    if (stop.opnorm_tol) {
      const double norm = chain.steps.empty()
                              ? opnorm(current)
                              : chain.steps.back().residual_opnorm_after;
      if (norm <= *stop.opnorm_tol) {
        chain.stop_reason = StopReason::OpNormBelowTol;
        break;
      }
    }
    if (stop.stagnation_window > 0 &&
        chain.steps.size() >= static_cast<std::size_t>(stop.stagnation_window)) {
      bool stale = true;
      for (std::size_t k = chain.steps.size() - stop.stagnation_window;
           k < chain.steps.size(); ++k) {
        if (chain.steps[k].step_energy >= stop.stagnation_energy_tol) {
          stale = false;
          break;
        }
      }
      if (stale) {
        chain.stop_reason = StopReason::Stagnation;
        break;
      }
    }
    if (chain.steps.size() >= static_cast<std::size_t>(stop.max_steps)) {
      chain.stop_reason = StopReason::MaxSteps;
      break;
    }

    std::optional<Vector> u = directions(current, static_cast<int>(chain.steps.size()));
    if (!u) {
      throw EmptyDirectionSource(
          "direction source exhausted before any stop rule fired");
    }

    PhiOutcome out = phi_update(current, *u, tol);
    PhiStep step;
    step.index = static_cast<int>(chain.steps.size());
    step.direction = std::move(*u);
    step.residual_vector = std::move(out.residual);
    step.step_energy = step.residual_vector.squaredNorm();
    step.residual_trace_after = real_trace(out.next);
    step.residual_opnorm_after = out.opnorm_after;
    step.clamp_magnitude = out.clamp_magnitude;
    step.zero_energy =
        step.step_energy <=
        tol.rank_tol_rel(r0.rows()) * std::max(out.opnorm_before, 0.0);

    trace = step.residual_trace_after;
    chain.steps.push_back(std::move(step));
    chain.residuals.push_back(std::move(out.next));
  }

  return chain;
}

double telescoping_defect(const ResidualChain& chain, std::size_t n) {
  if (n > chain.steps.size()) {
    throw IndexOutOfRange("prefix length exceeds chain length");
  }
  const Matrix& r0 = chain.initial();
  Matrix extracted = Matrix::Zero(r0.rows(), r0.cols());
  for (std::size_t k = 0; k < n; ++k) {
    const Vector& e = chain.steps[k].residual_vector;
    extracted += e * e.adjoint();
  }
  const double gap = ((r0 - chain.residuals[n]) - extracted).norm();
  return gap / (1.0 + r0.norm());
}

EnergyReport energy_report(const ResidualChain& chain) {
  EnergyReport report;
  report.energies.reserve(chain.steps.size());
  report.partial_sums.reserve(chain.steps.size());
  double sum = 0.0;
  for (const PhiStep& step : chain.steps) {
    report.energies.push_back(step.step_energy);
    sum += step.step_energy;
    report.partial_sums.push_back(sum);
  }
  const double tr0 = chain.initial().trace().real();
  const double trf = chain.final_residual().trace().real();
  report.trace_identity_gap = std::abs(tr0 - trf - sum) / (1.0 + tr0);
  return report;
}

QuadraticDefect quadratic_defect(const ResidualChain& chain, const Vector& x) {
  if (x.size() != chain.dim()) {
    throw DimensionMismatch("probe vector length does not match chain");
  }
  QuadraticDefect defect;
  defect.lhs =
      x.dot((chain.initial() - chain.final_residual()) * x).real();
  for (const PhiStep& step : chain.steps) {
    defect.rhs += std::norm(step.residual_vector.dot(x));
  }
  return defect;
}

}  // namespace conedeflate
