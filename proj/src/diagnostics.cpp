#include "spge/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "spge/solver.hpp"

namespace spge {

double proximal_residual(const Vector& x, double mu, const SmoothingOracle& loss,
                         const CappedL1Penalty& penalty, const BoxConstraint& box) {
  const DVector d = d_select(x, penalty.v());
  const Vector w = x - loss.gradient(x, mu);
  return (x - prox_capped_piece(w, d, penalty.lambda(), penalty.v(), box)).norm();
}

LowerBoundReport lower_bound_check(const Vector& x, double v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lower_bound_check: tol must be positive");
  LowerBoundReport report;
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a > tol && a < v - tol) {
      report.ok = false;
      report.violations.push_back(i);
    }
  }
  return report;
}

double lifted_stationarity_gap(const Vector& x, const SmoothingOracle& loss,
                               const CappedL1Penalty& penalty, const BoxConstraint& box,
                               double mu_probe, std::optional<double> step_scale) {
  if (!(mu_probe > 0.0)) throw std::invalid_argument("stationarity gap: mu_probe must be positive");
  const double scale = step_scale.value_or(loss.ltilde());
  const double step = mu_probe / scale;
  const DVector d = d_select(x, penalty.v());
  const Vector w = x - step * loss.gradient(x, mu_probe);
  const Vector p = prox_capped_piece(w, d, penalty.lambda() * step, penalty.v(), box);
  return (x - p).norm() / step;
}

RecoveryMetrics recovery_metrics(const Vector& x_out, const std::optional<Vector>& x_true,
                                 const std::vector<IterationRecord>& trace) {
  RecoveryMetrics m;
  m.support_size = support_size(x_out);
  m.iterations = static_cast<long>(trace.size());
  m.wall_clock_s = trace.empty() ? 0.0 : trace.back().time_s;
  if (!x_true) return m;
  const Vector& xt = *x_true;
  if (xt.size() != x_out.size()) {
    throw std::invalid_argument("recovery_metrics: x_out and x_true differ in length");
  }
  const double true_norm = xt.norm();
  if (true_norm > 0.0) m.rel_err = (x_out - xt).norm() / true_norm;
  const Index n = xt.size();
  Index hits = 0;
  Index zeros = 0;
  Index zero_hits = 0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(x_out[i] - xt[i]) <= kSuccessThreshold) ++hits;
    if (xt[i] == 0.0) {
      ++zeros;
      if (x_out[i] == 0.0) ++zero_hits;
    }
  }
  if (n > 0) m.success_rate = static_cast<double>(hits) / static_cast<double>(n);
  m.sparsity_rate = zeros > 0 ? static_cast<double>(zero_hits) / static_cast<double>(zeros) : 1.0;
  return m;
}

std::vector<ResidualScalingPoint> residual_scaling_profile(
    const Vector& y, const Vector& z, const DVector& d, const CappedL1Penalty& penalty,
    const BoxConstraint& box, const std::vector<double>& alphas) {
  std::vector<ResidualScalingPoint> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw std::invalid_argument("residual profile: alpha must be positive");
    const Vector p =
        prox_capped_piece(y - alpha * z, d, alpha * penalty.lambda(), penalty.v(), box);
    const double q = (p - y).norm();
    out.push_back({alpha, q / alpha, q});
  }
  return out;
}

std::optional<std::size_t> first_support_violation(const std::vector<Vector>& iterates,
                                                   std::size_t from) {
  for (std::size_t j = std::max<std::size_t>(from, 2); j < iterates.size(); ++j) {
    const Vector& next = iterates[j];
    const Vector& cur = iterates[j - 1];
    const Vector& prev = iterates[j - 2];
    for (Index i = 0; i < next.size(); ++i) {
      if (next[i] != 0.0 && cur[i] == 0.0 && prev[i] == 0.0) return j;
    }
  }
  return std::nullopt;
}

}  // namespace spge
