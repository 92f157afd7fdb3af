#pragma once

#include <optional>
#include <vector>

#include "spge/penalty.hpp"
#include "spge/smoothing.hpp"

namespace spge {

struct IterationRecord;

/// ||x - prox_{lambda Phi^d}(x - grad f~(x, mu))|| with d = d_select(x, v),
/// the prox taken over the box at unit step.
double proximal_residual(const Vector& x, double mu, const SmoothingOracle& loss,
                         const CappedL1Penalty& penalty, const BoxConstraint& box);

struct LowerBoundReport {
  bool ok = true;
  std::vector<Index> violations;
};

/// Every coordinate must satisfy |x_i| <= tol or |x_i| >= v - tol.
LowerBoundReport lower_bound_check(const Vector& x, double v, double tol);

/// Gradient-mapping norm ||x - prox(x - s grad f~(x, mu_probe))|| / s at
/// step s = mu_probe / step_scale, with d = d_select(x, v). Zero iff x is a
/// fixed point of the smoothed prox-gradient map; small values certify
/// approximate lifted stationarity. step_scale defaults to loss.ltilde().
double lifted_stationarity_gap(const Vector& x, const SmoothingOracle& loss,
                               const CappedL1Penalty& penalty, const BoxConstraint& box,
                               double mu_probe = 1e-4,
                               std::optional<double> step_scale = std::nullopt);

struct RecoveryMetrics {
  std::optional<double> rel_err;
  std::optional<double> success_rate;
  std::optional<double> sparsity_rate;
  Index support_size = 0;
  long iterations = 0;
  double wall_clock_s = 0.0;
};

/// Coordinates with |x_out_i - x_true_i| <= this count as recovered.
inline constexpr double kSuccessThreshold = 0.01;

RecoveryMetrics recovery_metrics(const Vector& x_out, const std::optional<Vector>& x_true,
                                 const std::vector<IterationRecord>& trace);

/// p(alpha) = ||prox_{alpha g}(y - alpha z) - y|| / alpha and
/// q(alpha) = ||prox_{alpha g}(y - alpha z) - y|| for g = lambda Phi^d + box.
struct ResidualScalingPoint {
  double alpha;
  double p;
  double q;
};

std::vector<ResidualScalingPoint> residual_scaling_profile(
    const Vector& y, const Vector& z, const DVector& d, const CappedL1Penalty& penalty,
    const BoxConstraint& box, const std::vector<double>& alphas);

/// Running check of support containment:
/// supp(x^{k+1}) subset of supp(x^k) union supp(x^{k-1}). Returns the first
/// index k+1 where it fails, starting from `from`.
std::optional<std::size_t> first_support_violation(const std::vector<Vector>& iterates,
                                                   std::size_t from);

}  // namespace spge
