#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spge/penalty.hpp"
#include "spge/problems.hpp"
#include "spge/solver.hpp"

namespace spge {

/// Outcome of one randomized verification suite.
struct CheckReport {
  std::string suite;
  bool passed = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  double seconds = 0.0;
  /// Human-readable descriptions of the worst cases, worst first.
  std::vector<std::string> worst;
};

/// Brute-force minimiser of tau * (|x|/v - theta_d(x)) + (x - w)^2 / 2 over
/// [lower, upper]: grid at spacing `grid`, then golden-section refinement of
/// the best bracket. Shares no code with prox_capped_scalar.
double prox_grid_scalar(double w, Piece d, double tau, double v, double lower, double upper,
                        double grid = 1e-4);

/// Closed-form prox against the grid oracle on random (w, d, tau, v, box).
CheckReport check_prox(std::size_t tuples = 10000, std::uint64_t seed = 1, double tol = 1e-6);

/// Both smoothers against central differences at points at least
/// `seam_margin` away from every kernel seam |s| = mu.
CheckReport check_grad(std::size_t points = 1000, std::uint64_t seed = 2, double tol = 1e-5,
                       double h = 1e-6, double seam_margin = 1e-3);

/// Largest increase of the monitor H + kappa mu between consecutive
/// iterations, skipping steps where the monitor chain was restarted.
double max_monitor_increase(const std::vector<IterationRecord>& trace);

/// SPGE with safe-cap momentum on l1-regression instances of the given size.
CheckReport check_monitor(Index m = 60, Index n = 120, Index s = 12, int seeds = 5,
                          double tol = 1e-10);

struct RatePoint {
  long K;
  double min_residual_sq;
  double scaled;  // min_residual_sq * (K + 1)^(1 - sigma)
};

/// min_{k <= K} r(x^k)^2 (K + 1)^(1 - sigma) along one run of the given
/// configuration. r is the unit-step proximal residual at (x^k, mu_k).
std::vector<RatePoint> rate_profile(const ProblemInstance& instance, SolverConfig config,
                                    const std::vector<long>& Ks);

/// Rate trend on a fixed l1-regression instance: the largest scaled value
/// may not exceed `factor` times the value at the first K.
CheckReport check_rate(const std::vector<long>& Ks = {250, 500, 1000, 2000},
                       double factor = 2.0);

/// p(alpha) nonincreasing, q(alpha) nondecreasing on random (y, z).
CheckReport check_residual_scaling(std::size_t draws = 100, std::uint64_t seed = 3,
                                   double slack = 1e-10);

/// True when both traces agree in every recorded field except time_s.
bool traces_identical(const SolveResult& a, const SolveResult& b);

/// spge_solve with beta_schedule none against spg_solve on `instances`
/// seeded problems.
CheckReport check_spg_equivalence(int instances = 5);

}  // namespace spge
