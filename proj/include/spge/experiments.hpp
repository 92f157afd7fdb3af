#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spge/problems.hpp"
#include "spge/solver.hpp"

namespace spge {

/// Stall tolerance used by the reproduction presets.
inline constexpr double kPresetStepTol = 1e-6;

/// Parameter sets of the three benchmark families.
SolverConfig toy_config();          // L = sqrt 2, mu0 = 0.1, eps = 1e-3
SolverConfig l1_regression_config();  // L = 2, mu0 = 50, eps = 1e-3
SolverConfig censored_config();     // L = 1.5, mu0 = 1, eps = 0.01

struct ToyCase {
  double lambda;
  double v;
};

/// The nine (lambda, v) pairs of the toy study.
const std::vector<ToyCase>& toy_cases();

/// Global minimisers of min |x1 + x2 - 1| + lambda ||x||_0 over [0,1]^2.
std::vector<Vector> toy_global_minimizers(double lambda);
bool is_toy_global(const Vector& x, double lambda, double tol);

struct ProblemSize {
  Index m;
  Index n;
  Index s;
};

const std::vector<ProblemSize>& l1_regression_sizes();
const std::vector<ProblemSize>& censored_sizes();

/// lambda0 values swept for censored regression: 0.001:0.001:0.1 when
/// `full`, otherwise a 1-2-5 subset of it.
std::vector<double> lambda0_grid(bool full);

enum class Algorithm { Spg, Spge };
std::string_view to_string(Algorithm a);

/// One solve of one instance by one algorithm.
struct Outcome {
  Algorithm algorithm = Algorithm::Spge;
  std::uint64_t seed = 0;
  Index m = 0;
  Index n = 0;
  Index s = 0;
  double lambda0 = 0.0;  // censored only
  long iterations = 0;
  double time_s = 0.0;
  TerminationReason termination = TerminationReason::MaxIter;
  double objective = 0.0;
  double v = 0.0;
  std::optional<double> rel_err;
  std::optional<double> success_rate;
  std::optional<double> sparsity_rate;
  Index support = 0;
  Vector x_final;
};

Outcome run_outcome(const ProblemInstance& instance, Algorithm algorithm,
                    const SolverConfig& config);

struct ToyRow {
  ToyCase params;
  Vector spg_x;
  Vector spge_x;
  long spg_iterations = 0;
  long spge_iterations = 0;
  double spg_time_s = 0.0;   // median over repeats
  double spge_time_s = 0.0;
};

/// Runs both algorithms on every toy case. With timing off the clock is not
/// read and the time columns stay zero.
std::vector<ToyRow> run_toy_study(int repeats, bool timing);

/// Both algorithms on seeds 1..seeds for every size.
std::vector<Outcome> run_l1_study(const std::vector<ProblemSize>& sizes, int seeds, bool timing);

/// Both algorithms on seeds 1..seeds for every size and lambda0.
std::vector<Outcome> run_censored_study(const std::vector<ProblemSize>& sizes,
                                        const std::vector<double>& lambda0s, int seeds,
                                        bool timing);

/// Aggregate over the outcomes matching one (algorithm, size, lambda0) cell.
struct CellSummary {
  Algorithm algorithm = Algorithm::Spge;
  ProblemSize size{0, 0, 0};
  double lambda0 = 0.0;
  int runs = 0;
  double mean_iterations = 0.0;
  double median_time_s = 0.0;
  double mean_rel_err = 0.0;
  double median_rel_err = 0.0;
  double mean_success = 0.0;
  double median_success = 0.0;
  double mean_sparsity = 0.0;
  double mean_support = 0.0;
  double median_support = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<Outcome>& outcomes);

double median(std::vector<double> values);

}  // namespace spge
