#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spge/penalty.hpp"
#include "spge/smoothing.hpp"

namespace spge {

enum class BetaSchedule {
  None,                  // plain smoothing proximal gradient
  SafeCapMax,            // largest momentum allowed by the safe cap
  FistaFixedRestart,     // FISTA-type momentum, clamped, restart every period
  FistaAdaptiveRestart,  // FISTA-type momentum, clamped, restart on overshoot
};

/// How the weight tau_k of the step term in the monitor H is evaluated.
///
/// tau_k = L/(4 mu_k) + L beta_k^2 / (4 mu_{k+1}) depends on beta_k and
/// mu_{k+1}, which are only known after the descent test that uses H.
///   Provisional: substitute beta_k <- beta_{k-1} and mu_{k+1} <- mu_k.
///   PostHoc: test with mu_{k+1} = mu_k and the beta_k that would follow;
///            if the test fails, re-evaluate tau_k with the decreased
///            mu_{k+1} and its beta_k before storing the monitor.
enum class TauConvention { Provisional, PostHoc };

enum class TerminationReason { MaxIter, MuThreshold, Stalled };

std::string_view to_string(BetaSchedule s);
std::string_view to_string(TauConvention c);
std::string_view to_string(TerminationReason r);
BetaSchedule parse_beta_schedule(std::string_view s);
TauConvention parse_tau_convention(std::string_view s);

struct SolverConfig {
  double L = 1.0;
  double alpha = 1.0;
  double sigma = 0.9;
  double mu0 = 1.0;
  double epsilon = 1e-3;
  long maxiter = 10000;
  double a = 1e-4;
  BetaSchedule beta_schedule = BetaSchedule::FistaFixedRestart;
  long restart_period = 500;
  double kappa = 0.5;
  TauConvention tau_convention = TauConvention::Provisional;
  bool reset_mu_on_fixed_restart = true;
  bool reset_mu_on_adaptive_restart = false;
  /// Extra stop: ||x^{k+1}-x^k|| + ||x^k-x^{k-1}|| <= step_tol * max(1, ||x^{k+1}||).
  /// Zero disables it.
  double step_tol = 0.0;
  /// Evaluate the unit-step proximal residual for every trace record.
  bool record_residual = true;
  /// Keep every iterate x^0, x^1, ... in the result.
  bool record_iterates = false;
  /// Record wall-clock seconds in the trace; zero otherwise.
  bool record_time = true;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Non-finite values or a blown-up iterate; usually means L is too small.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationRecord {
  long k = 0;                     // iteration index; the record describes x^{k+1}
  double mu = 0.0;                // mu_k used by the step
  double beta = 0.0;              // beta_{k-1} used in the extrapolation
  double objective = 0.0;         // F(x^{k+1}) = f + lambda * Phi, unsmoothed
  double smoothed_objective = 0.0;  // F~(x^{k+1}, mu_k)
  double monitor = 0.0;           // H(x^{k+1}, x^k, mu_k) + kappa * mu_k
  double step_norm = 0.0;         // ||x^{k+1} - x^k||
  double residual = 0.0;          // unit-step proximal residual at (x^{k+1}, mu_{k+1})
  Index nnz = 0;
  double time_s = 0.0;
  double tau_provisional = 0.0;
  double tau_posthoc = 0.0;
  double mu_next = 0.0;           // mu_{k+1}
  bool mu_decreased = false;
  bool restarted = false;         // momentum (and maybe mu) reset before this step
};

struct SolveResult {
  Vector x_final;
  std::vector<IterationRecord> trace;
  TerminationReason termination = TerminationReason::MaxIter;
  long iterations = 0;
  double wall_time_s = 0.0;
  /// Populated when record_iterates is set: x^0, ..., x^{iterations}.
  std::vector<Vector> iterates;
};

/// Rolling state of one solve.
struct SolverState {
  long k = 0;
  Vector x_prev;
  Vector x_cur;
  double mu_prev = 0.0;
  double mu_cur = 0.0;
  double t_prev = 1.0;      // FISTA scalar t_{k-1}
  double beta = 0.0;        // beta_{k-1}, used by the next step
  double monitor_prev = 0.0;  // H(x^k, x^{k-1}, mu_{k-1}) + kappa mu_{k-1}
  DVector d_cur;
  bool restart_pending = false;
  bool mu_ever_decreased = false;
};

/// sqrt(max{0, (1 - a r) r}) with r = mu_cur / mu_prev; r must be in (0, 1].
double beta_safe_cap(double mu_prev, double mu_cur, double a);

struct FistaUpdate {
  double t_new;
  double beta;
};

/// t_new = (1 + sqrt(1 + 4 (mu_prev/mu_cur) t_prev^2)) / 2,
/// beta = (t_prev - 1) / t_new.
FistaUpdate beta_fista(double t_prev, double mu_prev, double mu_cur);

enum class RestartMode { Fixed, Adaptive };

/// Fixed: k > 0 and k % period == 0.
/// Adaptive: <y_prev - x_cur, x_cur - x_prev> > 0.
bool restart_check(RestartMode mode, long period, long k, const Vector& y_prev,
                   const Vector& x_cur, const Vector& x_prev);

/// F~(x_next, mu_k) + tau * ||x_next - x_cur||^2 with
/// tau = L/(4 mu_k) + L beta^2 / (4 mu_next).
double monitor_value(double smoothed_objective, const Vector& x_next, const Vector& x_cur,
                     double mu_k, double beta, double mu_next, double L);

/// The problem a solve operates on. Holds references; the caller keeps the
/// pieces alive for the duration of the solve.
struct ProblemView {
  const SmoothingOracle& loss;
  const CappedL1Penalty& penalty;
  const BoxConstraint& box;
};

class SpgeSolver {
 public:
  SpgeSolver(ProblemView problem, SolverConfig config);

  /// Projects x0 onto the box and sets x^{-1} = x^0, mu_{-1} = mu_0.
  void reset(const Vector& x0);

  /// One iteration of the algorithm. Throws DivergenceError.
  IterationRecord step();

  /// True when maxiter, the mu threshold or the stall test fires.
  std::optional<TerminationReason> should_stop() const;

  const SolverState& state() const { return state_; }

  SolveResult run(const Vector& x0);

 private:
  double next_beta(double t_cur, double mu_cur, double mu_next, bool restart,
                   double* t_next) const;
  void check_finite(const Vector& v, const char* what) const;

  ProblemView problem_;
  SolverConfig config_;
  SolverState state_;
  double last_step_norm_ = 0.0;
  double prev_step_norm_ = 0.0;
};

SolveResult spge_solve(ProblemView problem, const Vector& x0, const SolverConfig& config);

/// spge_solve with beta_schedule forced to None.
SolveResult spg_solve(ProblemView problem, const Vector& x0, const SolverConfig& config);

}  // namespace spge
