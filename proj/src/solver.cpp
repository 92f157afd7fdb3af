#include "spge/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "spge/diagnostics.hpp"

namespace spge {

namespace {

constexpr double kDivergenceNorm = 1e12;

}  // namespace

std::string_view to_string(BetaSchedule s) {
  switch (s) {
    case BetaSchedule::None:
      return "none";
    case BetaSchedule::SafeCapMax:
      return "safe_cap_max";
    case BetaSchedule::FistaFixedRestart:
      return "fista_fixed_restart";
    case BetaSchedule::FistaAdaptiveRestart:
      return "fista_adaptive_restart";
  }
  return "unknown";
}

std::string_view to_string(TauConvention c) {
  return c == TauConvention::Provisional ? "provisional" : "posthoc";
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::MaxIter:
      return "maxiter";
    case TerminationReason::MuThreshold:
      return "mu_threshold";
    case TerminationReason::Stalled:
      return "stalled";
  }
  return "unknown";
}

BetaSchedule parse_beta_schedule(std::string_view s) {
  if (s == "none") return BetaSchedule::None;
  if (s == "safe_cap_max") return BetaSchedule::SafeCapMax;
  if (s == "fista_fixed_restart") return BetaSchedule::FistaFixedRestart;
  if (s == "fista_adaptive_restart") return BetaSchedule::FistaAdaptiveRestart;
  throw ConfigError("beta_schedule", "unknown schedule '" + std::string(s) + "'");
}

TauConvention parse_tau_convention(std::string_view s) {
  if (s == "provisional") return TauConvention::Provisional;
  if (s == "posthoc") return TauConvention::PostHoc;
  throw ConfigError("tau_convention", "unknown convention '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  auto positive = [](const char* field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ConfigError(field, "must be positive and finite");
    }
  };
  positive("L", L);
  positive("alpha", alpha);
  positive("mu0", mu0);
  positive("epsilon", epsilon);
  positive("kappa", kappa);
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma", "must lie in (0, 1)");
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("a", "must lie in (0, 1)");
  if (maxiter <= 0) throw ConfigError("maxiter", "must be a positive integer");
  if (beta_schedule == BetaSchedule::FistaFixedRestart && restart_period <= 0) {
    throw ConfigError("restart_period", "must be a positive integer");
  }
  if (!(step_tol >= 0.0) || !std::isfinite(step_tol)) {
    throw ConfigError("step_tol", "must be nonnegative and finite");
  }
}

double beta_safe_cap(double mu_prev, double mu_cur, double a) {
  if (!(mu_prev > 0.0) || !(mu_cur > 0.0)) {
    throw std::invalid_argument("beta_safe_cap: mu values must be positive");
  }
  const double r = mu_cur / mu_prev;
  if (r > 1.0) throw std::invalid_argument("beta_safe_cap: mu_cur / mu_prev exceeds 1");
  return std::sqrt(std::max(0.0, (1.0 - a * r) * r));
}

FistaUpdate beta_fista(double t_prev, double mu_prev, double mu_cur) {
  const double t_new =
      0.5 * (1.0 + std::sqrt(1.0 + 4.0 * (mu_prev / mu_cur) * t_prev * t_prev));
  return {t_new, (t_prev - 1.0) / t_new};
}

bool restart_check(RestartMode mode, long period, long k, const Vector& y_prev,
                   const Vector& x_cur, const Vector& x_prev) {
  if (mode == RestartMode::Fixed) return period > 0 && k > 0 && k % period == 0;
  if (y_prev.size() != x_cur.size() || x_cur.size() != x_prev.size()) {
    throw std::invalid_argument("restart_check: vectors differ in length");
  }
  return (y_prev - x_cur).dot(x_cur - x_prev) > 0.0;
}

double monitor_value(double smoothed_objective, const Vector& x_next, const Vector& x_cur,
                     double mu_k, double beta, double mu_next, double L) {
  const double tau = L / (4.0 * mu_k) + L * beta * beta / (4.0 * mu_next);
  return smoothed_objective + tau * (x_next - x_cur).squaredNorm();
}

SpgeSolver::SpgeSolver(ProblemView problem, SolverConfig config)
    : problem_(problem), config_(config) {
  config_.validate();
  if (problem_.loss.dim() != problem_.box.size()) {
    throw std::invalid_argument("solver: loss and box dimensions differ");
  }
}

void SpgeSolver::check_finite(const Vector& v, const char* what) const {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << "non-finite " << what << " at iteration " << state_.k << " (mu = " << state_.mu_cur
       << ", L = " << config_.L << ")";
    throw DivergenceError(os.str());
  }
}

void SpgeSolver::reset(const Vector& x0) {
  if (x0.size() != problem_.box.size()) {
    throw std::invalid_argument("solver: x0 has wrong length");
  }
  state_ = SolverState{};
  state_.x_cur = problem_.box.project(x0);
  state_.x_prev = state_.x_cur;
  state_.mu_prev = config_.mu0;
  state_.mu_cur = config_.mu0;
  // t_{-1} = 1 gives t_0 = (1 + sqrt 5)/2 and beta_{-1} = 0.
  state_.t_prev = beta_fista(1.0, 1.0, 1.0).t_new;
  state_.beta = 0.0;
  const double f0 = problem_.loss.value(state_.x_cur, config_.mu0) +
                    problem_.penalty.value(state_.x_cur);
  state_.monitor_prev = f0 + config_.kappa * config_.mu0;
  state_.d_cur = d_select(state_.x_cur, problem_.penalty.v());
  last_step_norm_ = 0.0;
  prev_step_norm_ = 0.0;
}

double SpgeSolver::next_beta(double t_cur, double mu_cur, double mu_next, bool restart,
                             double* t_next) const {
  switch (config_.beta_schedule) {
    case BetaSchedule::None:
      *t_next = t_cur;
      return 0.0;
    case BetaSchedule::SafeCapMax:
      *t_next = t_cur;
      return beta_safe_cap(mu_cur, mu_next, config_.a);
    case BetaSchedule::FistaFixedRestart:
    case BetaSchedule::FistaAdaptiveRestart: {
      const FistaUpdate u = beta_fista(restart ? 1.0 : t_cur, mu_cur, mu_next);
      *t_next = u.t_new;
      return std::min(u.beta, beta_safe_cap(mu_cur, mu_next, config_.a));
    }
  }
  *t_next = t_cur;
  return 0.0;
}

IterationRecord SpgeSolver::step() {
  const auto& loss = problem_.loss;
  const auto& penalty = problem_.penalty;
  const auto& box = problem_.box;
  const double L = config_.L;
  const double lambda = penalty.lambda();
  const double v = penalty.v();

  SolverState& s = state_;
  const long k = s.k;
  const double mu = s.mu_cur;
  const double beta = s.beta;

  s.d_cur = d_select(s.x_cur, v);
  const Vector y = s.x_cur + beta * (s.x_cur - s.x_prev);
  const ValueGrad at_y = loss.value_grad(y, mu);
  check_finite(at_y.gradient, "gradient");
  const Vector w = y - (mu / L) * at_y.gradient;
  Vector x_next = prox_capped_piece(w, s.d_cur, lambda * mu / L, v, box);
  check_finite(x_next, "iterate");
  if (x_next.norm() > kDivergenceNorm) {
    std::ostringstream os;
    os << "iterate norm exceeded " << kDivergenceNorm << " at iteration " << k;
    throw DivergenceError(os.str());
  }

  const double smoothed = loss.value(x_next, mu) + penalty.value(x_next);
  const double step_sq = (x_next - s.x_cur).squaredNorm();
  const double tau_prov = L / (4.0 * mu) + L * beta * beta / (4.0 * mu);

  bool restart_next = false;
  if (config_.beta_schedule == BetaSchedule::FistaFixedRestart) {
    restart_next = restart_check(RestartMode::Fixed, config_.restart_period, k + 1, y, x_next,
                                 s.x_cur);
  } else if (config_.beta_schedule == BetaSchedule::FistaAdaptiveRestart) {
    restart_next = restart_check(RestartMode::Adaptive, 0, k + 1, y, x_next, s.x_cur);
  }

  const double mu_decreased_value =
      config_.mu0 / std::pow(static_cast<double>(k + 1), config_.sigma);
  const double threshold = -config_.alpha * mu * mu;

  double mu_next = mu;
  double beta_next = 0.0;
  double t_next = s.t_prev;
  double H = 0.0;
  double tau_posthoc = 0.0;

  if (config_.tau_convention == TauConvention::Provisional) {
    H = smoothed + tau_prov * step_sq;
    const bool pass = H + config_.kappa * mu - s.monitor_prev <= threshold;
    mu_next = pass ? mu : std::min(mu, mu_decreased_value);
    beta_next = next_beta(s.t_prev, mu, mu_next, restart_next, &t_next);
    tau_posthoc = L / (4.0 * mu) + L * beta_next * beta_next / (4.0 * mu_next);
  } else {
    beta_next = next_beta(s.t_prev, mu, mu, restart_next, &t_next);
    tau_posthoc = L / (4.0 * mu) + L * beta_next * beta_next / (4.0 * mu);
    H = smoothed + tau_posthoc * step_sq;
    const bool pass = H + config_.kappa * mu - s.monitor_prev <= threshold;
    if (!pass) {
      mu_next = std::min(mu, mu_decreased_value);
      beta_next = next_beta(s.t_prev, mu, mu_next, restart_next, &t_next);
      tau_posthoc = L / (4.0 * mu) + L * beta_next * beta_next / (4.0 * mu_next);
      H = smoothed + tau_posthoc * step_sq;
    }
  }

  IterationRecord rec;
  rec.k = k;
  rec.mu = mu;
  rec.beta = beta;
  rec.objective = loss.exact_value(x_next) + penalty.value(x_next);
  rec.smoothed_objective = smoothed;
  rec.monitor = H + config_.kappa * mu;
  rec.step_norm = std::sqrt(step_sq);
  rec.nnz = support_size(x_next);
  rec.tau_provisional = tau_prov;
  rec.tau_posthoc = tau_posthoc;
  rec.restarted = s.restart_pending;
  rec.mu_decreased = mu_next < mu;

  double monitor_next = rec.monitor;
  const bool reset_mu =
      restart_next &&
      ((config_.beta_schedule == BetaSchedule::FistaFixedRestart &&
        config_.reset_mu_on_fixed_restart) ||
       (config_.beta_schedule == BetaSchedule::FistaAdaptiveRestart &&
        config_.reset_mu_on_adaptive_restart));
  if (reset_mu) {
    // Restart from x^{k+1} as a fresh start: mu back to mu_0, monitor chain
    // begins again with a zero step term.
    mu_next = config_.mu0;
    monitor_next =
        loss.value(x_next, mu_next) + penalty.value(x_next) + config_.kappa * mu_next;
  }
  rec.mu_next = mu_next;
  if (mu_next < mu) s.mu_ever_decreased = true;

  prev_step_norm_ = last_step_norm_;
  last_step_norm_ = rec.step_norm;
  s.x_prev = std::move(s.x_cur);
  s.x_cur = std::move(x_next);
  s.mu_prev = mu;
  s.mu_cur = mu_next;
  s.t_prev = t_next;
  s.beta = beta_next;
  s.monitor_prev = monitor_next;
  s.restart_pending = restart_next;
  s.k = k + 1;

  if (config_.record_residual) {
    rec.residual = proximal_residual(s.x_cur, s.mu_cur, loss, penalty, box);
  }
  return rec;
}

std::optional<TerminationReason> SpgeSolver::should_stop() const {
  if (state_.mu_cur <= config_.epsilon) return TerminationReason::MuThreshold;
  if (state_.k >= config_.maxiter) return TerminationReason::MaxIter;
  if (state_.k >= 2 && config_.step_tol > 0.0 &&
      last_step_norm_ + prev_step_norm_ <=
          config_.step_tol * std::max(1.0, state_.x_cur.norm())) {
    return TerminationReason::Stalled;
  }
  return std::nullopt;
}

SolveResult SpgeSolver::run(const Vector& x0) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  reset(x0);
  SolveResult result;
  if (config_.record_iterates) result.iterates.push_back(state_.x_cur);
  std::optional<TerminationReason> stop = should_stop();
  while (!stop) {
    IterationRecord rec = step();
    if (config_.record_time) {
      rec.time_s = std::chrono::duration<double>(Clock::now() - start).count();
    }
    result.trace.push_back(rec);
    if (config_.record_iterates) result.iterates.push_back(state_.x_cur);
    stop = should_stop();
  }
  result.termination = *stop;
  result.iterations = state_.k;
  result.x_final = state_.x_cur;
  result.wall_time_s =
      config_.record_time ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;
  return result;
}

SolveResult spge_solve(ProblemView problem, const Vector& x0, const SolverConfig& config) {
  SpgeSolver solver(problem, config);
  return solver.run(x0);
}

SolveResult spg_solve(ProblemView problem, const Vector& x0, const SolverConfig& config) {
  SolverConfig plain = config;
  plain.beta_schedule = BetaSchedule::None;
  return spge_solve(problem, x0, plain);
}

}  // namespace spge
