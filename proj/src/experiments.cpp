#include "spge/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include "spge/diagnostics.hpp"

namespace spge {

namespace {

SolverConfig base_config() {
  SolverConfig c;
  c.alpha = 1.0;
  c.sigma = 0.9;
  c.kappa = 0.5;
  c.maxiter = 10000;
  c.a = 1e-4;
  c.beta_schedule = BetaSchedule::FistaFixedRestart;
  c.restart_period = 500;
  c.step_tol = kPresetStepTol;
  c.record_residual = false;
  c.record_time = false;
  return c;
}

}  // namespace

SolverConfig toy_config() {
  SolverConfig c = base_config();
  c.L = std::sqrt(2.0);
  c.mu0 = 0.1;
  c.epsilon = 1e-3;
  return c;
}

SolverConfig l1_regression_config() {
  SolverConfig c = base_config();
  c.L = 2.0;
  c.mu0 = 50.0;
  c.epsilon = 1e-3;
  return c;
}

SolverConfig censored_config() {
  SolverConfig c = base_config();
  c.L = 1.5;
  c.mu0 = 1.0;
  c.epsilon = 0.01;
  return c;
}

const std::vector<ToyCase>& toy_cases() {
  static const std::vector<ToyCase> cases = {
      {0.7, 0.4}, {0.8, 0.5}, {0.9, 0.6}, {1.0, 0.7}, {1.0, 0.5},
      {1.0, 0.3}, {1.2, 0.8}, {1.3, 0.9}, {1.4, 1.0},
  };
  return cases;
}

std::vector<Vector> toy_global_minimizers(double lambda) {
  // Candidates: (0,0) with value 1, (1,0) and (0,1) with value lambda.
  // Two nonzeros cost at least 2 lambda, which never wins for lambda > 0.
  const Vector zero = Vector::Zero(2);
  Vector e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  if (lambda < 1.0) return {e1, e2};
  if (lambda > 1.0) return {zero};
  return {zero, e1, e2};
}

bool is_toy_global(const Vector& x, double lambda, double tol) {
  for (const Vector& g : toy_global_minimizers(lambda)) {
    if ((x - g).lpNorm<Eigen::Infinity>() <= tol) return true;
  }
  return false;
}

const std::vector<ProblemSize>& l1_regression_sizes() {
  static const std::vector<ProblemSize> sizes = {{60, 120, 12}, {80, 160, 16}, {100, 200, 20}};
  return sizes;
}

const std::vector<ProblemSize>& censored_sizes() {
  static const std::vector<ProblemSize> sizes = {
      {500, 100, 20}, {1000, 200, 40}, {2000, 400, 80}};
  return sizes;
}

std::vector<double> lambda0_grid(bool full) {
  if (!full) return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1};
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(0.001 * i);
  return grid;
}

std::string_view to_string(Algorithm a) { return a == Algorithm::Spg ? "spg" : "spge"; }

Outcome run_outcome(const ProblemInstance& instance, Algorithm algorithm,
                    const SolverConfig& config) {
  const SolveResult r = algorithm == Algorithm::Spg ? spg_solve(instance, config)
                                                    : spge_solve(instance, config);
  const RecoveryMetrics metrics = recovery_metrics(r.x_final, instance.x_true, r.trace);
  Outcome o;
  o.algorithm = algorithm;
  o.seed = instance.seed;
  o.m = instance.m();
  o.n = instance.n();
  o.s = instance.x_true ? support_size(*instance.x_true) : 0;
  o.iterations = r.iterations;
  o.time_s = r.wall_time_s;
  o.termination = r.termination;
  o.objective = instance.objective(r.x_final);
  o.v = instance.penalty.v();
  o.rel_err = metrics.rel_err;
  o.success_rate = metrics.success_rate;
  o.sparsity_rate = metrics.sparsity_rate;
  o.support = metrics.support_size;
  o.x_final = r.x_final;
  return o;
}

std::vector<ToyRow> run_toy_study(int repeats, bool timing) {
  SolverConfig config = toy_config();
  config.record_time = timing;
  const int reps = timing ? std::max(repeats, 1) : 1;
  std::vector<ToyRow> rows;
  for (const ToyCase& tc : toy_cases()) {
    const ProblemInstance p = gen_toy(tc.lambda, tc.v);
    ToyRow row;
    row.params = tc;
    std::vector<double> t_spg, t_spge;
    for (int r = 0; r < reps; ++r) {
      const SolveResult a = spg_solve(p, config);
      const SolveResult b = spge_solve(p, config);
      t_spg.push_back(a.wall_time_s);
      t_spge.push_back(b.wall_time_s);
      row.spg_x = a.x_final;
      row.spge_x = b.x_final;
      row.spg_iterations = a.iterations;
      row.spge_iterations = b.iterations;
    }
    row.spg_time_s = median(t_spg);
    row.spge_time_s = median(t_spge);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Outcome> run_l1_study(const std::vector<ProblemSize>& sizes, int seeds, bool timing) {
  SolverConfig config = l1_regression_config();
  config.record_time = timing;
  std::vector<Outcome> out;
  for (const ProblemSize& sz : sizes) {
    for (int seed = 1; seed <= seeds; ++seed) {
      const ProblemInstance p = gen_l1_regression(sz.m, sz.n, sz.s, static_cast<std::uint64_t>(seed));
      out.push_back(run_outcome(p, Algorithm::Spg, config));
      out.push_back(run_outcome(p, Algorithm::Spge, config));
    }
  }
  return out;
}

std::vector<Outcome> run_censored_study(const std::vector<ProblemSize>& sizes,
                                        const std::vector<double>& lambda0s, int seeds,
                                        bool timing) {
  SolverConfig config = censored_config();
  config.record_time = timing;
  std::vector<Outcome> out;
  for (const ProblemSize& sz : sizes) {
    for (double lambda0 : lambda0s) {
      CensoredOptions options;
      options.lambda0 = lambda0;
      for (int seed = 1; seed <= seeds; ++seed) {
        const ProblemInstance p =
            gen_censored(sz.m, sz.n, sz.s, static_cast<std::uint64_t>(seed), options);
        for (Algorithm alg : {Algorithm::Spg, Algorithm::Spge}) {
          Outcome o = run_outcome(p, alg, config);
          o.lambda0 = lambda0;
          out.push_back(std::move(o));
        }
      }
    }
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<CellSummary> summarize(const std::vector<Outcome>& outcomes) {
  using Key = std::tuple<Index, Index, Index, double, int>;
  std::map<Key, std::vector<const Outcome*>> cells;
  std::vector<Key> order;
  for (const Outcome& o : outcomes) {
    const Key key{o.m, o.n, o.s, o.lambda0, o.algorithm == Algorithm::Spg ? 0 : 1};
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&o);
  }
  std::vector<CellSummary> out;
  for (const Key& key : order) {
    const auto& group = cells[key];
    CellSummary c;
    c.algorithm = std::get<4>(key) == 0 ? Algorithm::Spg : Algorithm::Spge;
    c.size = {std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    c.lambda0 = std::get<3>(key);
    c.runs = static_cast<int>(group.size());
    std::vector<double> times, rel, suc, spa, sup, iters;
    for (const Outcome* o : group) {
      times.push_back(o->time_s);
      iters.push_back(static_cast<double>(o->iterations));
      sup.push_back(static_cast<double>(o->support));
      if (o->rel_err) rel.push_back(*o->rel_err);
      if (o->success_rate) suc.push_back(*o->success_rate);
      if (o->sparsity_rate) spa.push_back(*o->sparsity_rate);
    }
    auto mean = [](const std::vector<double>& v) {
      if (v.empty()) return 0.0;
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    c.mean_iterations = mean(iters);
    c.median_time_s = median(times);
    c.mean_rel_err = mean(rel);
    c.median_rel_err = median(rel);
    c.mean_success = mean(suc);
    c.median_success = median(suc);
    c.mean_sparsity = mean(spa);
    c.mean_support = mean(sup);
    c.median_support = median(sup);
    out.push_back(c);
  }
  return out;
}

}  // namespace spge
