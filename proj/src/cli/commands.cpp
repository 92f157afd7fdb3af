#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spge/checks.hpp"
#include "spge/cli.hpp"
#include "spge/diagnostics.hpp"

namespace spge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string point(const Vector& x) {
  std::string s = "(";
  for (Index i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += short_num(std::abs(x[i]) < 5e-13 ? 0.0 : x[i], 4);
  }
  return s + ")";
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string optional_csv(const std::optional<double>& v) { return v ? num(*v) : ""; }

ProblemInstance build_instance(const RunConfig& rc, std::uint64_t seed) {
  if (rc.instance_path) return load_instance(*rc.instance_path);
  switch (rc.kind) {
    case LossKind::ToyAbs:
      return gen_toy(rc.lambda, rc.v);
    case LossKind::L1Regression:
      return gen_l1_regression(rc.m, rc.n, rc.s, seed, rc.l1);
    case LossKind::CensoredRegression:
      return gen_censored(rc.m, rc.n, rc.s, seed, rc.censored);
  }
  throw std::logic_error("unreachable");
}

struct SolveSummary {
  std::uint64_t seed;
  Algorithm algorithm;
  SolveResult result;
  double objective;
  double residual;
  double gap;
  RecoveryMetrics metrics;
  bool lower_bound_ok;
};

}  // namespace

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols{"k",         "mu",       "beta",
                                             "objective", "smoothed_objective",
                                             "monitor",   "step_norm", "residual",
                                             "nnz",       "time_s"};
  return cols;
}

std::string trace_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const IterationRecord& r : trace) {
    os << r.k << ',' << num(r.mu) << ',' << num(r.beta) << ',' << num(r.objective) << ','
       << num(r.smoothed_objective) << ',' << num(r.monitor) << ',' << num(r.step_norm) << ','
       << num(r.residual) << ',' << r.nnz << ',' << num(r.time_s) << '\n';
  }
  return os.str();
}

std::string trace_json(const std::vector<IterationRecord>& trace) {
  json rows = json::array();
  for (const IterationRecord& r : trace) {
    rows.push_back({{"k", r.k},
                    {"mu", r.mu},
                    {"beta", r.beta},
                    {"objective", r.objective},
                    {"smoothed_objective", r.smoothed_objective},
                    {"monitor", r.monitor},
                    {"step_norm", r.step_norm},
                    {"residual", r.residual},
                    {"nnz", r.nnz},
                    {"time_s", r.time_s}});
  }
  return rows.dump(1) + "\n";
}

int cmd_solve(const fs::path& config_path, std::ostream& out, std::ostream& err,
              const std::optional<fs::path>& out_dir) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const fs::path dir = resolve_output_dir(out_dir, rc.output_dir);

  std::vector<Algorithm> algorithms;
  if (rc.algorithm != AlgorithmChoice::Spge) algorithms.push_back(Algorithm::Spg);
  if (rc.algorithm != AlgorithmChoice::Spg) algorithms.push_back(Algorithm::Spge);
  const bool seeded = !rc.instance_path && rc.kind != LossKind::ToyAbs;
  const std::vector<std::uint64_t> seeds = seeded ? rc.seeds : std::vector<std::uint64_t>{0};

  std::vector<SolveSummary> summaries;
  try {
    for (std::uint64_t seed : seeds) {
      ProblemInstance p;
      try {
        p = build_instance(rc, seed);
      } catch (const ParseError& e) {
        err << "config error: instance: " << e.what() << '\n';
        return kExitConfig;
      } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
      }
      const auto loss = p.make_loss();
      const ProblemView view{*loss, p.penalty, p.box};
      for (Algorithm alg : algorithms) {
        SolveResult r = alg == Algorithm::Spg ? spg_solve(view, p.x0, rc.solver)
                                              : spge_solve(view, p.x0, rc.solver);
        const double mu_end = r.trace.empty() ? rc.solver.mu0 : r.trace.back().mu_next;
        SolveSummary s{seed,
                       alg,
                       std::move(r),
                       0.0,
                       0.0,
                       0.0,
                       {},
                       true};
        s.objective = p.objective(s.result.x_final);
        s.residual = proximal_residual(s.result.x_final, mu_end, *loss, p.penalty, p.box);
        s.gap = lifted_stationarity_gap(s.result.x_final, *loss, p.penalty, p.box);
        s.metrics = recovery_metrics(s.result.x_final, p.x_true, s.result.trace);
        s.lower_bound_ok = lower_bound_check(s.result.x_final, p.penalty.v(), 1e-3).ok;
        summaries.push_back(std::move(s));
      }
    }
  } catch (const DivergenceError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }

  try {
    const std::string ext = rc.format == ReportFormat::Csv ? ".csv" : ".json";
    json summary_json = json::array();
    std::ostringstream summary_csv;
    summary_csv << "seed,algorithm,termination,iterations,objective,residual,stationarity_gap,"
                   "rel_err,success_rate,sparsity_rate,support,lower_bound_ok\n";
    for (const SolveSummary& s : summaries) {
      const std::string stem =
          rc.name + "_seed" + std::to_string(s.seed) + "_" + std::string(to_string(s.algorithm));
      write_file(dir / (stem + "_trace" + ext), rc.format == ReportFormat::Csv
                                                   ? trace_csv(s.result.trace)
                                                   : trace_json(s.result.trace));
      std::vector<double> x(s.result.x_final.data(),
                            s.result.x_final.data() + s.result.x_final.size());
      summary_json.push_back({{"seed", s.seed},
                              {"algorithm", to_string(s.algorithm)},
                              {"termination", to_string(s.result.termination)},
                              {"iterations", s.result.iterations},
                              {"objective", s.objective},
                              {"residual", s.residual},
                              {"stationarity_gap", s.gap},
                              {"rel_err", optional_json(s.metrics.rel_err)},
                              {"success_rate", optional_json(s.metrics.success_rate)},
                              {"sparsity_rate", optional_json(s.metrics.sparsity_rate)},
                              {"support", s.metrics.support_size},
                              {"lower_bound_ok", s.lower_bound_ok},
                              {"x_final", x}});
      summary_csv << s.seed << ',' << to_string(s.algorithm) << ','
                  << to_string(s.result.termination) << ',' << s.result.iterations << ','
                  << num(s.objective) << ',' << num(s.residual) << ',' << num(s.gap) << ','
                  << optional_csv(s.metrics.rel_err) << ','
                  << optional_csv(s.metrics.success_rate) << ','
                  << optional_csv(s.metrics.sparsity_rate) << ',' << s.metrics.support_size << ','
                  << (s.lower_bound_ok ? "true" : "false") << '\n';

      out << to_string(s.algorithm) << " seed " << s.seed << ": " << to_string(s.result.termination)
          << " after " << s.result.iterations << " iterations, objective "
          << short_num(s.objective, 8);
      if (s.result.x_final.size() <= 10) out << ", x = " << point(s.result.x_final);
      out << ", nnz " << s.metrics.support_size;
      if (s.metrics.rel_err) out << ", rel-err " << short_num(*s.metrics.rel_err);
      out << '\n';
    }
    write_file(dir / (rc.name + "_summary" + ext), rc.format == ReportFormat::Csv
                                                      ? summary_csv.str()
                                                      : summary_json.dump(1) + "\n");
    out << "wrote " << (dir / (rc.name + "_summary" + ext)).string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

namespace {

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

int reproduce_toy(const ReproduceOptions& o, const fs::path& dir, std::ostream& out) {
  const std::vector<ToyRow> rows = run_toy_study(o.repeats, o.timing);
  std::ostringstream csv;
  csv << "lambda,v,global_minimizers,spg_x1,spg_x2,spge_x1,spge_x2,spg_global,spge_global,"
         "spg_iter,spge_iter,spg_time_s,spge_time_s\n";
  out << pad("lambda", 8) << pad("v", 6) << pad("GM", 20) << pad("SPG x", 18) << pad("SPGE x", 18)
      << pad("iter", 10) << "time (SPG/SPGE)\n";
  for (const ToyRow& r : rows) {
    std::string gm;
    for (const Vector& g : toy_global_minimizers(r.params.lambda)) gm += point(g);
    const bool spg_global = is_toy_global(r.spg_x, r.params.lambda, 1e-4);
    const bool spge_global = is_toy_global(r.spge_x, r.params.lambda, 1e-4);
    csv << num(r.params.lambda) << ',' << num(r.params.v) << ',' << '"' << gm << '"' << ','
        << num(r.spg_x[0]) << ',' << num(r.spg_x[1]) << ',' << num(r.spge_x[0]) << ','
        << num(r.spge_x[1]) << ',' << spg_global << ',' << spge_global << ','
        << r.spg_iterations << ',' << r.spge_iterations << ',' << num(r.spg_time_s) << ','
        << num(r.spge_time_s) << '\n';
    out << pad(short_num(r.params.lambda), 8) << pad(short_num(r.params.v), 6) << pad(gm, 20)
        << pad(point(r.spg_x), 18) << pad(point(r.spge_x), 18)
        << pad(std::to_string(r.spg_iterations) + "/" + std::to_string(r.spge_iterations), 10)
        << short_num(r.spg_time_s) << "/" << short_num(r.spge_time_s) << '\n';
  }
  write_file(dir / "table1.csv", csv.str());
  out << "wrote " << (dir / "table1.csv").string() << '\n';
  return kExitOk;
}

void write_outcomes(const std::vector<Outcome>& outcomes, const fs::path& path) {
  std::ostringstream csv;
  csv << "m,n,s,lambda0,seed,algorithm,termination,iterations,time_s,objective,v,rel_err,"
         "success_rate,sparsity_rate,support,lower_bound_ok\n";
  for (const Outcome& o : outcomes) {
    csv << o.m << ',' << o.n << ',' << o.s << ',' << num(o.lambda0) << ',' << o.seed << ','
        << to_string(o.algorithm) << ',' << to_string(o.termination) << ',' << o.iterations << ','
        << num(o.time_s) << ',' << num(o.objective) << ',' << num(o.v) << ','
        << optional_csv(o.rel_err) << ',' << optional_csv(o.success_rate) << ','
        << optional_csv(o.sparsity_rate) << ',' << o.support << ','
        << (lower_bound_check(o.x_final, o.v, 1e-3).ok ? "true" : "false") << '\n';
  }
  write_file(path, csv.str());
}

void write_summary(const std::vector<CellSummary>& cells, const fs::path& path, std::ostream& out,
                   bool with_lambda0) {
  std::ostringstream csv;
  csv << "m,n,s,lambda0,algorithm,runs,mean_iterations,median_time_s,mean_rel_err,"
         "median_rel_err,mean_success,median_success,mean_sparsity,mean_support,median_support\n";
  out << pad("m", 6) << pad("n", 6) << pad("s", 5);
  if (with_lambda0) out << pad("lambda0", 9);
  out << pad("alg", 6) << pad("iter", 9) << pad("time", 10) << pad("rel-err", 11)
      << pad("suc-rat", 9) << pad("spa-rat", 9) << "support\n";
  for (const CellSummary& c : cells) {
    csv << c.size.m << ',' << c.size.n << ',' << c.size.s << ',' << num(c.lambda0) << ','
        << to_string(c.algorithm) << ',' << c.runs << ',' << num(c.mean_iterations) << ','
        << num(c.median_time_s) << ',' << num(c.mean_rel_err) << ',' << num(c.median_rel_err)
        << ',' << num(c.mean_success) << ',' << num(c.median_success) << ','
        << num(c.mean_sparsity) << ',' << num(c.mean_support) << ',' << num(c.median_support)
        << '\n';
    out << pad(std::to_string(c.size.m), 6) << pad(std::to_string(c.size.n), 6)
        << pad(std::to_string(c.size.s), 5);
    if (with_lambda0) out << pad(short_num(c.lambda0, 3), 9);
    out << pad(std::string(to_string(c.algorithm)), 6) << pad(short_num(c.mean_iterations, 5), 9)
        << pad(short_num(c.median_time_s, 3), 10) << pad(short_num(c.mean_rel_err, 3), 11)
        << pad(short_num(c.mean_success, 3), 9) << pad(short_num(c.mean_sparsity, 3), 9)
        << short_num(c.mean_support, 4) << '\n';
  }
  write_file(path, csv.str());
}

/// ||x^k - x*|| and |F(x^k) - F(x*)| along one run, x* = x_true.
void write_curves(const ProblemInstance& p, const SolverConfig& base, const fs::path& path) {
  std::ostringstream csv;
  csv << "algorithm,k,dist_to_truth,objective_gap\n";
  const double f_star = p.objective(*p.x_true);
  for (Algorithm alg : {Algorithm::Spg, Algorithm::Spge}) {
    SolverConfig c = base;
    c.record_iterates = true;
    c.record_time = false;
    const SolveResult r = alg == Algorithm::Spg ? spg_solve(p, c) : spge_solve(p, c);
    for (std::size_t k = 0; k < r.iterates.size(); ++k) {
      const Vector& x = r.iterates[k];
      csv << to_string(alg) << ',' << k << ',' << num((x - *p.x_true).norm()) << ','
          << num(std::abs(p.objective(x) - f_star)) << '\n';
    }
  }
  write_file(path, csv.str());
}

int reproduce_l1(const ReproduceOptions& o, const fs::path& dir, std::ostream& out) {
  const std::vector<Outcome> outcomes = run_l1_study(l1_regression_sizes(), o.seeds, o.timing);
  write_outcomes(outcomes, dir / "table2_runs.csv");
  write_summary(summarize(outcomes), dir / "table2.csv", out, false);
  for (const ProblemSize& sz : l1_regression_sizes()) {
    const ProblemInstance p = gen_l1_regression(sz.m, sz.n, sz.s, 1);
    write_curves(p, l1_regression_config(),
                 dir / ("curves_l1_" + std::to_string(sz.m) + "x" + std::to_string(sz.n) + ".csv"));
  }
  out << "wrote " << (dir / "table2.csv").string() << '\n';
  return kExitOk;
}

int reproduce_censored(const ReproduceOptions& o, const fs::path& dir, std::ostream& out) {
  const std::vector<Outcome> outcomes =
      run_censored_study(censored_sizes(), lambda0_grid(o.full_grid), o.seeds, o.timing);
  write_outcomes(outcomes, dir / "table3_runs.csv");
  const std::vector<CellSummary> cells = summarize(outcomes);
  out << "all lambda0 values:\n";
  write_summary(cells, dir / "table3_grid.csv", out, true);

  // Per size and algorithm, the lambda0 with the smallest median rel-err.
  std::vector<CellSummary> best;
  for (const CellSummary& c : cells) {
    auto it = std::find_if(best.begin(), best.end(), [&](const CellSummary& b) {
      return b.size.m == c.size.m && b.size.n == c.size.n && b.algorithm == c.algorithm;
    });
    if (it == best.end()) {
      best.push_back(c);
    } else if (c.median_rel_err < it->median_rel_err) {
      *it = c;
    }
  }
  out << "selected lambda0 per row:\n";
  write_summary(best, dir / "table3.csv", out, true);
  const ProblemSize& sz = censored_sizes().front();
  CensoredOptions opt;
  opt.lambda0 = best.front().lambda0;
  write_curves(gen_censored(sz.m, sz.n, sz.s, 1, opt), censored_config(),
               dir / ("curves_censored_" + std::to_string(sz.m) + "x" + std::to_string(sz.n) + ".csv"));
  out << "wrote " << (dir / "table3.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int cmd_reproduce(int example, const ReproduceOptions& options, std::ostream& out,
                  std::ostream& err) {
  if (example < 1 || example > 3) {
    err << "config error: example must be 1, 2 or 3\n";
    return kExitConfig;
  }
  if (options.seeds < 1 || options.repeats < 1) {
    err << "config error: seeds and repeats must be positive\n";
    return kExitConfig;
  }
  const fs::path dir = resolve_output_dir(options.out_dir, "spge-out") /
                       ("example" + std::to_string(example));
  try {
    if (example == 1) return reproduce_toy(options, dir, out);
    if (example == 2) return reproduce_l1(options, dir, out);
    return reproduce_censored(options, dir, out);
  } catch (const DivergenceError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_check(std::string_view suite, std::ostream& out, std::ostream& err) {
  CheckReport r;
  if (suite == "prox") {
    r = check_prox();
  } else if (suite == "grad") {
    r = check_grad();
  } else if (suite == "monitor") {
    r = check_monitor();
  } else if (suite == "rate") {
    r = check_rate();
  } else {
    err << "config error: unknown suite '" << suite << "' (prox, grad, monitor, rate)\n";
    return kExitConfig;
  }
  out << r.suite << ": " << (r.passed ? "PASS" : "FAIL") << "  max violation "
      << short_num(r.max_violation, 6) << " (tolerance " << short_num(r.tolerance, 3) << "), "
      << r.cases << " cases, " << short_num(r.seconds, 3) << " s\n";
  std::ostream& detail = r.passed ? out : err;
  for (const std::string& w : r.worst) detail << "  " << w << '\n';
  return r.passed ? kExitOk : kExitNumeric;
}

int cmd_gen(std::string_view kind, const GenOptions& o, const fs::path& out_file,
            std::ostream& out, std::ostream& err) {
  ProblemInstance p;
  try {
    const LossKind k = parse_loss_kind(kind == "l1" ? "l1_regression" : kind);
    auto reject = [&](bool present, const char* name) {
      if (present) throw ConfigError(name, "not applicable to " + std::string(to_string(k)));
    };
    switch (k) {
      case LossKind::ToyAbs:
        reject(o.size_given, "m/n/s/seed");
        reject(o.lambda0.has_value(), "lambda0");
        reject(o.noise_std.has_value(), "noise_std");
        reject(o.censor_level.has_value(), "censor_level");
        p = gen_toy(o.lambda.value_or(1.0), o.v.value_or(0.5));
        break;
      case LossKind::L1Regression: {
        reject(o.v.has_value(), "v");
        reject(o.lambda0.has_value(), "lambda0");
        reject(o.censor_level.has_value(), "censor_level");
        L1RegressionOptions opt;
        if (o.lambda) opt.lambda = *o.lambda;
        if (o.noise_std) opt.noise_std = *o.noise_std;
        p = gen_l1_regression(o.m, o.n, o.s, o.seed, opt);
        break;
      }
      case LossKind::CensoredRegression: {
        reject(o.v.has_value(), "v");
        reject(o.lambda.has_value(), "lambda");
        CensoredOptions opt;
        if (o.lambda0) opt.lambda0 = *o.lambda0;
        if (o.noise_std) opt.noise_std = *o.noise_std;
        if (o.censor_level) opt.censor_level = *o.censor_level;
        p = gen_censored(o.m, o.n, o.s, o.seed, opt);
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    save_instance(p, out_file);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  out << "wrote " << to_string(p.kind) << " instance (m=" << p.m() << ", n=" << p.n()
      << ") to " << out_file.string() << '\n';
  return kExitOk;
}

}  // namespace spge::cli
