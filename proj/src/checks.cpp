#include "spge/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "spge/diagnostics.hpp"
#include "spge/experiments.hpp"
#include "spge/rng.hpp"
#include "spge/smoothing.hpp"

namespace spge {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Keeps the k largest (violation, description) pairs.
class WorstCases {
 public:
  explicit WorstCases(std::size_t k) : k_(k) {}

  void offer(double violation, const std::string& what) {
    if (entries_.size() < k_ || violation > entries_.back().first) {
      entries_.emplace_back(violation, what);
      std::sort(entries_.begin(), entries_.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      if (entries_.size() > k_) entries_.pop_back();
    }
  }

  std::vector<std::string> descriptions() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.second);
    return out;
  }

 private:
  std::size_t k_;
  std::vector<std::pair<double, std::string>> entries_;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double piece_objective(double x, Piece d, double tau, double v, double w) {
  double pen = std::abs(x) / v;
  if (d == Piece::Rising) pen -= x / v - 1.0;
  if (d == Piece::Falling) pen -= -x / v - 1.0;
  return tau * pen + 0.5 * (x - w) * (x - w);
}

Piece random_piece(SplitMix64& rng) { return static_cast<Piece>(1 + rng.below(3)); }

}  // namespace

double prox_grid_scalar(double w, Piece d, double tau, double v, double lower, double upper,
                        double grid) {
  // The penalty slope never exceeds 2 tau / v, so the minimiser lies within
  // that distance of w.
  const double reach = 2.0 * tau / v + 10.0 * grid;
  const double a = std::clamp(w - reach, lower, upper);
  const double b = std::clamp(w + reach, lower, upper);
  auto f = [&](double x) { return piece_objective(x, d, tau, v, w); };
  if (!(b > a)) return a;

  const auto steps = static_cast<long>(std::ceil((b - a) / grid));
  long best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    const double x = std::min(a + static_cast<double>(i) * grid, b);
    const double val = f(x);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double lo = std::max(a, a + static_cast<double>(best - 1) * grid);
  double hi = std::min(b, a + static_cast<double>(best + 1) * grid);

  // Golden-section search; the objective is convex.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double x = 0.5 * (lo + hi);
  // The kink at zero and the bounds are exact candidates.
  for (double c : {0.0, lower, upper}) {
    if (c >= a && c <= b && f(c) <= f(x)) x = c;
  }
  return x;
}

CheckReport check_prox(std::size_t tuples, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "prox";
  report.tolerance = tol;
  SplitMix64 rng(seed);
  WorstCases worst(5);
  for (std::size_t t = 0; t < tuples; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(4));
    const double tau = rng.uniform(1e-3, 1.0);
    const double v = rng.uniform(0.2, 3.0);
    Vector lower(n), upper(n), w(n);
    DVector d(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      lower[i] = rng.uniform() < 0.1 ? -std::numeric_limits<double>::infinity()
                                     : -rng.uniform(0.0, 3.0);
      upper[i] = rng.uniform() < 0.1 ? std::numeric_limits<double>::infinity()
                                     : rng.uniform_open_zero() * 3.0;
      w[i] = rng.uniform(-4.0, 4.0);
      d[static_cast<std::size_t>(i)] = random_piece(rng);
    }
    const BoxConstraint box(lower, upper);
    const Vector closed = prox_capped_piece(w, d, tau, v, box);
    for (Index i = 0; i < n; ++i) {
      const Piece di = d[static_cast<std::size_t>(i)];
      const double ref = prox_grid_scalar(w[i], di, tau, v, lower[i], upper[i]);
      const double err = std::abs(closed[i] - ref);
      report.max_violation = std::max(report.max_violation, err);
      ++report.cases;
      worst.offer(err, fmt("w=%.6g d=%d tau=%.6g v=%.6g box=[%.4g,%.4g]: closed %.12g grid %.12g",
                           w[i], label_of(di), tau, v, lower[i], upper[i], closed[i], ref));
    }
  }
  report.passed = report.max_violation <= tol;
  report.worst = worst.descriptions();
  report.seconds = seconds_since(start);
  return report;
}

CheckReport check_grad(std::size_t points, std::uint64_t seed, double tol, double h,
                       double seam_margin) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "grad";
  report.tolerance = tol;
  SplitMix64 rng(seed);
  WorstCases worst(5);
  const Index m = 7;
  const Index n = 5;

  auto random_matrix = [&](Index rows, Index cols) {
    Matrix A(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) A(i, j) = rng.normal();
    return A;
  };
  auto random_vector = [&](Index k, double scale) {
    Vector x(k);
    for (Index i = 0; i < k; ++i) x[i] = scale * rng.normal();
    return x;
  };
  auto clear_of_seam = [&](double s, double mu) { return std::abs(std::abs(s) - mu) >= seam_margin; };

  for (int which = 0; which < 2; ++which) {
    const bool censored = which == 1;
    const Matrix A = random_matrix(m, n);
    const Vector b = censored ? random_vector(m, 1.0).cwiseAbs().eval() : random_vector(m, 1.0);
    const Vector c = random_vector(m, 0.5);
    std::size_t done = 0;
    std::size_t attempts = 0;
    while (done < points && attempts < 1000 * points) {
      ++attempts;
      const Vector x = random_vector(n, 0.7);
      const double mu = rng.uniform(0.05, 2.0);
      bool ok = true;
      for (Index i = 0; i < m && ok; ++i) {
        if (censored) {
          const double u = A.row(i).dot(x) - c[i];
          ok = clear_of_seam(u, mu) && clear_of_seam(plus_tilde(u, mu) - b[i], mu);
        } else {
          ok = clear_of_seam(A.row(i).dot(x) - b[i], mu);
        }
      }
      if (!ok) continue;
      auto value = [&](const Vector& z) {
        return censored ? censored_value_grad(A, b, c, z, mu).value
                        : l1_value_grad(A, b, z, mu).value;
      };
      const Vector g = censored ? censored_value_grad(A, b, c, x, mu).gradient
                                : l1_value_grad(A, b, x, mu).gradient;
      for (Index j = 0; j < n; ++j) {
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd = (value(xp) - value(xm)) / (2.0 * h);
        const double err = std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j]));
        report.max_violation = std::max(report.max_violation, err);
        worst.offer(err, fmt("%s mu=%.4g coord %ld: analytic %.12g fd %.12g",
                             censored ? "censored" : "l1", mu, static_cast<long>(j), g[j], fd));
      }
      ++done;
      ++report.cases;
    }
  }
  report.passed = report.max_violation <= tol && report.cases == 2 * points;
  report.worst = worst.descriptions();
  report.seconds = seconds_since(start);
  return report;
}

double max_monitor_increase(const std::vector<IterationRecord>& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    // A mu reset at a restart begins a new monitor chain.
    if (trace[i - 1].mu_next > trace[i - 1].mu) continue;
    worst = std::max(worst, trace[i].monitor - trace[i - 1].monitor);
  }
  return worst;
}

CheckReport check_monitor(Index m, Index n, Index s, int seeds, double tol) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "monitor";
  report.tolerance = tol;
  report.max_violation = -std::numeric_limits<double>::infinity();
  WorstCases worst(5);
  SolverConfig config = l1_regression_config();
  config.beta_schedule = BetaSchedule::SafeCapMax;
  for (int seed = 1; seed <= seeds; ++seed) {
    const ProblemInstance p = gen_l1_regression(m, n, s, static_cast<std::uint64_t>(seed));
    const SolveResult r = spge_solve(p, config);
    const double inc = max_monitor_increase(r.trace);
    report.max_violation = std::max(report.max_violation, inc);
    report.cases += r.trace.size();
    worst.offer(inc, fmt("seed %d: %ld iterations, max increase %.3g", seed, r.iterations, inc));
  }
  report.passed = report.max_violation <= tol;
  report.worst = worst.descriptions();
  report.seconds = seconds_since(start);
  return report;
}

std::vector<RatePoint> rate_profile(const ProblemInstance& instance, SolverConfig config,
                                    const std::vector<long>& Ks) {
  if (Ks.empty()) return {};
  config.maxiter = *std::max_element(Ks.begin(), Ks.end());
  config.record_residual = true;
  config.step_tol = 0.0;
  config.epsilon = std::min(config.epsilon, 1e-12);
  const auto loss = instance.make_loss();
  const SolveResult r = spge_solve(ProblemView{*loss, instance.penalty, instance.box},
                                   instance.x0, config);
  // r(x^0) at mu_0, then r(x^{k+1}) at mu_{k+1} from the trace.
  std::vector<double> res{proximal_residual(instance.box.project(instance.x0), config.mu0, *loss,
                                            instance.penalty, instance.box)};
  for (const auto& rec : r.trace) res.push_back(rec.residual);

  std::vector<RatePoint> out;
  for (long K : Ks) {
    const auto upto = static_cast<std::size_t>(std::min<long>(K, static_cast<long>(res.size()) - 1));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= upto; ++k) best = std::min(best, res[k] * res[k]);
    out.push_back({K, best, best * std::pow(static_cast<double>(K + 1), 1.0 - config.sigma)});
  }
  return out;
}

CheckReport check_rate(const std::vector<long>& Ks, double factor) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "rate";
  report.tolerance = factor;
  const ProblemInstance p = gen_l1_regression(60, 120, 12, 1);
  const std::vector<RatePoint> profile = rate_profile(p, l1_regression_config(), Ks);
  const double base = profile.front().scaled;
  double worst_ratio = 0.0;
  for (const RatePoint& pt : profile) {
    const double ratio = base > 0.0 ? pt.scaled / base : (pt.scaled > 0.0 ? INFINITY : 1.0);
    worst_ratio = std::max(worst_ratio, ratio);
    report.worst.push_back(fmt("K=%ld min r^2=%.6g scaled=%.6g ratio=%.4g", pt.K,
                               pt.min_residual_sq, pt.scaled, ratio));
  }
  report.cases = profile.size();
  report.max_violation = worst_ratio;
  report.passed = worst_ratio <= factor;
  report.seconds = seconds_since(start);
  return report;
}

CheckReport check_residual_scaling(std::size_t draws, std::uint64_t seed, double slack) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "residual-scaling";
  report.tolerance = slack;
  SplitMix64 rng(seed);
  WorstCases worst(5);
  std::vector<double> alphas;
  for (int i = 1; i <= 20; ++i) alphas.push_back(0.1 * i);
  for (std::size_t t = 0; t < draws; ++t) {
    const Index n = 6;
    Vector lower(n), upper(n), y(n), z(n);
    DVector d(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      lower[i] = -rng.uniform(0.0, 2.0);
      upper[i] = rng.uniform_open_zero() * 2.0;
      y[i] = rng.uniform(lower[i], upper[i]);
      z[i] = 2.0 * rng.normal();
      d[static_cast<std::size_t>(i)] = random_piece(rng);
    }
    const CappedL1Penalty penalty(rng.uniform(0.1, 2.0), rng.uniform(0.2, 2.0));
    const auto profile =
        residual_scaling_profile(y, z, d, penalty, BoxConstraint(lower, upper), alphas);
    for (std::size_t i = 1; i < profile.size(); ++i) {
      const double p_up = profile[i].p - profile[i - 1].p;
      const double q_down = profile[i - 1].q - profile[i].q;
      const double v = std::max(p_up, q_down);
      report.max_violation = std::max(report.max_violation, v);
      worst.offer(v, fmt("draw %zu alpha %.1f -> %.1f: dp=%.3g dq=%.3g", t, profile[i - 1].alpha,
                         profile[i].alpha, p_up, -q_down));
    }
    ++report.cases;
  }
  report.passed = report.max_violation <= slack;
  report.worst = worst.descriptions();
  report.seconds = seconds_since(start);
  return report;
}

bool traces_identical(const SolveResult& a, const SolveResult& b) {
  if (a.trace.size() != b.trace.size() || a.iterations != b.iterations ||
      a.termination != b.termination || a.x_final != b.x_final) {
    return false;
  }
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const IterationRecord& p = a.trace[i];
    const IterationRecord& q = b.trace[i];
    if (p.k != q.k || p.mu != q.mu || p.beta != q.beta || p.objective != q.objective ||
        p.smoothed_objective != q.smoothed_objective || p.monitor != q.monitor ||
        p.step_norm != q.step_norm || p.residual != q.residual || p.nnz != q.nnz ||
        p.mu_next != q.mu_next || p.mu_decreased != q.mu_decreased ||
        p.restarted != q.restarted) {
      return false;
    }
  }
  return true;
}

CheckReport check_spg_equivalence(int instances) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "spg-equivalence";
  for (int i = 0; i < instances; ++i) {
    ProblemInstance p;
    SolverConfig config;
    switch (i % 3) {
      case 0:
        p = gen_toy(toy_cases()[static_cast<std::size_t>(i) % toy_cases().size()].lambda,
                    toy_cases()[static_cast<std::size_t>(i) % toy_cases().size()].v);
        config = toy_config();
        break;
      case 1:
        p = gen_l1_regression(30, 60, 6, static_cast<std::uint64_t>(i + 1));
        config = l1_regression_config();
        config.maxiter = 2000;
        break;
      default:
        p = gen_censored(100, 30, 5, static_cast<std::uint64_t>(i + 1));
        config = censored_config();
        break;
    }
    config.record_residual = true;
    SolverConfig none = config;
    none.beta_schedule = BetaSchedule::None;
    const bool same = traces_identical(spge_solve(p, none), spg_solve(p, config));
    if (!same) {
      report.passed = false;
      report.max_violation = 1.0;
      report.worst.push_back(fmt("instance %d (%s) traces differ", i,
                                 std::string(to_string(p.kind)).c_str()));
    }
    ++report.cases;
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace spge
