// Acceptance run: one PASS/FAIL line per criterion.
//
//   spge_acceptance [--seeds N] [--expect-fail 4,5]
//
// Exit status is 0 when the failing criteria are exactly the ones listed
// in --expect-fail (default: none), 1 otherwise.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spge/checks.hpp"
#include "spge/diagnostics.hpp"
#include "spge/experiments.hpp"
#include "spge/problems.hpp"

using namespace spge;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// SPGE outputs from criteria 4-6 that stopped on mu or stall, for criterion 8
struct Converged {
  std::string where;
  Vector x;
  double v;
};
std::vector<Converged> g_converged;

void keep_if_converged(const std::string& where, TerminationReason t, const Vector& x,
                       double v) {
  if (t != TerminationReason::MaxIter) g_converged.push_back({where, x, v});
}

Verdict suite_verdict(const CheckReport& r, double time_limit) {
  Verdict v;
  v.pass = r.passed && (time_limit <= 0 || r.seconds < time_limit);
  v.detail = fmt("max %.3g (tol %.0e) over %zu cases, %.2f s", r.max_violation, r.tolerance,
                 r.cases, r.seconds);
  if (time_limit > 0) v.detail += fmt(" (limit %.0f s)", time_limit);
  return v;
}

Verdict criterion_1() { return suite_verdict(check_prox(10000, 1, 1e-6), 10.0); }

Verdict criterion_2() { return suite_verdict(check_grad(1000, 2, 1e-5, 1e-6, 1e-3), 10.0); }

Verdict criterion_3() { return suite_verdict(check_monitor(60, 120, 12, 5, 1e-10), 0.0); }

Verdict criterion_4() {
  const double tol = 1e-4;
  const SolverConfig cfg = toy_config();
  std::ostringstream bad;
  long max_iters = 0;
  auto near = [&](const Vector& x, double a, double b) {
    return std::abs(x[0] - a) <= tol && std::abs(x[1] - b) <= tol;
  };
  auto show = [](const Vector& x) { return fmt("(%.4g,%.4g)", x[0], x[1]); };
  struct Case {
    double lambda, v;
    bool zero;
  };
  for (const Case c : {Case{1.2, 0.8, true}, Case{1.3, 0.9, true}, Case{1.4, 1.0, true},
                       Case{0.7, 0.4, false}, Case{0.8, 0.5, false}, Case{0.9, 0.6, false}}) {
    const SolveResult r = spge_solve(gen_toy(c.lambda, c.v), cfg);
    keep_if_converged(fmt("toy %.1f/%.1f", c.lambda, c.v), r.termination, r.x_final, c.v);
    max_iters = std::max(max_iters, r.iterations);
    const bool ok = c.zero ? near(r.x_final, 0, 0)
                           : near(r.x_final, 1, 0) || near(r.x_final, 0, 1);
    if (!ok) bad << " " << c.lambda << "/" << c.v << "->" << show(r.x_final);
    if (r.iterations > 50) bad << " " << c.lambda << "/" << c.v << " iters=" << r.iterations;
  }
  const ProblemInstance p = gen_toy(1.0, 0.3);
  const SolveResult spg = spg_solve(p, cfg);
  const SolveResult spge = spge_solve(p, cfg);
  keep_if_converged("toy 1.0/0.3", spge.termination, spge.x_final, 0.3);
  if (is_toy_global(spg.x_final, 1.0, tol)) bad << " spg(1,0.3) global " << show(spg.x_final);
  if (!is_toy_global(spge.x_final, 1.0, tol)) bad << " spge(1,0.3)->" << show(spge.x_final);
  Verdict v;
  v.pass = bad.str().empty();
  v.detail = fmt("max iterations %ld; spg(1,0.3)=%s", max_iters, show(spg.x_final).c_str());
  if (!v.pass) v.detail += "; misses:" + bad.str();
  return v;
}

Verdict criterion_5(int seeds) {
  const auto t0 = Clock::now();
  SolverConfig cfg = l1_regression_config();
  cfg.record_time = true;
  std::vector<double> rel[2], suc[2];
  int faster = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    const ProblemInstance p = gen_l1_regression(60, 120, 12, static_cast<std::uint64_t>(seed));
    const Outcome a = run_outcome(p, Algorithm::Spg, cfg);
    const Outcome b = run_outcome(p, Algorithm::Spge, cfg);
    keep_if_converged(fmt("l1 seed %d", seed), b.termination, b.x_final, b.v);
    rel[0].push_back(*a.rel_err);
    rel[1].push_back(*b.rel_err);
    suc[0].push_back(*a.success_rate);
    suc[1].push_back(*b.success_rate);
    if (b.time_s < a.time_s) ++faster;
  }
  const double elapsed = seconds_since(t0);
  const double need_faster = std::ceil(0.75 * seeds);
  Verdict v;
  v.pass = median(rel[0]) <= 0.02 && median(rel[1]) <= 0.02 && median(suc[0]) >= 0.90 &&
           median(suc[1]) >= 0.90 && faster >= need_faster && elapsed < 300.0;
  v.detail = fmt("median rel-err spg %.3g spge %.3g (<= 0.02), median success spg %.3f "
                 "spge %.3f (>= 0.90), spge faster on %d/%d (>= %.0f), %.1f s",
                 median(rel[0]), median(rel[1]), median(suc[0]), median(suc[1]), faster, seeds,
                 need_faster, elapsed);
  return v;
}

Verdict criterion_6(int seeds) {
  const auto t0 = Clock::now();
  const SolverConfig cfg = censored_config();
  // lambda0 swept over 0.001:0.001:0.1 and picked per algorithm by median rel-err
  double best_rel[2] = {1e300, 1e300}, best_sup[2] = {0, 0}, best_l0[2] = {0, 0};
  for (double lambda0 : lambda0_grid(true)) {
    CensoredOptions opt;
    opt.lambda0 = lambda0;
    std::vector<double> rel[2], sup[2];
    for (int seed = 1; seed <= seeds; ++seed) {
      const ProblemInstance p = gen_censored(500, 100, 20, static_cast<std::uint64_t>(seed), opt);
      for (int a = 0; a < 2; ++a) {
        const Outcome o = run_outcome(p, a == 0 ? Algorithm::Spg : Algorithm::Spge, cfg);
        if (a == 1) {
          keep_if_converged(fmt("censored l0=%g seed %d", lambda0, seed), o.termination,
                            o.x_final, o.v);
        }
        rel[a].push_back(*o.rel_err);
        sup[a].push_back(static_cast<double>(o.support));
      }
    }
    for (int a = 0; a < 2; ++a) {
      if (median(rel[a]) < best_rel[a]) {
        best_rel[a] = median(rel[a]);
        best_sup[a] = median(sup[a]);
        best_l0[a] = lambda0;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = best_rel[0] <= 1e-2 && best_rel[1] <= 1e-2 && std::abs(best_sup[0] - 20) <= 2 &&
           std::abs(best_sup[1] - 20) <= 2 && elapsed < 600.0;
  v.detail = fmt("spg: lambda0 %g rel-err %.3g support %.1f; spge: lambda0 %g rel-err %.3g "
                 "support %.1f; %.1f s",
                 best_l0[0], best_rel[0], best_sup[0], best_l0[1], best_rel[1], best_sup[1],
                 elapsed);
  return v;
}

Verdict criterion_7() {
  const CheckReport r = check_rate({250, 500, 1000, 2000}, 2.0);
  Verdict v;
  v.pass = r.passed;
  v.detail = fmt("max/first ratio %.3g (limit 2)", r.max_violation);
  return v;
}

Verdict criterion_8() {
  Verdict v;
  std::ostringstream bad;
  for (const Converged& c : g_converged) {
    const LowerBoundReport r = lower_bound_check(c.x, c.v, 1e-3);
    if (!r.ok) bad << " " << c.where << " (" << r.violations.size() << " coords)";
  }
  v.pass = bad.str().empty() && !g_converged.empty();
  v.detail = fmt("%zu converged outputs checked", g_converged.size());
  if (!bad.str().empty()) v.detail += "; violations:" + bad.str();
  return v;
}

Verdict criterion_9() { return suite_verdict(check_residual_scaling(100, 3, 1e-10), 0.0); }

Verdict criterion_10() {
  const CheckReport r = check_spg_equivalence(5);
  Verdict v;
  v.pass = r.passed;
  v.detail = fmt("%zu instances", r.cases);
  for (const auto& w : r.worst) v.detail += "; " + w;
  return v;
}

std::set<int> parse_list(const char* s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int seeds = 20;
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seeds") && i + 1 < argc) {
      seeds = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--seeds N] [--expect-fail 4,5]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"prox oracle equivalence", criterion_1},
      {"gradient correctness", criterion_2},
      {"monitor monotonicity (safe cap)", criterion_3},
      {"toy table", criterion_4},
      {"l1 regression 60x120x12", [seeds] { return criterion_5(seeds); }},
      {"censored regression 500x100x20", [seeds] { return criterion_6(seeds); }},
      {"rate trend", criterion_7},
      {"lower-bound property", criterion_8},
      {"residual scaling", criterion_9},
      {"spg equivalence", criterion_10},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) failed.insert(id);
    std::printf("[%s] %2d %s: %s%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first,
                v.detail.c_str(),
                !v.pass && expected.count(id) ? " (expected failure)" : "");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  for (int id : expected) {
    if (!failed.count(id)) std::printf("note: criterion %d was expected to fail but passed\n", id);
  }
  return failed == expected ? 0 : 1;
}
