#include "spge/problems.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "spge/rng.hpp"

namespace spge {

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SplitMix64::below: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return r % n;
}

double SplitMix64::normal() {
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::ToyAbs:
      return "toy_abs";
    case LossKind::L1Regression:
      return "l1_regression";
    case LossKind::CensoredRegression:
      return "censored_regression";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view s) {
  if (s == "toy_abs" || s == "toy") return LossKind::ToyAbs;
  if (s == "l1_regression") return LossKind::L1Regression;
  if (s == "censored_regression" || s == "censored") return LossKind::CensoredRegression;
  throw std::invalid_argument("unknown problem kind '" + std::string(s) + "'");
}

void ProblemInstance::validate() const {
  if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("instance: empty matrix A");
  if (b.size() != A.rows()) throw std::invalid_argument("instance: b must have m entries");
  if (kind == LossKind::CensoredRegression && c.size() != A.rows()) {
    throw std::invalid_argument("instance: c must have m entries");
  }
  if (kind != LossKind::CensoredRegression && c.size() != 0) {
    throw std::invalid_argument("instance: c is only allowed for censored regression");
  }
  if (box.size() != A.cols()) throw std::invalid_argument("instance: box must have n entries");
  if (x0.size() != A.cols()) throw std::invalid_argument("instance: x0 must have n entries");
  if (x_true) {
    if (x_true->size() != A.cols()) {
      throw std::invalid_argument("instance: x_true must have n entries");
    }
    if (!box.contains(*x_true)) throw std::invalid_argument("instance: x_true is infeasible");
  }
  if (lf < 0.0) throw std::invalid_argument("instance: lf must be nonnegative");
}

std::shared_ptr<const SmoothingOracle> ProblemInstance::make_loss() const {
  validate();
  if (kind == LossKind::CensoredRegression) {
    return std::make_shared<CensoredLossSmoother>(A, b, c);
  }
  if (lf > 0.0) return std::make_shared<L1LossSmoother>(A, b, lf);
  return std::make_shared<L1LossSmoother>(A, b);
}

double ProblemInstance::objective(const Vector& x) const {
  return make_loss()->exact_value(x) + penalty.value(x);
}

namespace {

Matrix gaussian_matrix(SplitMix64& rng, Index m, Index n) {
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
  }
  return A;
}

/// Partial Fisher-Yates over 0..n-1; the first s entries are the support,
/// in draw order.
std::vector<Index> draw_support(SplitMix64& rng, Index n, Index s) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(s));
  return idx;
}

void check_sizes(Index m, Index n, Index s) {
  if (m < 1) throw std::invalid_argument("generator: m must be at least 1");
  if (n < 1) throw std::invalid_argument("generator: n must be at least 1");
  if (s < 1 || s > n) throw std::invalid_argument("generator: s must lie in [1, n]");
}

}  // namespace

ProblemInstance gen_toy(double lambda, double v) {
  ProblemInstance p;
  p.kind = LossKind::ToyAbs;
  p.A = Matrix::Ones(1, 2);
  p.b = Vector::Ones(1);
  p.box = BoxConstraint::uniform(2, 0.0, 1.0);
  p.penalty = CappedL1Penalty(lambda, v);
  p.x0 = Vector(2);
  p.x0 << 1.0, 0.8;
  p.lf = std::sqrt(2.0);
  p.seed = 0;
  return p;
}

ProblemInstance gen_l1_regression(Index m, Index n, Index s, std::uint64_t seed,
                                  const L1RegressionOptions& options) {
  check_sizes(m, n, s);
  if (!(options.magnitude_lo > 0.0 && options.magnitude_lo <= options.magnitude_hi &&
        options.magnitude_hi <= options.upper)) {
    throw std::invalid_argument("generator: magnitudes must satisfy 0 < lo <= hi <= upper");
  }
  SplitMix64 rng(seed);
  ProblemInstance p;
  p.kind = LossKind::L1Regression;
  p.seed = seed;
  p.A = gaussian_matrix(rng, m, n);
  for (Index j = 0; j < n; ++j) p.A.col(j) /= p.A.col(j).norm();

  Vector xt = Vector::Zero(n);
  for (Index j : draw_support(rng, n, s)) {
    xt[j] = rng.uniform(options.magnitude_lo, options.magnitude_hi);
  }
  p.b = p.A * xt;
  if (options.noise_std > 0.0) {
    for (Index i = 0; i < m; ++i) p.b[i] += options.noise_std * rng.normal();
  }
  p.x_true = xt;
  p.box = BoxConstraint::uniform(n, 0.0, options.upper);
  const double lf = estimate_lf(p.A);
  p.penalty = CappedL1Penalty(options.lambda, std::min(options.lambda / lf, options.upper));
  p.x0 = Vector::Constant(n, options.x0_value);
  return p;
}

ProblemInstance gen_censored(Index m, Index n, Index s, std::uint64_t seed,
                             const CensoredOptions& options) {
  check_sizes(m, n, s);
  if (!(options.lambda0 > 0.0)) throw std::invalid_argument("generator: lambda0 must be positive");
  SplitMix64 rng(seed);
  ProblemInstance p;
  p.kind = LossKind::CensoredRegression;
  p.seed = seed;
  p.A = gaussian_matrix(rng, m, n);

  Vector xt = Vector::Zero(n);
  for (Index j : draw_support(rng, n, s)) xt[j] = rng.uniform_open_zero();
  p.c = Vector::Constant(m, options.censor_level);
  p.b = (p.A * xt - p.c).cwiseMax(0.0);
  if (options.noise_std > 0.0) {
    for (Index i = 0; i < m; ++i) p.b[i] += options.noise_std * rng.normal();
  }
  p.x_true = xt;
  p.box = BoxConstraint::uniform(n, 0.0, 1.0);
  const double lf = estimate_lf(p.A);
  const double lambda = options.lambda0 * lf;
  p.penalty = CappedL1Penalty(lambda, std::min(lambda / lf, 1.0));
  p.x0 = Vector::Constant(n, options.x0_value);
  return p;
}

SolveResult spge_solve(const ProblemInstance& instance, const SolverConfig& config) {
  const auto loss = instance.make_loss();
  return spge_solve(ProblemView{*loss, instance.penalty, instance.box}, instance.x0, config);
}

SolveResult spg_solve(const ProblemInstance& instance, const SolverConfig& config) {
  const auto loss = instance.make_loss();
  return spg_solve(ProblemView{*loss, instance.penalty, instance.box}, instance.x0, config);
}

}  // namespace spge
