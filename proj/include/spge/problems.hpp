#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spge/penalty.hpp"
#include "spge/smoothing.hpp"
#include "spge/solver.hpp"

namespace spge {

enum class LossKind { ToyAbs, L1Regression, CensoredRegression };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view s);

/// A complete problem: data, feasible box, penalty, start point and the
/// optional ground truth.
struct ProblemInstance {
  LossKind kind = LossKind::L1Regression;
  Matrix A;
  Vector b;
  Vector c;  // censoring levels; empty unless kind == CensoredRegression
  BoxConstraint box = BoxConstraint::uniform(0, 0.0, 1.0);
  CappedL1Penalty penalty{1.0, 1.0};
  Vector x0;
  std::optional<Vector> x_true;
  std::uint64_t seed = 0;
  /// Lipschitz constant used for parameter selection; zero means ||A||_inf.
  double lf = 0.0;

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }

  /// Throws std::invalid_argument on inconsistent dimensions or an
  /// infeasible x_true.
  void validate() const;

  std::shared_ptr<const SmoothingOracle> make_loss() const;

  /// F(x) = f(x) + lambda Phi(x)
  double objective(const Vector& x) const;
};

struct L1RegressionOptions {
  double lambda = 18.8;
  double magnitude_lo = 1.0;
  double magnitude_hi = 5.0;
  double upper = 10.0;
  double x0_value = 1.97;
  double noise_std = 0.0;
};

struct CensoredOptions {
  double lambda0 = 0.01;
  double x0_value = 0.1;
  double censor_level = 0.0;
  double noise_std = 0.0;
};

/// min |x1 + x2 - 1| + lambda Phi(x) over [0,1]^2, started at (1, 0.8).
ProblemInstance gen_toy(double lambda = 1.0, double v = 0.5);

/// (1/m)||Ax - b||_1 over [0, upper]^n with unit-norm Gaussian columns,
/// an s-sparse nonnegative ground truth and b = A x_true (+ optional noise).
/// v = min(lambda / ||A||_inf, upper).
ProblemInstance gen_l1_regression(Index m, Index n, Index s, std::uint64_t seed,
                                  const L1RegressionOptions& options = {});

/// (1/m) sum |max(A_i x - c_i, 0) - b_i| over [0,1]^n with Gaussian A,
/// s-sparse x_true in (0, 1]^n, b = max(A x_true - c, 0).
/// lambda = lambda0 ||A||_inf and v = min(lambda0, 1).
ProblemInstance gen_censored(Index m, Index n, Index s, std::uint64_t seed,
                             const CensoredOptions& options = {});

/// Structured error from load_instance: which field and which line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, std::size_t line, const std::string& message);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);
std::string format_instance(const ProblemInstance& instance);
ProblemInstance parse_instance(std::string_view text);

/// Convenience overloads that build the loss from the instance.
SolveResult spge_solve(const ProblemInstance& instance, const SolverConfig& config);
SolveResult spg_solve(const ProblemInstance& instance, const SolverConfig& config);

}  // namespace spge
