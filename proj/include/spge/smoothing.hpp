#pragma once

#include <string>

#include "spge/penalty.hpp"

namespace spge {

struct ValueGrad {
  double value = 0.0;
  Vector gradient;
};

/// A smoothing family f~(x, mu) of a nonsmooth loss f.
///
/// Implementations guarantee, for every x and mu > 0:
///   |f~(x, mu) - f(x)| <= kappa() * mu,
///   grad f~(., mu) is (ltilde() / mu)-Lipschitz,
///   f~(., mu) is convex whenever f is (the censored loss is not).
class SmoothingOracle {
 public:
  virtual ~SmoothingOracle() = default;

  virtual Index dim() const = 0;
  virtual std::string name() const = 0;

  virtual double value(const Vector& x, double mu) const = 0;
  virtual ValueGrad value_grad(const Vector& x, double mu) const = 0;
  Vector gradient(const Vector& x, double mu) const { return value_grad(x, mu).gradient; }

  /// The unsmoothed loss f(x).
  virtual double exact_value(const Vector& x) const = 0;

  virtual double kappa() const = 0;
  virtual double ltilde() const = 0;
  /// Lipschitz constant of f used for parameter selection.
  virtual double lf() const = 0;
};

/// Huber-type kernel: |s| outside [-mu, mu], s^2/(2 mu) + mu/2 inside.
double theta_tilde(double s, double mu);
double theta_tilde_deriv(double s, double mu);

/// Smoothed plus function: max{s, 0} outside [-mu, mu], (s + mu)^2/(4 mu) inside.
double plus_tilde(double s, double mu);
double plus_tilde_deriv(double s, double mu);

/// (1/m) sum_i theta~(A_i x - b_i, mu) and its gradient.
ValueGrad l1_value_grad(const Matrix& A, const Vector& b, const Vector& x, double mu);

/// (1/m) sum_i theta~(phi~(A_i x - c_i, mu) - b_i, mu) and its gradient.
ValueGrad censored_value_grad(const Matrix& A, const Vector& b, const Vector& c,
                              const Vector& x, double mu);

/// ||A||_inf, the largest absolute row sum.
double estimate_lf(const Matrix& A);
/// sigma_max(A)^2 / m. Valid gradient-Lipschitz scale for the l1 smoother.
double estimate_ltilde(const Matrix& A);

/// f(x) = (1/m) ||Ax - b||_1
class L1LossSmoother final : public SmoothingOracle {
 public:
  L1LossSmoother(Matrix A, Vector b);
  /// Overrides the Lipschitz constant reported by lf().
  L1LossSmoother(Matrix A, Vector b, double lf);

  Index dim() const override { return A_.cols(); }
  std::string name() const override { return "l1_regression"; }
  double value(const Vector& x, double mu) const override;
  ValueGrad value_grad(const Vector& x, double mu) const override;
  double exact_value(const Vector& x) const override;
  double kappa() const override { return 0.5; }
  double ltilde() const override { return ltilde_; }
  double lf() const override { return lf_; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
  double ltilde_;
  double lf_;
};

/// f(x) = (1/m) sum_i |max{A_i x - c_i, 0} - b_i|
///
/// kappa is 3/4: the outer kernel contributes at most mu/2 and the smoothed
/// plus function at most mu/4. ltilde is 3/2 * sigma_max(A)^2 / m, since the
/// composed second derivative is bounded by theta~'' + |theta~'| phi~'' <=
/// 1/mu + 1/(2 mu).
class CensoredLossSmoother final : public SmoothingOracle {
 public:
  CensoredLossSmoother(Matrix A, Vector b, Vector c);

  Index dim() const override { return A_.cols(); }
  std::string name() const override { return "censored_regression"; }
  double value(const Vector& x, double mu) const override;
  ValueGrad value_grad(const Vector& x, double mu) const override;
  double exact_value(const Vector& x) const override;
  double kappa() const override { return 0.75; }
  double ltilde() const override { return ltilde_; }
  double lf() const override { return lf_; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }

 private:
  Matrix A_;
  Vector b_;
  Vector c_;
  double ltilde_;
  double lf_;
};

}  // namespace spge
