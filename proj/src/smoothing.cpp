#include "spge/smoothing.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spge {
namespace {

void require_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("smoothing parameter mu must be positive");
}

void require_dims(const Matrix& A, const Vector& b, const Vector& x) {
  if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("loss: empty matrix");
  if (b.size() != A.rows()) throw std::invalid_argument("loss: b has wrong length");
  if (x.size() != A.cols()) throw std::invalid_argument("loss: x has wrong length");
}

}  // namespace

double theta_tilde(double s, double mu) {
  require_mu(mu);
  const double a = std::abs(s);
  if (a > mu) return a;
  return s * s / (2.0 * mu) + mu / 2.0;
}

double theta_tilde_deriv(double s, double mu) {
  require_mu(mu);
  if (s > mu) return 1.0;
  if (s < -mu) return -1.0;
  return s / mu;
}

double plus_tilde(double s, double mu) {
  require_mu(mu);
  if (std::abs(s) > mu) return s > 0.0 ? s : 0.0;
  const double t = s + mu;
  return t * t / (4.0 * mu);
}

double plus_tilde_deriv(double s, double mu) {
  require_mu(mu);
  if (s > mu) return 1.0;
  if (s < -mu) return 0.0;
  return (s + mu) / (2.0 * mu);
}

ValueGrad l1_value_grad(const Matrix& A, const Vector& b, const Vector& x, double mu) {
  require_mu(mu);
  require_dims(A, b, x);
  const double inv_m = 1.0 / static_cast<double>(A.rows());
  const Vector r = A * x - b;
  Vector g(r.size());
  double value = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    value += theta_tilde(r[i], mu);
    g[i] = theta_tilde_deriv(r[i], mu);
  }
  return {value * inv_m, inv_m * (A.transpose() * g)};
}

ValueGrad censored_value_grad(const Matrix& A, const Vector& b, const Vector& c,
                              const Vector& x, double mu) {
  require_mu(mu);
  require_dims(A, b, x);
  if (c.size() != A.rows()) throw std::invalid_argument("loss: c has wrong length");
  const double inv_m = 1.0 / static_cast<double>(A.rows());
  const Vector s = A * x - c;
  Vector g(s.size());
  double value = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    const double u = plus_tilde(s[i], mu) - b[i];
    value += theta_tilde(u, mu);
    g[i] = theta_tilde_deriv(u, mu) * plus_tilde_deriv(s[i], mu);
  }
  return {value * inv_m, inv_m * (A.transpose() * g)};
}

double estimate_lf(const Matrix& A) {
  if (A.size() == 0) throw std::invalid_argument("estimate_lf: empty matrix");
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

double estimate_ltilde(const Matrix& A) {
  if (A.size() == 0) throw std::invalid_argument("estimate_ltilde: empty matrix");
  // Eigenvalues of the smaller Gram matrix give sigma_max^2.
  const Matrix gram = A.rows() <= A.cols() ? Matrix(A * A.transpose())
                                           : Matrix(A.transpose() * A);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / static_cast<double>(A.rows());
}

L1LossSmoother::L1LossSmoother(Matrix A, Vector b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.size() == 0) throw std::invalid_argument("l1 loss: empty matrix");
  if (b_.size() != A_.rows()) throw std::invalid_argument("l1 loss: b has wrong length");
  ltilde_ = estimate_ltilde(A_);
  lf_ = estimate_lf(A_);
}

L1LossSmoother::L1LossSmoother(Matrix A, Vector b, double lf)
    : L1LossSmoother(std::move(A), std::move(b)) {
  if (!(lf > 0.0)) throw std::invalid_argument("l1 loss: lf must be positive");
  lf_ = lf;
}

double L1LossSmoother::value(const Vector& x, double mu) const {
  require_mu(mu);
  require_dims(A_, b_, x);
  const Vector r = A_ * x - b_;
  double s = 0.0;
  for (Index i = 0; i < r.size(); ++i) s += theta_tilde(r[i], mu);
  return s / static_cast<double>(A_.rows());
}

ValueGrad L1LossSmoother::value_grad(const Vector& x, double mu) const {
  return l1_value_grad(A_, b_, x, mu);
}

double L1LossSmoother::exact_value(const Vector& x) const {
  require_dims(A_, b_, x);
  return (A_ * x - b_).lpNorm<1>() / static_cast<double>(A_.rows());
}

CensoredLossSmoother::CensoredLossSmoother(Matrix A, Vector b, Vector c)
    : A_(std::move(A)), b_(std::move(b)), c_(std::move(c)) {
  if (A_.size() == 0) throw std::invalid_argument("censored loss: empty matrix");
  if (b_.size() != A_.rows() || c_.size() != A_.rows()) {
    throw std::invalid_argument("censored loss: b or c has wrong length");
  }
  ltilde_ = 1.5 * estimate_ltilde(A_);
  lf_ = estimate_lf(A_);
}

double CensoredLossSmoother::value(const Vector& x, double mu) const {
  require_mu(mu);
  require_dims(A_, b_, x);
  const Vector s = A_ * x - c_;
  double total = 0.0;
  for (Index i = 0; i < s.size(); ++i) total += theta_tilde(plus_tilde(s[i], mu) - b_[i], mu);
  return total / static_cast<double>(A_.rows());
}

ValueGrad CensoredLossSmoother::value_grad(const Vector& x, double mu) const {
  return censored_value_grad(A_, b_, c_, x, mu);
}

double CensoredLossSmoother::exact_value(const Vector& x) const {
  require_dims(A_, b_, x);
  const Vector s = A_ * x - c_;
  double total = 0.0;
  for (Index i = 0; i < s.size(); ++i) total += std::abs(std::max(s[i], 0.0) - b_[i]);
  return total / static_cast<double>(A_.rows());
}

}  // namespace spge
