#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spge/smoothing.hpp"

using namespace spge;

namespace {

Matrix fixture_A() {
  Matrix A(4, 3);
  A << 1.0, -2.0, 0.5, 0.3, 0.4, -1.0, 2.0, 0.0, 1.0, -0.5, 1.5, 0.25;
  return A;
}

TEST(Kernels, OracleValues) {
  const double s[] = {-0.5, -0.2, -0.1, 0.0, 0.15, 0.2, 0.7};
  const double th[] = {0.5, 0.2, 0.125, 0.1, 0.15625, 0.2, 0.7};
  const double pl[] = {0.0, 0.0, 0.0125, 0.05, 0.153125, 0.2, 0.7};
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(theta_tilde(s[i], 0.2), th[i], 1e-15) << s[i];
    EXPECT_NEAR(plus_tilde(s[i], 0.2), pl[i], 1e-15) << s[i];
  }
  EXPECT_THROW(theta_tilde(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(plus_tilde(1.0, -1.0), std::invalid_argument);
}

TEST(Kernels, SeamsAreC1) {
  const double mu = 0.3;
  for (double sgn : {-1.0, 1.0}) {
    const double s = sgn * mu;
    EXPECT_NEAR(theta_tilde(s, mu), theta_tilde(std::nextafter(s, 10 * s), mu), 1e-14);
    EXPECT_NEAR(theta_tilde_deriv(s, mu), theta_tilde_deriv(std::nextafter(s, 10 * s), mu),
                1e-14);
    EXPECT_NEAR(plus_tilde(s, mu), plus_tilde(std::nextafter(s, 10 * s), mu), 1e-14);
    EXPECT_NEAR(plus_tilde_deriv(s, mu), plus_tilde_deriv(std::nextafter(s, 10 * s), mu),
                1e-14);
  }
}

TEST(Kernels, GapBounds) {
  for (double s = -2.0; s <= 2.0; s += 0.013) {
    for (double mu : {0.01, 0.3, 1.5}) {
      const double t = theta_tilde(s, mu);
      EXPECT_GE(t, std::abs(s) - 1e-15);
      EXPECT_LE(t, std::abs(s) + mu / 2 + 1e-15);
      const double p = plus_tilde(s, mu);
      EXPECT_GE(p, std::max(s, 0.0) - 1e-15);
      EXPECT_LE(p, std::max(s, 0.0) + mu / 4 + 1e-15);
    }
  }
}

TEST(L1Loss, OracleValueAndGradient) {
  Vector b(4), x(3);
  b << 0.2, -0.1, 1.0, 0.4;
  x << 0.3, 0.2, -0.4;
  const ValueGrad vg = l1_value_grad(fixture_A(), b, x, 0.25);
  EXPECT_NEAR(vg.value, 0.58, 1e-14);
  EXPECT_NEAR(vg.gradient[0], -0.55, 1e-14);
  EXPECT_NEAR(vg.gradient[1], 0.225, 1e-14);
  EXPECT_NEAR(vg.gradient[2], -0.6875, 1e-14);
}

TEST(L1Loss, SymmetricZero) {
  const ValueGrad vg = l1_value_grad(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2), 0.1);
  EXPECT_DOUBLE_EQ(vg.value, 0.05);
  EXPECT_EQ(vg.gradient, Vector::Zero(2));
  EXPECT_THROW(l1_value_grad(Matrix::Identity(2, 2), Vector::Zero(3), Vector::Zero(2), 0.1),
               std::invalid_argument);
}

TEST(CensoredLoss, OracleValueAndGradient) {
  Vector b(4), c(4), x(3);
  b << 0.2, -0.1, 1.0, 0.4;
  c << 0.0, 0.1, -0.2, 0.3;
  x << 0.3, 0.2, -0.4;
  const ValueGrad vg = censored_value_grad(fixture_A(), b, c, x, 0.25);
  EXPECT_NEAR(vg.value, 0.44375, 1e-14);
  EXPECT_NEAR(vg.gradient[0], -0.425, 1e-14);
  EXPECT_NEAR(vg.gradient[1], 0.1, 1e-14);
  EXPECT_NEAR(vg.gradient[2], -0.5, 1e-14);
}

TEST(CensoredLoss, DeadRegion) {
  Matrix A = Matrix::Identity(3, 3);
  const Vector x = Vector::Constant(3, -5.0);
  const ValueGrad vg = censored_value_grad(A, Vector::Zero(3), Vector::Zero(3), x, 0.1);
  EXPECT_NEAR(vg.value, 0.05, 1e-15);  // theta~(0, mu) = mu/2
  EXPECT_EQ(vg.gradient, Vector::Zero(3));
}

TEST(CensoredLoss, NotConvex) {
  // f(t) = |max(t, 0) - 1| in one dimension: flat, then falling
  Matrix A = Matrix::Identity(1, 1);
  const CensoredLossSmoother f(A, Vector::Ones(1), Vector::Zero(1));
  const double mid = f.value(Vector::Constant(1, 0.0), 1e-3);
  const double avg = 0.5 * (f.value(Vector::Constant(1, -1.0), 1e-3) +
                            f.value(Vector::Constant(1, 1.0), 1e-3));
  EXPECT_GT(mid, avg);
}

TEST(CensoredLoss, ConvergesAsMuShrinks) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Matrix A(8, 4);
  Vector b(8), c(8), x(4);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 4; ++j) A(i, j) = g(rng);
    b[i] = std::abs(g(rng));
    c[i] = 0.1 * g(rng);
  }
  for (int j = 0; j < 4; ++j) x[j] = g(rng);
  const CensoredLossSmoother f(A, b, c);
  double prev = 1e300;
  for (double mu : {1e-1, 1e-2, 1e-3}) {
    const double gap = std::abs(f.value(x, mu) - f.exact_value(x));
    EXPECT_LE(gap, f.kappa() * mu);
    EXPECT_LE(gap, prev + 1e-15);
    prev = gap;
  }
}

class SmootherProperties : public ::testing::TestWithParam<bool> {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    Matrix A(9, 5);
    Vector b(9), c(9);
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 5; ++j) A(i, j) = g(rng);
      b[i] = std::abs(g(rng));
      c[i] = 0.2 * g(rng);
    }
    if (GetParam()) {
      f_ = std::make_unique<CensoredLossSmoother>(A, b, c);
    } else {
      f_ = std::make_unique<L1LossSmoother>(A, b);
    }
  }
  Vector point(std::mt19937_64& rng) const {
    std::normal_distribution<double> g;
    Vector x(5);
    for (int j = 0; j < 5; ++j) x[j] = g(rng);
    return x;
  }
  bool censored() const { return GetParam(); }
  std::unique_ptr<SmoothingOracle> f_;
};

TEST_P(SmootherProperties, GapWithinKappaMu) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = point(rng);
    for (double mu : {0.01, 0.2, 2.0}) {
      const double gap = f_->value(x, mu) - f_->exact_value(x);
      // smoothing the plus function can pull |p - b| below the exact
      // residual, so the censored gap is two-sided
      EXPECT_GE(gap, censored() ? -f_->kappa() * mu - 1e-13 : -1e-13);
      EXPECT_LE(gap, f_->kappa() * mu + 1e-13);
    }
  }
}

TEST_P(SmootherProperties, MonotoneInMu) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = point(rng);
    const double v1 = f_->value(x, 0.5), v2 = f_->value(x, 0.05);
    EXPECT_LE(v2, v1 + f_->kappa() * 0.45 + 1e-13);
  }
}

TEST_P(SmootherProperties, ConvexForL1) {
  if (censored()) GTEST_SKIP() << "censored loss is not convex";
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector x = point(rng), y = point(rng);
    const double a = (rep % 9 + 1) / 10.0;
    EXPECT_LE(f_->value(a * x + (1 - a) * y, 0.3),
              a * f_->value(x, 0.3) + (1 - a) * f_->value(y, 0.3) + 1e-12);
  }
}

TEST_P(SmootherProperties, GradientMatchesDifferences) {
  std::mt19937_64 rng(4);
  const double h = 1e-6, mu = 0.7;
  for (int rep = 0; rep < 50; ++rep) {
    const Vector x = point(rng);
    const Vector grad = f_->gradient(x, mu);
    for (int j = 0; j < 5; ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (f_->value(xp, mu) - f_->value(xm, mu)) / (2 * h);
      // seam crossings make isolated coordinates unreliable; the
      // randomized suite in checks filters them, here the bound is loose
      EXPECT_NEAR(fd, grad[j], 1e-4 * std::max(1.0, std::abs(grad[j])));
    }
  }
}

TEST_P(SmootherProperties, LtildeBoundsGradientRatio) {
  std::mt19937_64 rng(5);
  const double mu = 0.2;
  for (int rep = 0; rep < 200; ++rep) {
    const Vector x = point(rng), y = point(rng);
    const double ratio = (f_->gradient(x, mu) - f_->gradient(y, mu)).norm() * mu / (x - y).norm();
    EXPECT_LE(ratio, f_->ltilde() * (1 + 1e-12));
  }
}

INSTANTIATE_TEST_SUITE_P(Losses, SmootherProperties, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "censored" : "l1"; });

TEST(Norms, LfAndLtilde) {
  EXPECT_DOUBLE_EQ(estimate_lf(Matrix::Identity(3, 3)), 1.0);
  Matrix A(2, 2);
  A << 1, 2, 3, 4;
  EXPECT_DOUBLE_EQ(estimate_lf(A), 7.0);
  EXPECT_NEAR(estimate_ltilde(Matrix::Identity(4, 4)), 0.25, 1e-14);
  EXPECT_THROW(estimate_lf(Matrix(0, 0)), std::invalid_argument);
  const L1LossSmoother l1(A, Vector::Zero(2));
  EXPECT_DOUBLE_EQ(l1.kappa(), 0.5);
  const CensoredLossSmoother cens(A, Vector::Zero(2), Vector::Zero(2));
  EXPECT_DOUBLE_EQ(cens.kappa(), 0.75);
  EXPECT_NEAR(cens.ltilde(), 1.5 * l1.ltilde(), 1e-12);
}

}  // namespace
