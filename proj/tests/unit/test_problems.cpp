#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "spge/problems.hpp"
#include "spge/solver.hpp"

using namespace spge;

namespace {

TEST(Generators, ToyShape) {
  const ProblemInstance p = gen_toy(1.2, 0.8);
  EXPECT_EQ(p.kind, LossKind::ToyAbs);
  EXPECT_EQ(p.m(), 1);
  EXPECT_EQ(p.n(), 2);
  EXPECT_DOUBLE_EQ(p.x0[0], 1.0);
  EXPECT_DOUBLE_EQ(p.x0[1], 0.8);
  EXPECT_DOUBLE_EQ(p.penalty.lambda(), 1.2);
  EXPECT_DOUBLE_EQ(p.objective(Vector::Zero(2)), 1.0);
}

TEST(Generators, L1RegressionStructure) {
  const ProblemInstance p = gen_l1_regression(60, 120, 12, 7);
  ASSERT_TRUE(p.x_true.has_value());
  for (Index j = 0; j < p.n(); ++j) EXPECT_NEAR(p.A.col(j).norm(), 1.0, 1e-12);
  const Vector& xt = *p.x_true;
  EXPECT_EQ(support_size(xt), 12);
  for (Index i = 0; i < xt.size(); ++i) {
    if (xt[i] != 0.0) {
      EXPECT_GE(xt[i], 1.0);
      EXPECT_LE(xt[i], 5.0);
    }
  }
  EXPECT_NEAR((p.A * xt - p.b).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(p.penalty.lambda(), 18.8);
  EXPECT_NEAR(p.penalty.v(), std::min(18.8 / p.A.rowwise().lpNorm<1>().maxCoeff(), 10.0), 1e-12);
  EXPECT_TRUE(p.box.contains(xt));
}

TEST(Generators, CensoredStructure) {
  const ProblemInstance p = gen_censored(200, 40, 8, 3);
  ASSERT_TRUE(p.x_true.has_value());
  EXPECT_EQ(support_size(*p.x_true), 8);
  EXPECT_EQ(p.c.size(), 200);
  EXPECT_GE(p.b.minCoeff(), 0.0);
  const Vector fit = (p.A * *p.x_true - p.c).cwiseMax(0.0);
  EXPECT_NEAR((fit - p.b).norm(), 0.0, 1e-12);
  EXPECT_NEAR(p.penalty.v(), std::min(0.01, 1.0), 1e-15);
}

TEST(Generators, SeedDeterminism) {
  const ProblemInstance a = gen_l1_regression(20, 40, 4, 5);
  const ProblemInstance b = gen_l1_regression(20, 40, 4, 5);
  const ProblemInstance c = gen_l1_regression(20, 40, 4, 6);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(*a.x_true, *b.x_true);
  EXPECT_NE(a.A, c.A);
}

TEST(Generators, RejectBadSizes) {
  EXPECT_THROW(gen_l1_regression(10, 20, 21, 1), std::invalid_argument);
  EXPECT_THROW(gen_censored(0, 20, 2, 1), std::invalid_argument);
}

TEST(InstanceIo, RoundTripIsExact) {
  for (const ProblemInstance& p :
       {gen_toy(0.9, 0.6), gen_l1_regression(12, 20, 3, 2), gen_censored(30, 10, 2, 4)}) {
    const ProblemInstance q = parse_instance(format_instance(p));
    EXPECT_EQ(q.kind, p.kind);
    EXPECT_EQ(q.A, p.A);
    EXPECT_EQ(q.b, p.b);
    EXPECT_EQ(q.c, p.c);
    EXPECT_EQ(q.x0, p.x0);
    EXPECT_EQ(q.box.lower(), p.box.lower());
    EXPECT_EQ(q.box.upper(), p.box.upper());
    EXPECT_EQ(q.penalty.lambda(), p.penalty.lambda());
    EXPECT_EQ(q.penalty.v(), p.penalty.v());
    EXPECT_EQ(q.lf, p.lf);
    EXPECT_EQ(q.x_true.has_value(), p.x_true.has_value());
    if (p.x_true) EXPECT_EQ(*q.x_true, *p.x_true);
  }
}

TEST(InstanceIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "spge_io_roundtrip.txt";
  const ProblemInstance p = gen_l1_regression(8, 10, 2, 3);
  save_instance(p, path);
  const ProblemInstance q = load_instance(path);
  EXPECT_EQ(q.A, p.A);
  std::filesystem::remove(path);
}

const char* kHandWritten = R"(spge-instance 1
# two observations, two unknowns
kind l1_regression
m 2
n 2
seed 0
lambda 0.5
v 0.25
lf 0
A
1 0
0 2
b
1 -1
lower
0 -inf
upper
inf 1
x0
0.5 0.5
end
)";

TEST(InstanceIo, HandWrittenFixture) {
  const ProblemInstance p = parse_instance(kHandWritten);
  EXPECT_EQ(p.m(), 2);
  EXPECT_DOUBLE_EQ(p.A(1, 1), 2.0);
  EXPECT_TRUE(std::isinf(p.box.upper()[0]));
  EXPECT_TRUE(std::isinf(p.box.lower()[1]));
  EXPECT_FALSE(p.x_true.has_value());
  EXPECT_DOUBLE_EQ(p.make_loss()->lf(), 2.0);
  const SolveResult r = spge_solve(p, SolverConfig{});
  EXPECT_TRUE(p.box.contains(r.x_final));
}

TEST(InstanceIo, TruncatedFile) {
  std::string text = kHandWritten;
  text = text.substr(0, text.find("b\n"));
  try {
    parse_instance(text);
    FAIL() << "truncated instance parsed";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "b");
  }
}

TEST(InstanceIo, BadNumberReportsLine) {
  std::string text = kHandWritten;
  text.replace(text.find("1 0\n"), 4, "1 x\n");
  try {
    parse_instance(text);
    FAIL() << "bad number parsed";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "A");
    EXPECT_EQ(e.line(), 11u);
  }
}

TEST(InstanceIo, MissingFile) {
  EXPECT_THROW(load_instance("/nonexistent/spge.txt"), std::runtime_error);
}

}  // namespace
