#include "etr/kernels.h"

#include <cstdlib>
#include <limits>

#include <gtest/gtest.h>

#include "fixtures.h"

namespace etr::kernels {
namespace {

using etr::testing::RandomSym;

TEST(KernelsTest, OrthantEigenpairSerialMatchesParallel) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const Matrix a = RandomSym(rng, 3 + t % 8).dense() + Matrix::Constant(3 + t % 8, 3 + t % 8, 0.4);
    const auto s = FindNegativeOrthantEigenpair(a, 1e-10, Execution::kSerial);
    const auto p = FindNegativeOrthantEigenpair(a, 1e-10, Execution::kParallel);
    ASSERT_EQ(s.has_value(), p.has_value());
    if (s) {
      EXPECT_EQ(s->mask, p->mask);
      EXPECT_EQ(s->eigenvalue, p->eigenvalue);
      EXPECT_EQ(s->x, p->x);
      EXPECT_GE(s->x.minCoeff(), 0.0);
      EXPECT_LT(s->x.dot(a * s->x), -1e-12);
    }
  }
}

TEST(KernelsTest, SubsetMinimaSerialMatchesParallel) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = RandomSym(rng, 2 + t % 9).dense();
    Vector xs, xp;
    EXPECT_EQ(MinParetoEigenvalue(a, &xs, Execution::kSerial),
              MinParetoEigenvalue(a, &xp, Execution::kParallel));
    EXPECT_EQ(xs, xp);
    EXPECT_EQ(SimplexMinimum(a, &xs, Execution::kSerial),
              SimplexMinimum(a, &xp, Execution::kParallel));
    EXPECT_EQ(xs, xp);
  }
}

TEST(KernelsTest, SamplingIndependentOfThreads) {
  std::mt19937_64 rng(7);
  const Matrix m = RandomSym(rng, 6).dense();
  const SampleMin s = SampleConeMinimum(m, 3, 50000, 11, Execution::kSerial);
  const SampleMin p = SampleConeMinimum(m, 3, 50000, 11, Execution::kParallel);
  EXPECT_EQ(s.value, p.value);
  EXPECT_EQ(s.v, p.v);
  EXPECT_NEAR(s.v.norm(), 1.0, 1e-12);
  EXPECT_GE(s.v.head(3).minCoeff(), 0.0);
  EXPECT_NEAR(s.v.dot(m * s.v), s.value, 1e-12);
}

TEST(KernelsTest, GridBestOrderAndTies) {
  const Vector lo = Vector::Constant(2, -1.0);
  const Vector hi = Vector::Constant(2, 1.0);
  auto f = [](const Vector& x) {
    if (x(0) > 0.9) return std::numeric_limits<double>::infinity();
    return x(1) * x(1);  // ties across x(0)
  };
  const auto s = GridBest(lo, hi, 21, f, 5, Execution::kSerial);
  const auto p = GridBest(lo, hi, 21, f, 5, Execution::kParallel);
  ASSERT_EQ(s.size(), 5u);
  ASSERT_EQ(p.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(s[i].index, p[i].index);
    EXPECT_EQ(s[i].value, 0.0);
    if (i > 0) EXPECT_LT(s[i - 1].index, s[i].index);
  }
}

TEST(KernelsTest, ThreadCapFromEnvironment) {
  ::setenv("RELAX_THREADS", "1", 1);
  EXPECT_EQ(ThreadCount(), 1);
  ::unsetenv("RELAX_THREADS");
  EXPECT_GE(ThreadCount(), 1);
}

}  // namespace
}  // namespace etr::kernels
