#include "etr/relax.h"

#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "etr/error.h"
#include "etr/oracle.h"
#include "fixtures.h"

namespace etr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using testing::Example51;
using testing::Remark42;

ETRProblem ConvexInstance() {
  ETRProblem p = ETRProblem::Empty(2);
  Vector d(2);
  d << 1.0, 2.0;
  p.Q0 = SymMat::Diagonal(d);
  p.q0 = Vector(2);
  p.q0 << 0.1, -0.2;
  p.Q1 = SymMat::Identity(2) * 0.01;  // radius 10, inactive
  return p;
}

TEST(ThetaFullTest, Example51IsUnbounded) {
  const StdProblem s = Standardize(Example51());
  for (double u3 : {0.0, 1.0, 10.0, 1000.0}) {
    for (double v1 : {0.0, 0.5, 3.0}) {
      Vector v(2);
      v << v1, 0.25;
      EXPECT_EQ(ThetaFull(s, Eigen::Vector3d(1.0, 2.0, u3), v), -kInf);
      EXPECT_EQ(ThetaFull(s, Eigen::Vector3d(0.0, 0.0, u3), v), -kInf);
    }
  }
}

TEST(ThetaFullTest, ConvexUnconstrainedMinimum) {
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Identity(2);
  p.q0 = Vector(2);
  p.q0 << 1.0, -2.0;
  const StdProblem s = Standardize(p);
  EXPECT_NEAR(ThetaFull(s, Eigen::Vector3d::Zero(), Vector()), -5.0, 1e-12);
}

TEST(ThetaFullTest, Remark42ClosedForm) {
  const StdProblem s = Standardize(Remark42());
  EXPECT_NEAR(ThetaFull(s, Eigen::Vector3d(2, 0, 0), Vector::Zero(1)), -2.0, 1e-12);
  EXPECT_EQ(ThetaFull(s, Eigen::Vector3d(1, 0, 0), Vector::Zero(1)), -kInf);
  EXPECT_THROW(ThetaFull(s, Eigen::Vector3d(2, 0, 0), -Vector::Ones(1)), Error);
}

TEST(ZLdTest, Example51) {
  const Bound b = ZLd(Standardize(Example51()));
  EXPECT_EQ(b.value, -kInf);
  EXPECT_FALSE(b.multipliers.has_value());
  EXPECT_GE(b.trace.seeds, 27 + 10);
}

TEST(ZLdTest, Remark42) {
  const Bound b = ZLd(Standardize(Remark42()));
  EXPECT_NEAR(b.value, -2.0, 1e-4);
  ASSERT_TRUE(b.multipliers.has_value());
  EXPECT_NEAR(b.multipliers->u(0), 2.0, 1e-3);
}

TEST(ZLdTest, EpInstanceEqualsLambdaMin) {
  // With the ball dualized, u1 = -lambda_min(Q0) and v = 0 give
  // Theta = lambda_min(Q0), and Theta <= -u1 <= lambda_min for every other
  // choice, so z_LD is finite for this class.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ETRProblem p = RandomInstance(seed, InstanceDims{3, 3, 0}, InstanceClass::kEP);
    const Bound b = ZLd(Standardize(p));
    EXPECT_NEAR(b.value, MinEigenvalue(p.Q0), 1e-4) << seed;
  }
}

TEST(ThetaSemiTest, Example51AtUnitPenalty) {
  const StdProblem s = Standardize(Example51());
  const Eigen::Vector3d u(0, 0, 1);
  EXPECT_EQ(ThetaSemi(s, u, SemiMethod::kBisection), 0.0);
  EXPECT_NEAR(ThetaSemi(s, u, SemiMethod::kActiveSet), 0.0, 1e-12);
  const Eigen::Vector3d below(0, 0, 0.9);
  EXPECT_EQ(ThetaSemi(s, below, SemiMethod::kBisection), -kInf);
  EXPECT_EQ(ThetaSemi(s, below, SemiMethod::kActiveSet), -kInf);
}

TEST(ThetaSemiTest, ZeroMultipliersIndefinite) {
  const StdProblem s = Standardize(Example51());
  EXPECT_EQ(ThetaSemi(s, Eigen::Vector3d::Zero(), SemiMethod::kBisection), -kInf);
  EXPECT_EQ(ThetaSemi(s, Eigen::Vector3d::Zero(), SemiMethod::kActiveSet), -kInf);
}

TEST(ThetaSemiTest, MethodsAgreeOnRandomInstances) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 5.0);
  int finite = 0;
  for (int t = 0; t < 60; ++t) {
    const InstanceDims dims{1 + t % 3, t % 4, t % 2};
    const StdProblem s = Standardize(RandomInstance(t, dims, InstanceClass::kGeneric));
    const Eigen::Vector3d u(unif(rng), unif(rng), unif(rng));
    const double a = ThetaSemi(s, u, SemiMethod::kBisection);
    const double b = ThetaSemi(s, u, SemiMethod::kActiveSet);
    if (a == -kInf || b == -kInf) {
      EXPECT_EQ(a, b) << t;
      continue;
    }
    ++finite;
    EXPECT_NEAR(a, b, 1e-6) << t;
  }
  EXPECT_GT(finite, 30);
}

TEST(ThetaSemiTest, ActiveSetCap) {
  ETRProblem p = ETRProblem::Empty(1);
  p.B = Matrix::Ones(13, 1);
  p.b = Vector::Ones(13);
  EXPECT_THROW(ThetaSemi(Standardize(p), Eigen::Vector3d(1, 0, 1), SemiMethod::kActiveSet),
               Error);
}

TEST(ThetaSemiTest, FeasibleMuSetIsDownClosed) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StdProblem s = Standardize(
        RandomInstance(seed, InstanceDims{2, 2, 1}, InstanceClass::kGeneric));
    const Eigen::Vector3d u(1.0, 0.5, 2.0);
    const ConeReduction red(LagrangianMatrix(s, u, 0.0), ConeSpec{s.p + 1, s.n});
    bool seen_fail = false;
    for (double mu = 5.0; mu >= -20.0; mu -= 0.25) {
      const bool ok = red.Test(mu).copositive();
      if (!ok) seen_fail = true;
      // Once copositive going downwards, it stays copositive.
      if (ok) {
        for (double lower = mu - 3.0; lower < mu; lower += 1.0) {
          EXPECT_TRUE(red.Test(lower).copositive());
        }
      }
    }
    EXPECT_TRUE(seen_fail);
  }
}

TEST(ZCopTest, Example51) {
  const StdProblem s = Standardize(Example51());
  const Bound b = ZCop(s);
  EXPECT_NEAR(b.value, 0.0, 1e-6);
  EXPECT_TRUE(b.certified);
  ASSERT_TRUE(b.multipliers.has_value());
  EXPECT_EQ(b.multipliers->u, Eigen::Vector3d(0, 0, 1));
}

TEST(ZCopTest, EpInstances) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ETRProblem p = RandomInstance(seed, InstanceDims{2 + seed % 2, 0, 0}, InstanceClass::kEP);
    const Bound b = ZCop(Standardize(p));
    EXPECT_NEAR(b.value, 0.0, 1e-6) << seed;
    EXPECT_TRUE(b.certified);
    EXPECT_NEAR(b.multipliers->u(0), 0.0, 1e-9);
    EXPECT_NEAR(b.multipliers->u(1), 0.0, 1e-9);
    EXPECT_GT(b.multipliers->u(2), 0.0);
  }
}

TEST(ZCopTest, ConvexInstanceMatchesOracle) {
  const ETRProblem p = ConvexInstance();
  const OracleResult o = BruteGlobalMin(p);
  EXPECT_NEAR(o.value, -0.03, 1e-9);
  EXPECT_NEAR(ZCop(Standardize(p)).value, o.value, 1e-6);
  EXPECT_NEAR(ZLd(Standardize(p)).value, o.value, 1e-6);
}

TEST(ChainTest, Example51) {
  const ChainReport r = ChainCheck(Standardize(Example51()), 0.0);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.ld, -kInf);
  EXPECT_NEAR(r.cop, 0.0, 1e-6);
}

TEST(ChainTest, RandomInstancesAgainstOracle) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const InstanceDims dims{1 + static_cast<int>(seed % 3), static_cast<int>(seed % 3), 1};
    const ETRProblem p = RandomInstance(seed, dims, InstanceClass::kGeneric);
    const OracleResult o = BruteGlobalMin(p);
    const ChainReport r = ChainCheck(Standardize(p), o.value);
    EXPECT_TRUE(r.holds) << seed << ": " << r.ld << " " << r.cop << " " << r.zstar;
  }
}

}  // namespace
}  // namespace etr
