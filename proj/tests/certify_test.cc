#include "etr/certify.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "etr/copositivity.h"
#include "etr/error.h"
#include "etr/oracle.h"
#include "etr/relax.h"
#include "fixtures.h"

namespace etr {
namespace {

using testing::Example51;
using testing::Remark42;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// min -x^2 + 2x over |x| <= 1, x >= -1/2: z* = -1.25 at x = -1/2.
ETRProblem SignCounterexample() {
  ETRProblem p = ETRProblem::Empty(1);
  p.Q0 = SymMat::Identity(1) * -1.0;
  p.q0 = Vector::Ones(1);
  p.Q1 = SymMat::Identity(1);
  p.B = Matrix::Constant(1, 1, -1.0);
  p.b = Vector::Constant(1, 0.5);
  return p;
}

// Classical trust-region multiplier from the secular equation.
KKTPair TrsPair(const ETRProblem& p) {
  auto x_of = [&](double u) {
    const Matrix h = p.Q0.dense() + u * Matrix::Identity(p.n, p.n);
    return Vector(-h.ldlt().solve(p.q0));
  };
  double lo = -MinEigenvalue(p.Q0) + 1e-12;
  double hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (x_of(mid).norm() > 1.0 ? lo : hi) = mid;
  }
  KKTPair pair;
  pair.x = x_of(hi);
  pair.u = Eigen::Vector3d(hi, 0, 0);
  return pair;
}

KKTPair EpPair(const ETRProblem& p) {
  KKTPair pair;
  pair.x = Vector::Zero(p.n);
  pair.u = Eigen::Vector3d(0, 0, StrictMarginSigma(p.Q0).sigma);
  pair.v = Vector::Zero(p.n);
  return pair;
}

TEST(CheckKKTTest, EpPairAndPerturbation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ETRProblem p = RandomInstance(seed, InstanceDims{3, 3, 0}, InstanceClass::kEP);
    const StdProblem s = Standardize(p);
    KKTPair pair = EpPair(p);
    EXPECT_TRUE(CheckKKT(s, pair));
    pair.x = Vector::Constant(3, 1e-2);
    EXPECT_FALSE(CheckKKT(s, pair));
    EXPECT_GT(KKTResidualsAt(s, pair).stationarity, 1e-3);
  }
}

TEST(CheckKKTTest, InteriorStationaryPoint) {
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Identity(2);
  p.q0 = Vector::Constant(2, -0.1);
  p.Q1 = SymMat::Identity(2);
  KKTPair pair;
  pair.x = Vector::Constant(2, 0.1);
  EXPECT_TRUE(CheckKKT(Standardize(p), pair));
  pair.x(0) += 1e-2;
  EXPECT_FALSE(CheckKKT(Standardize(p), pair));
}

TEST(CheckKKTTest, DimensionMismatch) {
  KKTPair pair;
  pair.x = Vector::Zero(3);
  EXPECT_EQ(CodeOf([&] { KKTResidualsAt(Standardize(Example51()), pair); }),
            ErrorCode::kDimensionMismatch);
}

TEST(CertifyGlobalTest, EpInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ETRProblem p =
        RandomInstance(seed, InstanceDims{2 + static_cast<int>(seed % 3), 0, 0}, InstanceClass::kEP);
    const Certificate c = CertifyGlobal(Standardize(p), EpPair(p));
    EXPECT_EQ(c.status, CertStatus::kGlobalOptimal) << seed;
    EXPECT_EQ(*c.value, 0.0);
    ASSERT_TRUE(c.slack_matrix.has_value());
    EXPECT_TRUE(IsCopositiveCone(*c.slack_matrix, ConeSpec{p.n + 1, p.n}).copositive());
  }
}

TEST(CertifyGlobalTest, Example51) {
  KKTPair pair;
  pair.x = Vector::Zero(2);
  pair.u = Eigen::Vector3d(0, 0, 1);
  pair.v = Vector::Zero(2);
  const Certificate c = CertifyGlobal(Standardize(Example51()), pair);
  EXPECT_EQ(c.status, CertStatus::kGlobalOptimal);
  pair.u = Eigen::Vector3d::Zero();
  const Certificate bad = CertifyGlobal(Standardize(Example51()), pair);
  EXPECT_EQ(bad.status, CertStatus::kInconclusive);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_LT(bad.witness->dot(bad.slack_matrix->dense() * *bad.witness), 0.0);
}

TEST(CertifyGlobalTest, Remark42) {
  KKTPair pair;
  pair.x = Vector(2);
  pair.x << 0.0, 1.0;
  pair.u = Eigen::Vector3d(2, 0, 0);
  pair.v = Vector::Zero(1);
  const Certificate c = CertifyGlobal(Standardize(Remark42()), pair);
  EXPECT_EQ(c.status, CertStatus::kGlobalOptimal);
  EXPECT_EQ(*c.value, -2.0);
}

TEST(CertifyGlobalTest, AgreesWithOracleOnTrustRegion) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    ETRProblem p = ETRProblem::Empty(2);
    p.Q0 = testing::RandomSym(rng, 2);
    p.Q0 = p.Q0 - SymMat::Identity(2) * (std::max(0.0, MinEigenvalue(p.Q0)) + 0.5);
    p.q0 = testing::RandomVec(rng, 2, 0.5);
    p.Q1 = SymMat::Identity(2);
    const KKTPair pair = TrsPair(p);
    const Certificate c = CertifyGlobal(Standardize(p), pair, 1e-7);
    ASSERT_EQ(c.status, CertStatus::kGlobalOptimal) << t;
    EXPECT_NEAR(BruteGlobalMin(p).value, *c.value, 1e-4);
    EXPECT_EQ(CertifyCdtCorollary(p, pair, 1e-7).status, CertStatus::kGlobalOptimal);
  }
}

TEST(CdtCorollaryTest, MatrixMatchesGeneralForm) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ETRProblem p = RandomInstance(seed, InstanceDims{3, 2, 2}, InstanceClass::kCDT);
    std::uniform_real_distribution<double> unif(0.0, 3.0);
    const Eigen::Vector3d u(unif(rng), unif(rng), unif(rng));
    const double mu = unif(rng) - 1.5;
    const Matrix diff = CdtCorollaryMatrix(p, u, mu).dense() -
                        LagrangianMatrix(Standardize(p), u, mu).dense();
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CdtCorollaryTest, Remark42AndFailures) {
  KKTPair pair;
  pair.x = Vector(2);
  pair.x << 0.0, 1.0;
  pair.u = Eigen::Vector3d(2, 0, 0);
  // Hand-assembled: diag over (1, s, x1, x2) = (2, 0, 4, 0).
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = -2.0 - (-2.0);
  expect(2, 2) = 4.0;
  EXPECT_EQ(CdtCorollaryMatrix(Remark42(), pair.u, -2.0).dense(), expect);
  EXPECT_EQ(CertifyCdtCorollary(Remark42(), pair).status, CertStatus::kGlobalOptimal);

  pair.x(1) = 0.5;
  const Certificate c = CertifyCdtCorollary(Remark42(), pair);
  EXPECT_EQ(c.status, CertStatus::kInconclusive);
  EXPECT_FALSE(c.slack_matrix.has_value());

  EXPECT_EQ(CodeOf([&] { CertifyCdtCorollary(Example51(), pair); }), ErrorCode::kNotCDT);
}

void ExpectValidWitness(const ETRProblem& p, const Vector& d) {
  const SymMat q0p = p.Q0 - SymMat::Identity(p.n) * MinEigenvalue(p.Q0);
  EXPECT_LT((q0p.dense() * d).cwiseAbs().maxCoeff(), 1e-8);
  if (p.ell() > 0) EXPECT_LT((p.A * d).cwiseAbs().maxCoeff(), 1e-8);
  if (p.p() > 0) EXPECT_LE((p.B * d).maxCoeff(), 1e-10);
  EXPECT_LE(p.q0.dot(d), 1e-10);
  EXPECT_NEAR(d.cwiseAbs().maxCoeff(), 1.0, 1e-12);
}

TEST(CdtLpConditionTest, Remark42) {
  const Certificate c = CdtLpCondition(Remark42());
  ASSERT_EQ(c.status, CertStatus::kConditionHolds);
  EXPECT_NEAR((*c.witness)(0), 0.0, 1e-12);
  EXPECT_NEAR((*c.witness)(1), 1.0, 1e-12);
  ExpectValidWitness(Remark42(), *c.witness);
  EXPECT_EQ(CdtLpCondition(Remark42(), KernelSign::kAsPrinted).status,
            CertStatus::kConditionHolds);
  EXPECT_EQ(CdtLpConditionSumNormalized(Remark42()).status, CertStatus::kConditionHolds);
}

TEST(CdtLpConditionTest, TrivialKernel) {
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Diagonal(Vector::LinSpaced(2, 1.0, 2.0));
  p.Q1 = SymMat::Identity(2);
  p.A = Matrix::Identity(2, 2);
  p.a = Vector::Zero(2);
  EXPECT_EQ(CdtLpCondition(p).status, CertStatus::kConditionFails);
  EXPECT_EQ(CdtLpConditionSumNormalized(p).status, CertStatus::kConditionFails);
}

TEST(CdtLpConditionTest, PrintedSignIsNotSufficient) {
  const ETRProblem p = SignCounterexample();
  EXPECT_EQ(CdtLpCondition(p, KernelSign::kAsPrinted).status, CertStatus::kConditionHolds);
  EXPECT_EQ(CdtLpConditionSumNormalized(p).status, CertStatus::kConditionHolds);
  EXPECT_EQ(CdtLpCondition(p).status, CertStatus::kConditionFails);
  const double zstar = BruteGlobalMin(p).value;
  EXPECT_NEAR(zstar, -1.25, 1e-9);
  // The relaxation is not exact: z_LD = sup over u1 > 1 tends to -2.
  const double zld = ZLd(Standardize(p)).value;
  EXPECT_LE(zld, -2.0 + 1e-6);
  EXPECT_GT(zld, -2.5);
}

TEST(CdtLpConditionTest, SumNormalizationMissesDirections) {
  // ker Q0+ = span(e1) and x1 <= 0, so the cone is {(t, 0) : t <= 0}.
  ETRProblem p = ETRProblem::Empty(2);
  Vector diag(2);
  diag << -1.0, 1.0;
  p.Q0 = SymMat::Diagonal(diag);
  p.Q1 = SymMat::Identity(2);
  p.B = Matrix(1, 2);
  p.B << 1.0, 0.0;
  p.b = Vector::Zero(1);
  EXPECT_EQ(CdtLpConditionSumNormalized(p).status, CertStatus::kConditionFails);
  const Certificate c = CdtLpCondition(p);
  ASSERT_EQ(c.status, CertStatus::kConditionHolds);
  ExpectValidWitness(p, *c.witness);
  EXPECT_NEAR((*c.witness)(0), -1.0, 1e-12);
  const double zstar = BruteGlobalMin(p).value;
  EXPECT_NEAR(zstar, -1.0, 1e-9);
  EXPECT_NEAR(ZLd(Standardize(p)).value, zstar, 1e-3);
}

TEST(CdtLpConditionTest, WitnessesValidOnGeneratedInstances) {
  int holds = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const InstanceDims dims{2 + static_cast<int>(seed % 3), static_cast<int>(seed % 3), 1,
                            1 + static_cast<int>(seed % 2), seed % 3 == 0};
    const ETRProblem p = RandomInstance(seed, dims, InstanceClass::kCDT);
    const Certificate c = CdtLpCondition(p);
    if (c.status != CertStatus::kConditionHolds) continue;
    ++holds;
    ExpectValidWitness(p, *c.witness);
  }
  EXPECT_GT(holds, 5);
}

TEST(DimensionConditionTest, Cases) {
  EXPECT_FALSE(DimensionCondition(Remark42()));
  ETRProblem p = ETRProblem::Empty(3);
  p.Q0 = SymMat::Diagonal(Vector::LinSpaced(3, -1.0, 1.0));
  p.Q1 = SymMat::Identity(3);
  EXPECT_TRUE(DimensionCondition(p));
  p.A = Matrix::Identity(3, 3);
  p.a = Vector::Zero(3);
  EXPECT_EQ(CodeOf([&] { DimensionCondition(p); }), ErrorCode::kNotApplicable);
  EXPECT_EQ(CodeOf([&] { DimensionCondition(Example51()); }), ErrorCode::kNotCDT);
}

TEST(DimensionConditionTest, ImpliesKernelCondition) {
  int applied = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const InstanceDims dims{2 + static_cast<int>(seed % 3), static_cast<int>(seed % 3), 1,
                            1 + static_cast<int>(seed % 3), true};
    const ETRProblem p = RandomInstance(seed, dims, InstanceClass::kCDT);
    if (!DimensionCondition(p)) continue;
    ++applied;
    EXPECT_EQ(CdtLpCondition(p).status, CertStatus::kConditionHolds) << seed;
  }
  EXPECT_GT(applied, 10);
}

// (AP) is P with Q0 replaced by Q0+.
ETRProblem Auxiliary(const ETRProblem& p) {
  ETRProblem ap = p;
  ap.Q0 = p.Q0 - SymMat::Identity(p.n) * MinEigenvalue(p.Q0);
  return ap;
}

TEST(ApSphereMinimizerTest, Remark42) {
  const auto x = ApSphereMinimizer(Remark42());
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR(x->norm(), 1.0, 1e-9);
  EXPECT_NEAR((*x)(0), 0.0, 1e-6);
  EXPECT_NEAR(BruteGlobalMin(Auxiliary(Remark42())).value, 0.0, 1e-9);
}

TEST(ApSphereMinimizerTest, InteriorMinimizer) {
  // Q0+ = diag(0, 2) always has a kernel; with only the unit ball the
  // minimizers reach the sphere along it.
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Diagonal(Vector::LinSpaced(2, 1.0, 3.0));
  p.Q1 = SymMat::Identity(2);
  const auto on_sphere = ApSphereMinimizer(p);
  ASSERT_TRUE(on_sphere.has_value());
  EXPECT_NEAR(std::abs((*on_sphere)(0)), 1.0, 1e-9);
  // |2 x1| <= 1 blocks that direction and x* = 0 is the only minimizer.
  p.A = Matrix(1, 2);
  p.A << 2.0, 0.0;
  p.a = Vector::Zero(1);
  EXPECT_FALSE(ApSphereMinimizer(p).has_value());
}

TEST(ApSphereMinimizerTest, LinearTermPullsOutward) {
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Diagonal(Vector::LinSpaced(2, 1.0, 3.0));
  p.q0 = Vector::Constant(2, -5.0);
  p.Q1 = SymMat::Identity(2);
  const auto x = ApSphereMinimizer(p);
  ASSERT_TRUE(x.has_value());
  const ETRProblem ap = Auxiliary(p);
  EXPECT_NEAR(ap.Objective(*x), BruteGlobalMin(ap).value, 1e-6);
}

TEST(ApSphereMinimizerTest, Infeasible) {
  ETRProblem p = ETRProblem::Empty(1);
  p.Q1 = SymMat::Identity(1);
  p.B = Matrix::Constant(1, 1, -1.0);
  p.b = Vector::Constant(1, -2.0);
  EXPECT_EQ(CodeOf([&] { ApSphereMinimizer(p); }), ErrorCode::kInfeasibleProblem);
}

TEST(ApSphereMinimizerTest, SphereMinimizerMeansExactLagrangian) {
  int present = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const InstanceDims dims{2, static_cast<int>(seed % 3), 1, 1, seed % 2 == 0};
    const ETRProblem p = RandomInstance(seed, dims, InstanceClass::kCDT);
    if (!ApSphereMinimizer(p)) continue;
    ++present;
    const double zstar = BruteGlobalMin(p).value;
    EXPECT_NEAR(ZLd(Standardize(p)).value, zstar, 1e-3) << seed;
  }
  EXPECT_GT(present, 3);
}

TEST(OmegaConvexityTest, Cases) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_TRUE(OmegaConvexitySufficient(
        RandomInstance(seed, InstanceDims{3, 3, 3}, InstanceClass::kZMatrix)));
  }
  EXPECT_FALSE(OmegaConvexitySufficient(Example51()));
  ETRProblem p = RandomInstance(0, InstanceDims{3, 3, 3}, InstanceClass::kZMatrix);
  p.b(0) = 0.5;
  EXPECT_FALSE(OmegaConvexitySufficient(p));
}

TEST(OmegaClosednessTest, Cases) {
  const auto cdt = OmegaClosednessSufficient(Remark42());
  ASSERT_TRUE(cdt.has_value());
  EXPECT_EQ(*cdt, Eigen::Vector3d(0, 1, 0));

  ETRProblem p = ETRProblem::Empty(2);
  Vector d0(2), d1(2);
  d0 << 2.0, -1.0;
  d1 << -1.0, 2.0;
  p.Q0 = SymMat::Identity(2);
  EXPECT_EQ(*OmegaClosednessSufficient(p), Eigen::Vector3d(1, 0, 0));

  p.Q0 = SymMat::Diagonal(d0);
  p.Q1 = SymMat::Diagonal(d1);
  const auto mixed = OmegaClosednessSufficient(p);
  ASSERT_TRUE(mixed.has_value());
  const Matrix m = (*mixed)(0) * p.Q0.dense() + (*mixed)(1) * p.Q1.dense();
  EXPECT_GT(MinEigenvalue(SymMat(m)), 1e-8);

  // Shared kernel vector e2.
  Vector k0(2), k1(2);
  k0 << 1.0, 0.0;
  k1 << -3.0, 0.0;
  p.Q0 = SymMat::Diagonal(k0);
  p.Q1 = SymMat::Diagonal(k1);
  p.A = Matrix(1, 2);
  p.A << 1.0, 0.0;
  p.a = Vector::Zero(1);
  EXPECT_FALSE(OmegaClosednessSufficient(p).has_value());
}

}  // namespace
}  // namespace etr
