#include "etr/copositivity.h"

#include <random>

#include <gtest/gtest.h>

#include "etr/error.h"
#include "etr/model.h"
#include "fixtures.h"
#include "oracles.h"

namespace etr {
namespace {

using testing::ConeMinOracle;
using testing::RandomSym;
using testing::RandomVec;

SymMat Mat2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return SymMat(m);
}

SymMat Horn() {
  Matrix h(5, 5);
  h << 1, -1, 1, 1, -1,
      -1, 1, -1, 1, 1,
       1, -1, 1, -1, 1,
       1, 1, -1, 1, -1,
      -1, 1, 1, -1, 1;
  return SymMat(h);
}

void ExpectValidWitness(const SymMat& m, ConeSpec cone,
                        const CopositivityVerdict& v) {
  ASSERT_EQ(v.status, CopositivityStatus::kNotCopositive);
  ASSERT_TRUE(v.witness.has_value());
  const Vector& w = *v.witness;
  ASSERT_EQ(w.size(), cone.dim());
  for (int i = 0; i < cone.k; ++i) EXPECT_GE(w(i), 0.0);
  EXPECT_LT(m.QuadraticForm(w), -1e-12);
}

TEST(ClassicalTest, PsdIsCopositive) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    Matrix f = Matrix::Random(4, 3);
    EXPECT_TRUE(IsCopositiveClassical(SymMat(Matrix(f * f.transpose()))).copositive());
  }
}

TEST(ClassicalTest, NonnegativeIndefinite) {
  const SymMat m = Mat2(1, 3, 1);
  EXPECT_NEAR(MinEigenvalue(m), -2.0, 1e-12);
  EXPECT_TRUE(IsCopositiveClassical(m).copositive());
}

TEST(ClassicalTest, NegativeOffDiagonalWitness) {
  const SymMat m = Mat2(1, -2, 1);
  const CopositivityVerdict v = IsCopositiveClassical(m);
  ExpectValidWitness(m, ConeSpec{2, 0}, v);
  EXPECT_NEAR((*v.witness)(0), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR((*v.witness)(1), 1.0 / std::sqrt(2.0), 1e-10);
  // At (1, 1) the form equals -2.
  EXPECT_NEAR(m.QuadraticForm(*v.witness * std::sqrt(2.0)), -2.0, 1e-10);
}

TEST(ClassicalTest, HornIsCopositiveButNotStrict) {
  EXPECT_TRUE(IsCopositiveClassical(Horn()).copositive());
  const CopositivityVerdict s = IsStrictlyCopositive(Horn(), ConeSpec{5, 0});
  EXPECT_FALSE(s.copositive());
  ASSERT_TRUE(s.margin.has_value());
  EXPECT_NEAR(*s.margin, 0.0, 1e-12);
  EXPECT_NEAR(testing::SimplexMinOracle(Horn().dense(), 20000, 3), 0.0, 1e-6);
}

TEST(ClassicalTest, OrderCap) {
  EXPECT_THROW(IsCopositiveClassical(SymMat::Identity(17) * -1.0), Error);
  try {
    IsCopositiveClassical(SymMat::Identity(17) * -1.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionTooLarge);
  }
}

TEST(ConeTest, Example51RelaxationMatrix) {
  const StdProblem s = Standardize(testing::Example51());
  const SymMat m0 = LagrangianMatrix(s, Eigen::Vector3d(0, 0, 1), 0.0);
  EXPECT_TRUE(IsCopositiveCone(m0, ConeSpec{3, 2}).copositive());
  const SymMat m1 = LagrangianMatrix(s, Eigen::Vector3d(0, 0, 1), 0.1);
  const CopositivityVerdict v = IsCopositiveCone(m1, ConeSpec{3, 2});
  ExpectValidWitness(m1, ConeSpec{3, 2}, v);
  EXPECT_NEAR((*v.witness)(0), 1.0, 1e-12);
  EXPECT_NEAR(v.witness->tail(4).norm(), 0.0, 1e-12);
  // Below u3 = 1 the Schur complement turns negative on the orthant.
  const SymMat m2 = LagrangianMatrix(s, Eigen::Vector3d(0, 0, 0.9), 0.0);
  ExpectValidWitness(m2, ConeSpec{3, 2}, IsCopositiveCone(m2, ConeSpec{3, 2}));
}

TEST(ConeTest, DegenerateCones) {
  const SymMat m = Mat2(1, -2, 1);
  EXPECT_FALSE(IsCopositiveCone(m, ConeSpec{0, 2}).copositive());
  EXPECT_FALSE(IsCopositiveCone(m, ConeSpec{2, 0}).copositive());
  EXPECT_TRUE(IsCopositiveCone(Mat2(1, 3, 1), ConeSpec{2, 0}).copositive());
  EXPECT_FALSE(IsCopositiveCone(Mat2(1, 3, 1), ConeSpec{0, 2}).copositive());
  EXPECT_THROW(IsCopositiveCone(m, ConeSpec{1, 2}), Error);
  EXPECT_THROW(IsCopositiveCone(m, ConeSpec{0, 0}), Error);
}

TEST(ConeTest, NegativeFreeBlockWitness) {
  Matrix m(3, 3);
  m << 1, 0, 0, 0, 1, 2, 0, 2, 1;
  const SymMat s(m);
  ExpectValidWitness(s, ConeSpec{1, 2}, IsCopositiveCone(s, ConeSpec{1, 2}));
}

TEST(ConeTest, KernelConditionWitness) {
  // H = 0 while S != 0: the orthant coordinate can be pushed against S.
  Matrix m(3, 3);
  m << 5, 1, 0, 1, 0, 0, 0, 0, 2;
  const SymMat s(m);
  ConeReduction red(s, ConeSpec{1, 2});
  EXPECT_TRUE(red.FreeBlockFails());
  for (double mu : {-100.0, 0.0, 3.0}) {
    Matrix shifted = m;
    shifted(0, 0) -= mu;
    ExpectValidWitness(SymMat(shifted), ConeSpec{1, 2}, red.Test(mu));
  }
}

TEST(ConeTest, PsdIsCopositiveOnEveryCone) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 6;
    Matrix f = Matrix::Random(n, n);
    const SymMat m(Matrix(f * f.transpose()));
    for (int k = 0; k <= n; ++k) {
      EXPECT_TRUE(IsCopositiveCone(m, ConeSpec{k, n - k}).copositive());
    }
  }
}

TEST(ConeTest, AgreesWithSamplingOracle) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 6);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 30; ++t) {
    const int n = dim(rng);
    const int k = std::uniform_int_distribution<int>(0, n)(rng);
    const SymMat r = RandomSym(rng, n);
    const double rho = ConeMinOracle(r.dense(), k, 20000, t);
    const double delta = coin(rng) ? 0.05 : -0.05;
    const SymMat m = r + SymMat::Identity(n) * (delta - rho);
    const ConeSpec cone{k, n - k};
    const CopositivityVerdict v = IsCopositiveCone(m, cone);
    const double oracle = ConeMinOracle(m.dense(), k, 20000, 1000 + t);
    EXPECT_EQ(v.copositive(), oracle >= 0.0) << "trial " << t << " oracle " << oracle;
    if (!v.copositive()) ExpectValidWitness(m, cone, v);
  }
}

TEST(ConeTest, SoundnessBySampling) {
  std::mt19937_64 rng(5);
  const double tol = CopositivityOptions{}.tol;
  int copositive = 0;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    const int k = 1 + t % n;
    SymMat m = RandomSym(rng, n) + SymMat::Identity(n) * 1.0;
    if (!IsCopositiveCone(m, ConeSpec{k, n - k}).copositive()) continue;
    ++copositive;
    std::normal_distribution<double> g;
    for (int s = 0; s < 100000 / 40; ++s) {
      Vector v = RandomVec(rng, n);
      v.head(k) = v.head(k).cwiseAbs();
      EXPECT_GE(m.QuadraticForm(v), -10 * tol * v.squaredNorm());
    }
  }
  EXPECT_GT(copositive, 5);
}

TEST(ConeTest, DiagonalShiftPreservesCopositivity) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    const int k = 1 + t % n;
    const SymMat m = RandomSym(rng, n) + SymMat::Identity(n) * 1.5;
    if (!IsCopositiveCone(m, ConeSpec{k, n - k}).copositive()) continue;
    Vector d = Vector::Zero(n);
    for (int i = 0; i < k; ++i) d(i) = unif(rng);
    EXPECT_TRUE(IsCopositiveCone(m + SymMat::Diagonal(d), ConeSpec{k, n - k}).copositive());
  }
}

TEST(ConeTest, SerialAndParallelAgree) {
  std::mt19937_64 rng(8);
  CopositivityOptions serial;
  serial.exec = Execution::kSerial;
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 6;
    const SymMat m = RandomSym(rng, n) + SymMat::Identity(n) * 0.8;
    const CopositivityVerdict a = IsCopositiveCone(m, ConeSpec{n - 1, 1});
    const CopositivityVerdict b = IsCopositiveCone(m, ConeSpec{n - 1, 1}, serial);
    EXPECT_EQ(a.status, b.status);
    if (a.witness && b.witness) EXPECT_EQ(*a.witness, *b.witness);
  }
}

TEST(StrictTest, IdentityMargin) {
  for (int n = 1; n <= 6; ++n) {
    const CopositivityVerdict v = IsStrictlyCopositive(SymMat::Identity(n), ConeSpec{n, 0});
    EXPECT_TRUE(v.copositive());
    EXPECT_GE(*v.margin, 1.0 / n - 1e-12);
  }
}

TEST(StrictTest, NonnegativeWithPositiveDiagonal) {
  EXPECT_TRUE(IsStrictlyCopositive(Mat2(1, 3, 1), ConeSpec{2, 0}).copositive());
}

TEST(StrictTest, MarginMatchesSimplexOracle) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 4;
    const SymMat m = RandomSym(rng, n) + SymMat::Identity(n) * 0.5;
    const CopositivityVerdict v = IsStrictlyCopositive(m, ConeSpec{n, 0});
    const double oracle = testing::SimplexMinOracle(m.dense(), 20000, t);
    EXPECT_NEAR(*v.margin, oracle, 1e-6);
  }
}

TEST(StrictTest, MixedConeNeedsDefiniteFreeBlock) {
  Matrix m(2, 2);
  m << 1, 0, 0, 0;
  EXPECT_TRUE(IsCopositiveCone(SymMat(m), ConeSpec{1, 1}).copositive());
  EXPECT_FALSE(IsStrictlyCopositive(SymMat(m), ConeSpec{1, 1}).copositive());
}

TEST(SigmaTest, PsdGivesOne) {
  const SigmaCertificate c = StrictMarginSigma(SymMat::Identity(3));
  EXPECT_EQ(c.sigma, 1.0);
}

TEST(SigmaTest, NonnegativeIndefinite) {
  const SymMat m = Mat2(1, 3, 1);
  const SigmaCertificate c = StrictMarginSigma(m);
  EXPECT_TRUE(std::isfinite(c.sigma));
  EXPECT_GE(c.sigma, 1.0);
  EXPECT_TRUE(IsCopositiveCone(SigmaBlockMatrix(m, c.sigma), ConeSpec{3, 2}).copositive());
}

TEST(SigmaTest, Example51Objective) {
  const SymMat m = Mat2(0.5, 1, 1);
  const SigmaCertificate c = StrictMarginSigma(m);
  EXPECT_NEAR(c.rho, OrthantSphereMinimum(m), 0.0);
  EXPECT_TRUE(IsCopositiveCone(SigmaBlockMatrix(m, c.sigma), ConeSpec{3, 2}).copositive());
  // Too small a sigma breaks the block matrix.
  EXPECT_FALSE(IsCopositiveCone(SigmaBlockMatrix(m, 0.5), ConeSpec{3, 2}).copositive());
}

TEST(SigmaTest, RejectsNonStrict) {
  try {
    StrictMarginSigma(Mat2(1, -2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStrictlyCopositive);
  }
  EXPECT_THROW(StrictMarginSigma(Horn()), Error);
}

TEST(OrthantSphereTest, MatchesOracle) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 5;
    const SymMat m = RandomSym(rng, n);
    EXPECT_NEAR(OrthantSphereMinimum(m), ConeMinOracle(m.dense(), n, 20000, t), 1e-6);
  }
}

}  // namespace
}  // namespace etr
