#include "etr/model.h"

#include <string>

#include "etr/error.h"

namespace etr {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, what);
}

void CheckMultipliers(const Eigen::Vector3d& u) {
  if (!(u.array() >= 0.0).all() || !u.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "multipliers u must be finite and nonnegative");
  }
}

}  // namespace

ETRProblem ETRProblem::Empty(int n) {
  ETRProblem p;
  p.n = n;
  p.Q0 = SymMat::Zero(n);
  p.q0 = Vector::Zero(n);
  p.Q1 = SymMat::Zero(n);
  p.q1 = Vector::Zero(n);
  p.A = Matrix::Zero(0, n);
  p.a = Vector::Zero(0);
  p.B = Matrix::Zero(0, n);
  p.b = Vector::Zero(0);
  return p;
}

void ETRProblem::Validate() const {
  Require(n >= 1, "n must be >= 1");
  Require(Q0.order() == n, "Q0 must be n x n");
  Require(q0.size() == n, "q0 must have length n");
  Require(Q1.order() == n, "Q1 must be n x n");
  Require(q1.size() == n, "q1 must have length n");
  Require(A.cols() == n, "A must have n columns");
  Require(a.size() == A.rows(), "a must have one entry per row of A");
  Require(B.cols() == n, "B must have n columns");
  Require(b.size() == B.rows(), "b must have one entry per row of B");
  if (!q0.allFinite() || !q1.allFinite() || !A.allFinite() ||
      !a.allFinite() || !B.allFinite() || !b.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "problem data must be finite");
  }
}

double ETRProblem::Objective(const Vector& x) const {
  return Q0.QuadraticForm(x) + 2.0 * q0.dot(x);
}

double ETRProblem::Ball1(const Vector& x) const {
  return Q1.QuadraticForm(x) + 2.0 * q1.dot(x) - 1.0;
}

double ETRProblem::Ball2(const Vector& x) const {
  return (A * x - a).squaredNorm() - 1.0;
}

Vector ETRProblem::Slack(const Vector& x) const { return b - B * x; }

bool ETRProblem::IsCDT(double tol) const {
  const Matrix diff = Q1.dense() - Matrix::Identity(n, n);
  const double qdiff = q1.size() > 0 ? q1.cwiseAbs().maxCoeff() : 0.0;
  const double mdiff = diff.size() > 0 ? diff.cwiseAbs().maxCoeff() : 0.0;
  return mdiff <= tol && qdiff <= tol;
}

Vector StdProblem::Lift(const Vector& x) const {
  Require(x.size() == n, "point has wrong dimension");
  Vector y(p + n);
  y.head(p) = b - Bbar.rightCols(n) * x;
  y.tail(n) = x;
  return y;
}

StdProblem Standardize(const ETRProblem& problem) {
  problem.Validate();
  const int n = problem.n;
  const int p = problem.p();
  StdProblem s;
  s.p = p;
  s.n = n;
  s.b = problem.b;
  s.Bbar.resize(p, p + n);
  s.Bbar.leftCols(p) = Matrix::Identity(p, p);
  s.Bbar.rightCols(n) = problem.B;

  const SymMat zero_p = SymMat::Zero(p);
  auto pad = [&](const Vector& v) {
    Vector out = Vector::Zero(p + n);
    out.tail(n) = v;
    return out;
  };

  // fbar_0 = x^T Q0 x + 2 q0^T x.
  s.fbar[0] = QuadFunc{DirectSum(zero_p, problem.Q0), pad(-problem.q0), 0.0};
  // fbar_1 = x^T Q1 x + 2 q1^T x - 1.
  s.fbar[1] = QuadFunc{DirectSum(zero_p, problem.Q1), pad(-problem.q1), -1.0};
  // fbar_2 = ||A x - a||^2 - 1.
  s.fbar[2] = QuadFunc{DirectSum(zero_p, Gram(problem.A)),
                       pad(problem.A.transpose() * problem.a),
                       problem.a.squaredNorm() - 1.0};
  // fbar_3 = ||Bbar y - b||^2.
  s.fbar[3] = QuadFunc{Gram(s.Bbar), s.Bbar.transpose() * problem.b,
                       problem.b.squaredNorm()};

  for (int i = 0; i < 4; ++i) s.M[i] = ShorMatrix(s.fbar[i]);
  s.J = Jay(p + n + 1);
  return s;
}

SymMat LagrangianMatrix(const StdProblem& s, const Eigen::Vector3d& u,
                        double mu) {
  CheckMultipliers(u);
  Matrix m = s.M[0].dense();
  for (int i = 1; i <= 3; ++i) m += u(i - 1) * s.M[i].dense();
  m(0, 0) -= mu;
  return SymMat(m, 0.0);
}

QuadFunc LagrangianQuad(const StdProblem& s, const Eigen::Vector3d& u,
                        const Vector& v) {
  CheckMultipliers(u);
  Matrix h = s.fbar[0].H.dense();
  Vector d = s.fbar[0].d;
  double gamma = s.fbar[0].gamma;
  for (int i = 1; i <= 3; ++i) {
    h += u(i - 1) * s.fbar[i].H.dense();
    d += u(i - 1) * s.fbar[i].d;
    gamma += u(i - 1) * s.fbar[i].gamma;
  }
  if (v.size() > 0) {
    Require(v.size() == s.p, "v must have one entry per slack");
    // -v^T s = -2 (v/2)^T s.
    d.head(s.p) += 0.5 * v;
  }
  return QuadFunc{SymMat(h, 0.0), d, gamma};
}

double Lagrangian(const StdProblem& s, const Vector& y,
                  const Eigen::Vector3d& u, const Vector& v) {
  Require(y.size() == s.lifted_dim(), "y has wrong dimension");
  CheckMultipliers(u);
  double value = Evaluate(s.fbar[0], y);
  for (int i = 1; i <= 3; ++i) value += u(i - 1) * Evaluate(s.fbar[i], y);
  if (v.size() > 0) {
    Require(v.size() == s.p, "v must have one entry per slack");
    value -= v.dot(y.head(s.p));
  }
  return value;
}

bool IsFeasible(const ETRProblem& problem, const Vector& x, double tol) {
  Require(x.size() == problem.n, "point has wrong dimension");
  if (problem.Ball1(x) > tol) return false;
  if (problem.Ball2(x) > tol) return false;
  if (problem.p() > 0 && (problem.B * x - problem.b).maxCoeff() > tol) {
    return false;
  }
  return true;
}

}  // namespace etr
