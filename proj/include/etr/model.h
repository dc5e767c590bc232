#pragma once

// Problem data for the extended trust-region problem
//
//   min  x^T Q0 x + 2 q0^T x
//   s.t. x^T Q1 x + 2 q1^T x <= 1,  ||A x - a||^2 <= 1,  B x <= b,
//
// its slack-variable standardization over y = (s, x) in R^p_+ x R^n, and
// the Lagrangian relaxation matrix in the lifted ordering (1, s, x).

#include <array>

#include <Eigen/Dense>

#include "etr/matcore.h"
#include "etr/quadratic.h"

namespace etr {

struct ETRProblem {
  int n = 0;
  SymMat Q0;
  Vector q0;
  SymMat Q1;
  Vector q1;
  Matrix A;  // ell x n
  Vector a;
  Matrix B;  // p x n
  Vector b;

  int p() const { return static_cast<int>(B.rows()); }
  int ell() const { return static_cast<int>(A.rows()); }

  // Empty blocks (ell = p = 0, Q1 = O) for a given dimension.
  static ETRProblem Empty(int n);

  // Throws kDimensionMismatch on inconsistent block sizes.
  void Validate() const;

  double Objective(const Vector& x) const;
  // f1(x) = x^T Q1 x + 2 q1^T x - 1.
  double Ball1(const Vector& x) const;
  // f2(x) = ||A x - a||^2 - 1.
  double Ball2(const Vector& x) const;
  // s = b - B x.
  Vector Slack(const Vector& x) const;

  // Q1 = I and q1 = 0.
  bool IsCDT(double tol = 0.0) const;
};

struct Multipliers {
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Vector v;  // sign-free inside generalized KKT pairs
};

// Standardized form over y = (s, x): fbar[0] is the objective, fbar[1..2] the
// two quadratic constraints, fbar[3] = ||Bbar y - b||^2 with Bbar = [I_p | B].
// M[i] is the Shor matrix of fbar[i]; J = 1 (+) O of order p + n + 1.
struct StdProblem {
  int p = 0;
  int n = 0;
  std::array<QuadFunc, 4> fbar;
  Matrix Bbar;
  Vector b;
  std::array<SymMat, 4> M;
  SymMat J;

  int lifted_dim() const { return p + n; }
  int matrix_order() const { return p + n + 1; }

  // y = (b - B x, x).
  Vector Lift(const Vector& x) const;
};

StdProblem Standardize(const ETRProblem& problem);

// M(fbar_0) + sum_i u_i M(fbar_i) - mu J, ordered (1, s, x).
SymMat LagrangianMatrix(const StdProblem& s, const Eigen::Vector3d& u,
                        double mu);

// The combined quadratic L(.; u, v) = fbar_0 + sum_i u_i fbar_i - v^T s.
QuadFunc LagrangianQuad(const StdProblem& s, const Eigen::Vector3d& u,
                        const Vector& v);

// L(y; u, v) = fbar_0(y) + sum_i u_i fbar_i(y) - v^T s. Pass an empty v for
// v = 0.
double Lagrangian(const StdProblem& s, const Vector& y,
                  const Eigen::Vector3d& u, const Vector& v);

// All constraint families satisfied to within tol (absolute, per constraint).
bool IsFeasible(const ETRProblem& problem, const Vector& x, double tol = 1e-8);

}  // namespace etr
