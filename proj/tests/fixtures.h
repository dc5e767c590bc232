#pragma once

#include <random>

#include "etr/model.h"

namespace etr::testing {

// min 1/2 x1^2 + 2 x1 x2 + x2^2 over x >= 0; z* = 0 at the origin.
inline ETRProblem Example51() {
  ETRProblem p = ETRProblem::Empty(2);
  Matrix q0(2, 2);
  q0 << 0.5, 1.0, 1.0, 1.0;
  p.Q0 = SymMat(q0);
  p.A = Matrix::Zero(1, 2);
  p.a = Vector::Zero(1);
  p.B = -Matrix::Identity(2, 2);
  p.b = Vector::Zero(2);
  return p;
}

// min 2 x1^2 - 2 x2^2 over the unit disc with x1 >= 0; z* = -2 at (0, +-1).
inline ETRProblem Remark42() {
  ETRProblem p = ETRProblem::Empty(2);
  p.Q0 = SymMat::Diagonal(Vector::Map(std::vector<double>{2.0, -2.0}.data(), 2));
  p.Q1 = SymMat::Identity(2);
  p.A = Matrix::Zero(1, 2);
  p.a = Vector::Zero(1);
  p.B = Matrix(1, 2);
  p.B << -1.0, 0.0;
  p.b = Vector::Zero(1);
  return p;
}

inline SymMat RandomSym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  }
  return SymMat(m);
}

inline Vector RandomVec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace etr::testing
