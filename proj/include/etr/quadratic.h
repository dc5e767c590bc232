#pragma once

#include "etr/matcore.h"

namespace etr {

// q(x) = x^T H x - 2 d^T x + gamma.
//
// Note the sign of the linear term: an objective written as
// x^T Q x + 2 c^T x corresponds to d = -c.
struct QuadFunc {
  SymMat H;
  Vector d;
  double gamma = 0.0;

  int dim() const { return H.order(); }

  // Gradient 2 H x - 2 d.
  Vector Gradient(const Vector& x) const;
};

// Throws kDimensionMismatch unless dim(x) == order(H).
double Evaluate(const QuadFunc& q, const Vector& x);

// [[gamma, -d^T], [-d, H]]; psd iff q is nonnegative on all of R^n.
SymMat ShorMatrix(const QuadFunc& q);

}  // namespace etr
