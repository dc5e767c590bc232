#include "projection.h"

#include <cmath>
#include <memory>

namespace etr::internal {

QuadSetProjector::QuadSetProjector(const SymMat& q, const Vector& lin,
                                   double rhs)
    : q_(q.dense()), lin_(lin), rhs_(rhs) {
  const EigDecomp e = Eig(q);
  evals_ = e.values.cwiseMax(0.0);
  evecs_ = e.vectors;
}

double QuadSetProjector::Value(const Vector& x) const {
  return x.dot(q_ * x) + 2.0 * lin_.dot(x) - rhs_;
}

// argmin ||x - z||^2 + lambda (x^T Q x + 2 q^T x): (I + lambda Q) x = z - lambda q.
Vector QuadSetProjector::Solve(const Vector& z, double lambda) const {
  const Vector r = evecs_.transpose() * (z - lambda * lin_);
  return evecs_ * (r.array() / (1.0 + lambda * evals_.array())).matrix();
}

Vector QuadSetProjector::operator()(const Vector& z) const {
  if (Value(z) <= 0.0) return z;
  double hi = 1.0;
  int grow = 0;
  while (Value(Solve(z, hi)) > 0.0 && grow < 200) {
    hi *= 2.0;
    ++grow;
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (Value(Solve(z, mid)) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Solve(z, hi);
}

Vector ProjectHalfspace(const Vector& z, const Vector& b, double c) {
  const double viol = b.dot(z) - c;
  const double nb = b.squaredNorm();
  if (viol <= 0.0 || nb == 0.0) return z;
  return z - (viol / nb) * b;
}

Vector Dykstra(const std::vector<Projector>& sets, const Vector& z,
               int max_cycles, double tol) {
  if (sets.empty()) return z;
  if (sets.size() == 1) return sets[0](z);
  Vector x = z;
  std::vector<Vector> incr(sets.size(), Vector::Zero(z.size()));
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const Vector start = x;
    for (size_t i = 0; i < sets.size(); ++i) {
      const Vector y = x + incr[i];
      const Vector px = sets[i](y);
      incr[i] = y - px;
      x = px;
    }
    if ((x - start).norm() <= tol * (1.0 + x.norm())) break;
  }
  return x;
}

std::vector<Projector> FeasibleSetProjectors(const ETRProblem& p) {
  std::vector<Projector> sets;
  if (MinEigenvalue(p.Q1) >= -1e-12) {
    auto proj = std::make_shared<QuadSetProjector>(p.Q1, p.q1, 1.0);
    sets.push_back([proj](const Vector& z) { return (*proj)(z); });
  }
  if (p.ell() > 0) {
    auto proj = std::make_shared<QuadSetProjector>(
        Gram(p.A), Vector(-p.A.transpose() * p.a), 1.0 - p.a.squaredNorm());
    sets.push_back([proj](const Vector& z) { return (*proj)(z); });
  }
  for (int i = 0; i < p.p(); ++i) {
    const Vector row = p.B.row(i).transpose();
    const double c = p.b(i);
    sets.push_back([row, c](const Vector& z) { return ProjectHalfspace(z, row, c); });
  }
  return sets;
}

}  // namespace etr::internal
