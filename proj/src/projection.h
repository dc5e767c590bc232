#pragma once

// Euclidean projections onto the convex pieces of the feasible set and
// Dykstra's method for their intersection.

#include <functional>
#include <vector>

#include "etr/matcore.h"
#include "etr/model.h"

namespace etr::internal {

using Projector = std::function<Vector(const Vector&)>;

// { x : x^T Q x + 2 q^T x <= rhs } with Q psd.
class QuadSetProjector {
 public:
  QuadSetProjector(const SymMat& q, const Vector& lin, double rhs);

  double Value(const Vector& x) const;
  Vector operator()(const Vector& z) const;

 private:
  Vector Solve(const Vector& z, double lambda) const;

  Matrix q_;
  Vector lin_;
  double rhs_;
  Vector evals_;
  Matrix evecs_;
};

// { x : b^T x <= c }.
Vector ProjectHalfspace(const Vector& z, const Vector& b, double c);

// Dykstra's alternating projections; stops when an entire cycle moves the
// iterate by less than tol or after max_cycles.
Vector Dykstra(const std::vector<Projector>& sets, const Vector& z,
               int max_cycles = 500, double tol = 1e-13);

// Projectors for the convex parts of the feasible set of P: the first ball
// when Q1 is psd, the second ball, and one per linear inequality.
std::vector<Projector> FeasibleSetProjectors(const ETRProblem& p);

}  // namespace etr::internal
