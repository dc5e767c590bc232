#pragma once

// Dense two-phase primal simplex with Bland's rule.

#include <optional>

#include "etr/matcore.h"

namespace etr {

// min c^T x  s.t.  Aeq x = beq,  Aineq x <= bineq,  lb <= x <= ub.
// Variables are free unless bounds are supplied; bound vectors may hold
// +-infinity entries.
struct LinearProgram {
  Vector c;
  Matrix Aeq;
  Vector beq;
  Matrix Aineq;
  Vector bineq;
  std::optional<Vector> lb;
  std::optional<Vector> ub;

  // An LP with num_vars free variables, zero objective and no rows.
  static LinearProgram Empty(int num_vars);

  int num_vars() const { return static_cast<int>(c.size()); }
  void Validate() const;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

struct LPOutcome {
  LPStatus status = LPStatus::kInfeasible;
  std::optional<Vector> x;
  std::optional<double> value;
  int iterations = 0;
};

struct LPOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int max_iterations = 100000;
};

LPOutcome SolveLP(const LinearProgram& lp, const LPOptions& options = {});

// Phase one only: a feasible point (status kOptimal, value = c^T x) or
// kInfeasible.
LPOutcome LPFeasible(const LinearProgram& lp, const LPOptions& options = {});

// Largest violation of any constraint at x (0 when feasible).
double LPViolation(const LinearProgram& lp, const Vector& x);

}  // namespace etr
