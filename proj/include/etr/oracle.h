#pragma once

// Desk-scale ground truth: grid search plus projected-gradient polish for
// the global minimum of small problems, and seeded instance generators.

#include <cstdint>
#include <string>
#include <vector>

#include "etr/model.h"
#include "etr/parallel.h"

namespace etr {

struct GridConfig {
  // Points per axis; 0 picks 2001, 401, 81, 31 for n = 1..4.
  int points_per_axis = 0;
  // Box half-width when no constraint bounds the feasible set.
  double radius = 10.0;
  int keep = 25;
  int polish_iters = 5000;
  Execution exec = Execution::kParallel;
};

struct OracleResult {
  double value = 0.0;
  Vector minimizer;
  int points_per_axis = 0;
  Vector box_lo;
  Vector box_hi;
  int polish_iters = 0;  // total accepted polish steps
  std::vector<std::string> warnings;
};

// Throws kDimensionTooLarge for n > 4 and kInfeasibleProblem when neither a
// grid point nor a projection probe is feasible.
OracleResult BruteGlobalMin(const ETRProblem& p, const GridConfig& cfg = {});

enum class InstanceClass { kGeneric, kCDT, kEP, kZMatrix };

std::string InstanceClassName(InstanceClass c);

struct InstanceDims {
  int n = 2;
  int p = 1;
  int ell = 1;
  // CDT only: multiplicity of lambda_min(Q0), i.e. dim ker(Q0+).
  int kernel_dim = 1;
  // CDT only: A = O and a = 0.
  bool zero_A = false;
};

struct GeneratedInstance {
  ETRProblem problem;
  Vector witness;  // a feasible point
};

// Deterministic in (seed, dims, class).
//   kEP:      Q0 >= 0 entrywise, positive diagonal, indefinite; Q1 = I,
//             no second ball, B = -I, b = 0 (p = n).
//   kCDT:     Q1 = I, q1 = 0; random A, a, B, b around a feasible point.
//   kZMatrix: Z-matrices Q0, Q1 (psd), diagonal A, B = -I, zero vectors.
//   kGeneric: Q1 positive definite, everything else random, feasible.
GeneratedInstance GenerateInstance(std::uint64_t seed, InstanceDims dims,
                                   InstanceClass cls);

ETRProblem RandomInstance(std::uint64_t seed, InstanceDims dims,
                          InstanceClass cls);

}  // namespace etr
