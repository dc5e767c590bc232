#pragma once

// Derivative-free maximization over the nonnegative orthant, shared by the
// multiplier searches. Objectives may return -inf.

#include <cstdint>
#include <functional>
#include <vector>

#include "etr/matcore.h"
#include "etr/parallel.h"

namespace etr::internal {

struct MaximizeOptions {
  int polish_starts = 3;       // best distinct seeds that get polished
  int max_evaluations = 4000;  // per polish run
  double min_step = 1e-8;
  Execution exec = Execution::kParallel;
};

struct MaximizeResult {
  Vector x;
  double value = 0.0;
  int evaluations = 0;
  int finite_seeds = 0;
};

// Evaluates every seed (in parallel when allowed), then polishes the best
// few with compass search followed by a clipped Nelder-Mead pass. Only strict
// improvements are accepted, so ties resolve to the earliest seed.
MaximizeResult MaximizeNonneg(const std::function<double(const Vector&)>& f,
                              const std::vector<Vector>& seeds,
                              const MaximizeOptions& opt);

// {0, 1e-2, 1e-1, 1, 10, 100, 1000}^dim, stable-sorted by l1 norm.
std::vector<Vector> LevelGrid(int dim);

// Random nonnegative points, log-uniform in [1e-2, 1e3] per coordinate with
// a quarter of the coordinates zeroed.
std::vector<Vector> RandomSeeds(int dim, int count, std::uint64_t seed);

}  // namespace etr::internal
