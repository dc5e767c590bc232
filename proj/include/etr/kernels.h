#pragma once

// Hot loops behind the copositivity tests and the sampling oracles. Each has
// a serial and an OpenMP path selected by Execution; reductions break ties by
// index so both paths return the same answer.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "etr/matcore.h"
#include "etr/parallel.h"

namespace etr::kernels {

// Largest order accepted by the subset enumerations below.
constexpr int kMaxSubsetOrder = 16;

struct OrthantEigenpair {
  std::uint32_t mask = 0;
  double eigenvalue = 0.0;
  Vector x;  // nonnegative, zero outside mask, unit norm
};

// First principal submatrix in (size, mask) order owning an eigenvector that
// is nonnegative after a sign flip, with eigenvalue below -threshold and
// x^T A x < -1e-12. Absent iff A is copositive (up to the threshold).
std::optional<OrthantEigenpair> FindNegativeOrthantEigenpair(
    const Matrix& a, double threshold, Execution exec);

// min { x^T A x : x >= 0, ||x||_2 = 1 } as the least eigenvalue over all
// principal submatrices that carries a nonnegative eigenvector.
double MinParetoEigenvalue(const Matrix& a, Vector* argmin, Execution exec);

// min { x^T A x : x >= 0, sum x = 1 } from the KKT systems of every face.
double SimplexMinimum(const Matrix& a, Vector* argmin, Execution exec);

struct SampleMin {
  double value = 0.0;
  Vector v;
};

// Minimum of v^T M v over num_samples random unit vectors in R^k_+ x R^m.
// Samples are drawn in blocks of 1024, each from its own generator seeded by
// (seed, block), so the result does not depend on the thread count.
SampleMin SampleConeMinimum(const Matrix& m, int k, long num_samples,
                            std::uint64_t seed, Execution exec);

// Indices of the best `keep` points of a tensor grid with `per_axis` points
// on [lo_i, hi_i] per coordinate, ordered by (value, index). Points where
// f returns +inf are skipped.
struct GridPoint {
  long index = 0;
  double value = 0.0;
  Vector x;
};
std::vector<GridPoint> GridBest(const Vector& lo, const Vector& hi,
                                int per_axis,
                                const std::function<double(const Vector&)>& f,
                                int keep, Execution exec);

}  // namespace etr::kernels
