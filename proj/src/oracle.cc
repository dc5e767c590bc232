#include "etr/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "etr/error.h"
#include "etr/kernels.h"
#include "projection.h"

namespace etr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int AutoPointsPerAxis(int n) {
  static const int kPoints[] = {2001, 401, 81, 31};
  return kPoints[n - 1];
}

// Half-widths of the bounding box of {x^T Q x + 2 l^T x <= rhs} for Q > 0.
// Returns false when Q is not positive definite.
bool EllipsoidBox(const SymMat& q, const Vector& lin, double rhs, Vector* lo,
                  Vector* hi) {
  const EigDecomp e = Eig(q);
  const double scale = 1.0 + e.values.cwiseAbs().maxCoeff();
  if (e.values(0) <= 1e-9 * scale) return false;
  const Matrix qi =
      e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose();
  const Vector c = -qi * lin;
  const double r2 = rhs + lin.dot(qi * lin);
  if (r2 < 0.0) {
    throw Error(ErrorCode::kInfeasibleProblem, "an ellipsoid constraint is empty");
  }
  const Vector half =
      (r2 * qi.diagonal().array()).sqrt().matrix() * (1.0 + 1e-9) +
      Vector::Constant(c.size(), 1e-12);
  *lo = lo->cwiseMax(c - half);
  *hi = hi->cwiseMin(c + half);
  return true;
}

struct Polished {
  Vector x;
  double value = kInf;
  int steps = 0;
};

Polished Polish(const ETRProblem& p,
                const std::vector<internal::Projector>& sets, Vector x,
                int max_iters) {
  const double lip = 2.0 * (1.0 + Eig(p.Q0).values.cwiseAbs().maxCoeff());
  double fx = p.Objective(x);
  Polished out{x, fx, 0};
  for (int it = 0; it < max_iters; ++it) {
    const Vector g = 2.0 * (p.Q0.dense() * x + p.q0);
    double t = 1.0 / lip;
    bool moved = false;
    for (int back = 0; back < 30; ++back, t *= 0.5) {
      const Vector y = internal::Dykstra(sets, x - t * g);
      if (!IsFeasible(p, y, 1e-9)) continue;
      const double fy = p.Objective(y);
      if (fy < fx - 1e-15 * (1.0 + std::abs(fx))) {
        moved = (y - x).norm() > 1e-13;
        x = y;
        fx = fy;
        ++out.steps;
        break;
      }
    }
    if (!moved) break;
  }
  out.x = x;
  out.value = fx;
  return out;
}

}  // namespace

OracleResult BruteGlobalMin(const ETRProblem& p, const GridConfig& cfg) {
  p.Validate();
  const int n = p.n;
  if (n > 4) {
    throw Error(ErrorCode::kDimensionTooLarge,
                "the grid oracle handles n <= 4, got n = " + std::to_string(n));
  }
  OracleResult res;
  res.points_per_axis =
      cfg.points_per_axis > 0 ? cfg.points_per_axis : AutoPointsPerAxis(n);
  res.box_lo = Vector::Constant(n, -kInf);
  res.box_hi = Vector::Constant(n, kInf);
  bool bounded = EllipsoidBox(p.Q1, p.q1, 1.0, &res.box_lo, &res.box_hi);
  if (p.ell() > 0) {
    bounded |= EllipsoidBox(Gram(p.A), Vector(-p.A.transpose() * p.a),
                            1.0 - p.a.squaredNorm(), &res.box_lo, &res.box_hi);
  }
  if (!bounded) {
    res.box_lo = Vector::Constant(n, -cfg.radius);
    res.box_hi = Vector::Constant(n, cfg.radius);
    res.warnings.push_back("no ellipsoid bounds the feasible set; searching [-" +
                           std::to_string(cfg.radius) + ", " +
                           std::to_string(cfg.radius) + "]^n");
  }
  if ((res.box_lo.array() > res.box_hi.array()).any()) {
    throw Error(ErrorCode::kInfeasibleProblem, "the ellipsoid boxes do not meet");
  }

  auto value = [&](const Vector& x) {
    return IsFeasible(p, x, 1e-10) ? p.Objective(x) : kInf;
  };
  const std::vector<kernels::GridPoint> best = kernels::GridBest(
      res.box_lo, res.box_hi, res.points_per_axis, value, cfg.keep, cfg.exec);

  const std::vector<internal::Projector> sets = internal::FeasibleSetProjectors(p);
  std::vector<Vector> starts;
  for (const auto& g : best) starts.push_back(g.x);
  if (starts.empty()) {
    const Vector probe = internal::Dykstra(sets, 0.5 * (res.box_lo + res.box_hi));
    if (!IsFeasible(p, probe, 1e-8)) {
      throw Error(ErrorCode::kInfeasibleProblem,
                  "no feasible grid point and the projection probe failed");
    }
    res.warnings.push_back("no feasible grid point; polishing a projected probe");
    starts.push_back(probe);
  }

  std::vector<Polished> polished(starts.size());
  const long count = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic) num_threads(ThreadCount()) \
    if (cfg.exec == Execution::kParallel)
  for (long i = 0; i < count; ++i) {
    polished[i] = Polish(p, sets, starts[i], cfg.polish_iters);
  }
  long arg = 0;
  for (long i = 0; i < count; ++i) {
    res.polish_iters += polished[i].steps;
    if (polished[i].value < polished[arg].value) arg = i;
  }
  res.minimizer = polished[arg].x;
  res.value = polished[arg].value;
  return res;
}

std::string InstanceClassName(InstanceClass c) {
  switch (c) {
    case InstanceClass::kGeneric:
      return "generic";
    case InstanceClass::kCDT:
      return "cdt";
    case InstanceClass::kEP:
      return "ep";
    case InstanceClass::kZMatrix:
      return "zmatrix";
  }
  return "unknown";
}

namespace {

Matrix Gaussian(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

Vector UnitVector(std::mt19937_64& rng, int n) {
  Vector v = Gaussian(rng, n, 1);
  return v / v.norm();
}

// a and b placed so that w is strictly feasible for the ball ||Aw - a|| <= 1
// and the polyhedron Bw <= b.
void PlaceAround(std::mt19937_64& rng, ETRProblem* p, const Vector& w,
                 bool place_a) {
  std::uniform_real_distribution<double> unif(0.0, 0.5);
  if (place_a && p->ell() > 0) {
    p->a = p->A * w + unif(rng) * UnitVector(rng, p->ell());
  }
  if (p->p() > 0) {
    Vector slack(p->p());
    for (int i = 0; i < p->p(); ++i) slack(i) = unif(rng);
    p->b = p->B * w + slack;
  }
}

}  // namespace

GeneratedInstance GenerateInstance(std::uint64_t seed, InstanceDims dims,
                                   InstanceClass cls) {
  const int n = dims.n;
  if (n < 1 || dims.p < 0 || dims.ell < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad instance dimensions");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GeneratedInstance out;
  ETRProblem& p = out.problem;
  p = ETRProblem::Empty(n);

  switch (cls) {
    case InstanceClass::kEP: {
      if (n < 2) {
        throw Error(ErrorCode::kInvalidArgument,
                    "an indefinite nonnegative matrix needs n >= 2");
      }
      Matrix q(n, n);
      do {
        for (int i = 0; i < n; ++i) {
          q(i, i) = 0.2 + 0.8 * unif(rng);
          for (int j = 0; j < i; ++j) q(i, j) = q(j, i) = 2.0 * unif(rng);
        }
      } while (MinEigenvalue(SymMat(q)) > -1e-3);
      p.Q0 = SymMat(q);
      p.Q1 = SymMat::Identity(n);
      p.B = -Matrix::Identity(n, n);
      p.b = Vector::Zero(n);
      out.witness = Vector::Zero(n);
      break;
    }
    case InstanceClass::kCDT:
    case InstanceClass::kGeneric: {
      Vector w = UnitVector(rng, n) * (0.5 * unif(rng));
      if (cls == InstanceClass::kCDT) {
        const int k = std::clamp(dims.kernel_dim, 1, n);
        const Eigen::HouseholderQR<Matrix> qr(Gaussian(rng, n, n));
        const Matrix v = qr.householderQ();
        Vector lam(n);
        const double lmin = -0.5 - 1.5 * unif(rng);
        for (int i = 0; i < n; ++i) {
          lam(i) = i < k ? lmin : lmin + 0.3 + 3.0 * unif(rng);
        }
        p.Q0 = SymMat(Matrix(v * lam.asDiagonal() * v.transpose()), 1e-6);
        p.Q1 = SymMat::Identity(n);
      } else {
        const Matrix g = Gaussian(rng, n, n);
        p.Q0 = SymMat(Matrix(0.5 * (g + g.transpose())));
        const Matrix f = Gaussian(rng, n, n);
        p.Q1 = SymMat(Matrix(f * f.transpose() / n + 0.5 * Matrix::Identity(n, n)), 1e-6);
        p.q1 = Gaussian(rng, n, 1, 0.2);
        while (p.Ball1(w) > -0.1) w *= 0.5;
      }
      p.q0 = Gaussian(rng, n, 1, 0.5);
      const bool zero_a = cls == InstanceClass::kCDT && dims.zero_A;
      p.A = zero_a ? Matrix::Zero(dims.ell, n) : Gaussian(rng, dims.ell, n);
      p.a = Vector::Zero(dims.ell);
      p.B = Gaussian(rng, dims.p, n);
      p.b = Vector::Zero(dims.p);
      PlaceAround(rng, &p, w, /*place_a=*/!zero_a);
      out.witness = w;
      break;
    }
    case InstanceClass::kZMatrix: {
      Matrix q0(n, n);
      Matrix q1(n, n);
      for (int i = 0; i < n; ++i) {
        q0(i, i) = 2.0 * unif(rng) - 1.0;
        for (int j = 0; j < i; ++j) {
          q0(i, j) = q0(j, i) = -unif(rng);
          q1(i, j) = q1(j, i) = -0.5 * unif(rng);
        }
      }
      for (int i = 0; i < n; ++i) {
        q1(i, i) = 0.0;
        q1(i, i) = q1.row(i).cwiseAbs().sum() + 0.2 + 0.8 * unif(rng);
      }
      p.Q0 = SymMat(q0);
      p.Q1 = SymMat(q1);
      Vector diag(n);
      for (int i = 0; i < n; ++i) diag(i) = 0.5 + unif(rng);
      p.A = diag.asDiagonal();
      p.a = Vector::Zero(n);
      p.B = -Matrix::Identity(n, n);
      p.b = Vector::Zero(n);
      out.witness = Vector::Zero(n);
      break;
    }
  }
  p.Validate();
  if (!IsFeasible(p, out.witness)) {
    throw Error(ErrorCode::kNumericalFailure, "generated witness is infeasible");
  }
  return out;
}

ETRProblem RandomInstance(std::uint64_t seed, InstanceDims dims,
                          InstanceClass cls) {
  return GenerateInstance(seed, dims, cls).problem;
}

}  // namespace etr
