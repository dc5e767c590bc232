#include "etr/relax.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "etr/error.h"
#include "etr/lp.h"
#include "search.h"

namespace etr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Scale(const Matrix& m) {
  return 1.0 + (m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
}

// inf of y^T H y - 2 d^T y + gamma over R^dim, or -inf.
double UnconstrainedInf(const Matrix& h, const Vector& d, double gamma,
                        Vector* argmin = nullptr) {
  if (h.rows() == 0) {
    if (argmin) *argmin = Vector(0);
    return gamma;
  }
  // One decomposition for both the sign test and the solve, so a slightly
  // negative eigenvalue can never enter the inverse.
  const EigDecomp e = Eig(SymMat(h, 0.0));
  const double cutoff = 1e-12 * Scale(h);
  if (e.values(0) < -cutoff) return -kInf;
  const Vector c = e.vectors.transpose() * d;
  Vector w = Vector::Zero(c.size());
  double range_residual = 0.0;
  for (int k = 0; k < c.size(); ++k) {
    if (e.values(k) > cutoff) {
      w(k) = c(k) / e.values(k);
    } else {
      range_residual += c(k) * c(k);
    }
  }
  // Dropping a component with |lambda_k| <= cutoff changes the value by up to
  // c_k^2 / cutoff. The dual searches end on the psd boundary, so that error
  // is kept below 1e-9 rather than tied to |d|.
  const double range_tol =
      std::max(std::sqrt(1e-9 * cutoff), 1e-14 * (1.0 + d.norm()));
  if (std::sqrt(range_residual) > range_tol) return -kInf;
  const Vector y = e.vectors * w;
  if (argmin) *argmin = y;
  return gamma - c.dot(w);
}

ConeSpec Upsilon(const StdProblem& s) { return ConeSpec{s.p + 1, s.n}; }

double ThetaSemiBisection(const StdProblem& s, const Eigen::Vector3d& u) {
  const SymMat m0 = LagrangianMatrix(s, u, 0.0);
  // The eigenvalue slack of the orthant test moves the accepted mu by about
  // tol / v_0^2 for the minimizing direction v, so the default tolerance is
  // too loose when the minimizer is far from the origin.
  CopositivityOptions opt;
  opt.tol = 1e-13;
  const ConeReduction red(m0, Upsilon(s), opt);
  if (red.FreeBlockFails()) return -kInf;
  // y = 0 is feasible, so Theta_semi(u) <= L(0) = m0(0, 0).
  const double hi0 = m0(0, 0);
  if (red.Test(hi0).copositive()) return hi0;
  auto mu_independent = [](const CopositivityVerdict& v) {
    return v.status == CopositivityStatus::kNotCopositive && (*v.witness)(0) == 0.0;
  };
  double hi = hi0;
  double lo = std::min(-1.0, hi0 - 1.0);
  while (true) {
    const CopositivityVerdict v = red.Test(lo);
    if (v.copositive()) break;
    if (mu_independent(v)) return -kInf;
    hi = lo;
    lo = hi0 - 2.0 * (hi0 - lo);
    if (hi0 - lo > 1e12) return -kInf;
  }
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // no representable midpoint
    if (red.Test(mid).copositive()) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Some point of {z0 + K w} whose first `ns` coordinates are nonnegative.
bool NonnegativeInAffine(const Vector& z0, const Matrix& k, int ns) {
  if (ns == 0) return true;
  LinearProgram lp = LinearProgram::Empty(static_cast<int>(k.cols()));
  lp.Aineq = -k.topRows(ns);
  lp.bineq = z0.head(ns);
  return LPFeasible(lp).status == LPStatus::kOptimal;
}

double ThetaSemiActiveSet(const StdProblem& s, const Eigen::Vector3d& u) {
  const int p = s.p;
  if (p > kMaxActiveSetSlacks) {
    throw Error(ErrorCode::kDimensionTooLarge,
                "active-set enumeration is capped at p = " +
                    std::to_string(kMaxActiveSetSlacks));
  }
  const QuadFunc q = LagrangianQuad(s, u, Vector());
  const Matrix& h = q.H.dense();
  const int n = s.n;
  double best = kInf;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    // Free variables: slacks in mask, then all x.
    std::vector<int> idx;
    for (int i = 0; i < p; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const int ns = static_cast<int>(idx.size());
    for (int j = 0; j < n; ++j) idx.push_back(p + j);
    const int dim = static_cast<int>(idx.size());
    Matrix hf(dim, dim);
    Vector df(dim);
    for (int a = 0; a < dim; ++a) {
      df(a) = q.d(idx[a]);
      for (int b = 0; b < dim; ++b) hf(a, b) = h(idx[a], idx[b]);
    }
    Vector z;
    const double val = UnconstrainedInf(hf, df, q.gamma, &z);
    if (val == -kInf) continue;
    if (ns > 0 && z.head(ns).minCoeff() < -1e-12) {
      // The minimizers form z + ker(H_F); look for a sign-feasible one.
      const Matrix ker = dim > 0 ? KernelBasis(SymMat(hf, 0.0)) : Matrix(0, 0);
      if (ker.cols() == 0 || !NonnegativeInAffine(z, ker, ns)) continue;
    }
    best = std::min(best, val);
  }
  if (best == kInf) return -kInf;
  // A bounded quadratic attains its infimum on a polyhedron, so the best
  // candidate is exact unless L is unbounded below; copositivity decides.
  const double shift = best - 1e-9 * (1.0 + std::abs(best));
  const SymMat m = LagrangianMatrix(s, u, shift);
  if (!IsCopositiveCone(m, Upsilon(s)).copositive()) return -kInf;
  return best;
}

internal::MaximizeOptions MaxOptions(const SearchConfig& cfg) {
  internal::MaximizeOptions opt;
  opt.polish_starts = cfg.polish_starts;
  opt.max_evaluations = cfg.max_evaluations;
  opt.exec = cfg.exec;
  return opt;
}

}  // namespace

std::string BoundKindName(BoundKind kind) {
  switch (kind) {
    case BoundKind::kLD:
      return "LD";
    case BoundKind::kSemi:
      return "SEMI";
    case BoundKind::kCOP:
      return "COP";
    case BoundKind::kHierarchy:
      return "HIERARCHY";
  }
  return "UNKNOWN";
}

double ThetaFull(const StdProblem& s, const Eigen::Vector3d& u,
                 const Vector& v) {
  if (v.size() > 0 && (v.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "slack multipliers must be >= 0");
  }
  const QuadFunc q = LagrangianQuad(s, u, v);
  return UnconstrainedInf(q.H.dense(), q.d, q.gamma);
}

double ThetaSemi(const StdProblem& s, const Eigen::Vector3d& u,
                 SemiMethod method) {
  return method == SemiMethod::kBisection ? ThetaSemiBisection(s, u)
                                          : ThetaSemiActiveSet(s, u);
}

Bound ZLd(const StdProblem& s, const SearchConfig& cfg) {
  const int p = s.p;
  const int dim = 3 + p;
  auto f = [&](const Vector& w) {
    return ThetaFull(s, Eigen::Vector3d(w.head(3)), w.tail(p));
  };
  std::vector<Vector> seeds = cfg.extra_seeds;
  for (const Vector& g : internal::LevelGrid(3)) {
    Vector w = Vector::Zero(dim);
    w.head(3) = g;
    seeds.push_back(w);
  }
  for (const Vector& r : internal::RandomSeeds(dim, cfg.random_restarts, cfg.seed)) {
    seeds.push_back(r);
  }
  const internal::MaximizeResult res =
      internal::MaximizeNonneg(f, seeds, MaxOptions(cfg));
  Bound b;
  b.kind = BoundKind::kLD;
  b.value = res.value;
  b.trace.evaluations = res.evaluations;
  b.trace.seeds = static_cast<int>(seeds.size());
  b.trace.finite_seeds = res.finite_seeds;
  if (res.value == -kInf) {
    b.trace.notes.push_back(
        "every structured and random probe returned -inf (heuristic)");
  } else {
    b.multipliers = Multipliers{Eigen::Vector3d(res.x.head(3)), res.x.tail(p)};
    b.certified = true;  // Theta_full is a closed form at these multipliers
  }
  return b;
}

Bound ZCop(const StdProblem& s, const SearchConfig& cfg) {
  // The search drifts to large penalty weights u3, where the bisection's
  // tolerance overstates Theta_semi; the exact enumeration does not.
  const bool exact = s.p <= kMaxActiveSetSlacks;
  auto f = [&](const Vector& u) {
    const Eigen::Vector3d w(u);
    return exact ? ThetaSemiActiveSet(s, w) : ThetaSemiBisection(s, w);
  };
  std::vector<Vector> seeds = cfg.extra_seeds;
  for (const Vector& g : internal::LevelGrid(3)) seeds.push_back(g);
  for (const Vector& r : internal::RandomSeeds(3, cfg.random_restarts, cfg.seed)) {
    seeds.push_back(r);
  }
  const internal::MaximizeResult res =
      internal::MaximizeNonneg(f, seeds, MaxOptions(cfg));
  Bound b;
  b.kind = BoundKind::kCOP;
  b.value = res.value;
  b.trace.evaluations = res.evaluations;
  b.trace.seeds = static_cast<int>(seeds.size());
  b.trace.finite_seeds = res.finite_seeds;
  if (res.value == -kInf) {
    b.trace.notes.push_back("no probe found a copositive relaxation matrix");
    return b;
  }
  const Eigen::Vector3d u(res.x);
  b.multipliers = Multipliers{u, Vector::Zero(s.p)};
  b.certified =
      IsCopositiveCone(LagrangianMatrix(s, u, res.value), Upsilon(s)).copositive();
  if (!b.certified) {
    b.trace.notes.push_back("final copositivity re-check failed");
  }
  return b;
}

ChainReport ChainCheck(const StdProblem& s, double zstar, double tol,
                       const SearchConfig& cfg) {
  ChainReport r;
  r.zstar = zstar;
  const Bound ld = ZLd(s, cfg);
  SearchConfig cop_cfg = cfg;
  // Theta_semi(u) >= Theta_full(u, v) for v >= 0, so seeding with z_LD's u
  // keeps the computed chain consistent even when the search is heuristic.
  if (ld.multipliers) {
    cop_cfg.extra_seeds.insert(cop_cfg.extra_seeds.begin(), Vector(ld.multipliers->u));
  }
  r.ld = ld.value;
  r.cop = ZCop(s, cop_cfg).value;
  r.holds = r.ld <= r.cop + tol && r.cop <= zstar + tol;
  return r;
}

}  // namespace etr
