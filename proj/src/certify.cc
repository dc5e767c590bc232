#include "etr/certify.h"

#include <algorithm>
#include <cmath>

#include "etr/copositivity.h"
#include "etr/error.h"
#include "etr/lp.h"
#include "projection.h"

namespace etr {
namespace {

void RequireCdt(const ETRProblem& p) {
  p.Validate();
  if (!p.IsCDT()) {
    throw Error(ErrorCode::kNotCDT, "expected Q1 = I and q1 = 0");
  }
}

double MaxAbs(const Matrix& m) {
  return m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
}

SymMat ShiftedQ0(const ETRProblem& p) {
  const double lmin = MinEigenvalue(p.Q0);
  return p.Q0 - SymMat::Identity(p.n) * lmin;
}

// Orthonormal basis of ker [Q0+; A].
Matrix KernelOfStack(const ETRProblem& p) {
  Matrix m(p.n + p.ell(), p.n);
  m.topRows(p.n) = ShiftedQ0(p).dense();
  m.bottomRows(p.ell()) = p.A;
  return KernelBasis(Gram(m));
}

Certificate Optimality(const SymMat& sbar, ConeSpec cone, double value) {
  Certificate cert;
  cert.slack_matrix = sbar;
  cert.value = value;
  const CopositivityVerdict v = IsCopositiveCone(sbar, cone);
  if (v.copositive()) {
    cert.status = CertStatus::kGlobalOptimal;
    cert.notes.push_back("slack matrix copositive");
  } else {
    cert.status = CertStatus::kInconclusive;
    if (v.witness) cert.witness = *v.witness;
    cert.notes.push_back(v.status == CopositivityStatus::kUnknown
                             ? "copositivity test inconclusive"
                             : "slack matrix not copositive");
  }
  return cert;
}

Certificate NotKKT() {
  Certificate cert;
  cert.status = CertStatus::kInconclusive;
  cert.notes.push_back("not a generalized KKT pair");
  return cert;
}

}  // namespace

std::string CertStatusName(CertStatus status) {
  switch (status) {
    case CertStatus::kGlobalOptimal:
      return "GlobalOptimal";
    case CertStatus::kExactRelaxation:
      return "ExactRelaxation";
    case CertStatus::kConditionHolds:
      return "ConditionHolds";
    case CertStatus::kConditionFails:
      return "ConditionFails";
    case CertStatus::kInconclusive:
      return "Inconclusive";
  }
  return "Unknown";
}

KKTResiduals KKTResidualsAt(const StdProblem& s, const KKTPair& pair) {
  if (pair.x.size() != s.n) {
    throw Error(ErrorCode::kDimensionMismatch, "KKT point has wrong dimension");
  }
  if (pair.v.size() != 0 && pair.v.size() != s.p) {
    throw Error(ErrorCode::kDimensionMismatch,
                "v must have one entry per linear constraint");
  }
  const Vector y = s.Lift(pair.x);
  const Vector slack = y.head(s.p);
  KKTResiduals r;
  const double f1 = Evaluate(s.fbar[1], y);
  const double f2 = Evaluate(s.fbar[2], y);
  const double f3 = Evaluate(s.fbar[3], y);
  r.feasibility = std::max({0.0, f1, f2});
  if (s.p > 0) r.feasibility = std::max(r.feasibility, -slack.minCoeff());

  const QuadFunc lag = LagrangianQuad(s, pair.u, pair.v);
  r.stationarity = lag.Gradient(y).cwiseAbs().maxCoeff();

  r.complementarity = std::max({std::abs(pair.u(0) * f1), std::abs(pair.u(1) * f2),
                                std::abs(pair.u(2) * f3)});
  if (pair.v.size() > 0) {
    r.complementarity =
        std::max(r.complementarity, pair.v.cwiseProduct(slack).cwiseAbs().maxCoeff());
  }
  return r;
}

bool CheckKKT(const StdProblem& s, const KKTPair& pair, double tol) {
  const KKTResiduals r = KKTResidualsAt(s, pair);
  const double v_scale = pair.v.size() > 0 ? pair.v.cwiseAbs().maxCoeff() : 0.0;
  const double scale =
      1.0 + MaxAbs(LagrangianMatrix(s, pair.u, 0.0).dense()) + v_scale;
  return r.feasibility <= tol * scale && r.stationarity <= tol * scale &&
         r.complementarity <= tol * scale;
}

Certificate CertifyGlobal(const StdProblem& s, const KKTPair& pair,
                          double kkt_tol) {
  if (!CheckKKT(s, pair, kkt_tol)) return NotKKT();
  const double value = Evaluate(s.fbar[0], s.Lift(pair.x));
  return Optimality(LagrangianMatrix(s, pair.u, value),
                    ConeSpec{s.p + 1, s.n}, value);
}

SymMat CdtCorollaryMatrix(const ETRProblem& p, const Eigen::Vector3d& u,
                          double mu) {
  RequireCdt(p);
  if (!(u.array() >= 0.0).all()) {
    throw Error(ErrorCode::kInvalidArgument, "multipliers u must be nonnegative");
  }
  const int n = p.n;
  const int m = p.p();
  const Matrix& a_mat = p.A;
  const Matrix& b_mat = p.B;
  Matrix out = Matrix::Zero(1 + m + n, 1 + m + n);
  out(0, 0) = -u(0) + u(1) * (p.a.squaredNorm() - 1.0) + u(2) * p.b.squaredNorm() - mu;
  const Vector top_x = p.q0 - u(1) * a_mat.transpose() * p.a - u(2) * b_mat.transpose() * p.b;
  out.block(0, 1, 1, m) = -u(2) * p.b.transpose();
  out.block(0, 1 + m, 1, n) = top_x.transpose();
  out.block(1, 0, m, 1) = -u(2) * p.b;
  out.block(1 + m, 0, n, 1) = top_x;
  out.block(1, 1, m, m) = u(2) * Matrix::Identity(m, m);
  out.block(1, 1 + m, m, n) = u(2) * b_mat;
  out.block(1 + m, 1, n, m) = u(2) * b_mat.transpose();
  out.block(1 + m, 1 + m, n, n) = p.Q0.dense() + u(0) * Matrix::Identity(n, n) +
                                  u(1) * a_mat.transpose() * a_mat +
                                  u(2) * b_mat.transpose() * b_mat;
  return SymMat(Matrix(0.5 * (out + out.transpose())), 1e-8);
}

Certificate CertifyCdtCorollary(const ETRProblem& p, const KKTPair& pair,
                                double kkt_tol) {
  RequireCdt(p);
  const StdProblem s = Standardize(p);
  if (!CheckKKT(s, pair, kkt_tol)) return NotKKT();
  const double value = p.Objective(pair.x);
  return Optimality(CdtCorollaryMatrix(p, pair.u, value),
                    ConeSpec{p.p() + 1, p.n}, value);
}

Certificate CdtLpCondition(const ETRProblem& p, KernelSign sign) {
  RequireCdt(p);
  const int n = p.n;
  const Matrix k = KernelOfStack(p);
  Certificate cert;
  cert.status = CertStatus::kConditionFails;
  cert.notes.push_back(sign == KernelSign::kSound ? "sign: q0^T d <= 0"
                                                  : "sign: q0^T d >= 0 (as printed)");
  const int r = static_cast<int>(k.cols());
  if (r == 0) {
    cert.notes.push_back("kernel is trivial");
    return cert;
  }
  const double flip = sign == KernelSign::kSound ? 1.0 : -1.0;
  // d = K w; rows: B d <= 0, flip q0^T d <= 0, -1 <= d <= 1.
  LinearProgram lp = LinearProgram::Empty(r);
  lp.Aineq.resize(p.p() + 1 + 2 * n, r);
  lp.Aineq.topRows(p.p()) = p.B * k;
  lp.Aineq.row(p.p()) = flip * (p.q0.transpose() * k);
  lp.Aineq.middleRows(p.p() + 1, n) = k;
  lp.Aineq.bottomRows(n) = -k;
  lp.bineq = Vector::Zero(p.p() + 1 + 2 * n);
  lp.bineq.tail(2 * n).setOnes();
  for (int i = 0; i < n; ++i) {
    for (double target : {1.0, -1.0}) {
      lp.Aeq = k.row(i);
      lp.beq = Vector::Constant(1, target);
      const LPOutcome out = LPFeasible(lp);
      if (out.status != LPStatus::kOptimal) continue;
      Vector d = k * *out.x;
      d /= d.cwiseAbs().maxCoeff();
      cert.status = CertStatus::kConditionHolds;
      cert.witness = d;
      cert.notes.push_back("found with d_" + std::to_string(i) +
                           (target > 0 ? " = +1" : " = -1"));
      return cert;
    }
  }
  return cert;
}

Certificate CdtLpConditionSumNormalized(const ETRProblem& p) {
  RequireCdt(p);
  const Matrix k = KernelOfStack(p);
  Certificate cert;
  cert.status = CertStatus::kConditionFails;
  cert.notes.push_back("single LP, sum(d) = 1, sign as printed");
  const int r = static_cast<int>(k.cols());
  if (r == 0) {
    cert.notes.push_back("kernel is trivial");
    return cert;
  }
  LinearProgram lp = LinearProgram::Empty(r);
  lp.Aeq = Matrix::Ones(1, p.n) * k;
  lp.beq = Vector::Ones(1);
  lp.Aineq.resize(p.p() + 1, r);
  lp.Aineq.topRows(p.p()) = p.B * k;
  lp.Aineq.row(p.p()) = -(p.q0.transpose() * k);
  lp.bineq = Vector::Zero(p.p() + 1);
  const LPOutcome out = LPFeasible(lp);
  if (out.status == LPStatus::kOptimal) {
    cert.status = CertStatus::kConditionHolds;
    cert.witness = k * *out.x;
  }
  return cert;
}

bool DimensionCondition(const ETRProblem& p) {
  RequireCdt(p);
  if (MaxAbs(p.A) != 0.0 || MaxAbs(p.a) != 0.0) {
    throw Error(ErrorCode::kNotApplicable,
                "the dimension condition needs A = 0 and a = 0");
  }
  const Vector ev = Eig(p.Q0).values;
  const double cutoff = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int ker = 0;
  while (ker < p.n && ev(ker) - ev(0) <= cutoff) ++ker;
  const int rank_b = p.p() > 0 ? NumericalRank(Gram(p.B)) : 0;
  return ker >= rank_b + 1;
}

std::optional<Vector> ApSphereMinimizer(const ETRProblem& p, double tol) {
  RequireCdt(p);
  const int n = p.n;
  const SymMat q0p = ShiftedQ0(p);
  const Matrix h = q0p.dense();
  const std::vector<internal::Projector> sets = internal::FeasibleSetProjectors(p);
  auto project = [&](const Vector& z) { return internal::Dykstra(sets, z); };

  Vector x = project(Vector::Zero(n));
  if (!IsFeasible(p, x, 1e-7)) {
    throw Error(ErrorCode::kInfeasibleProblem, "no feasible point found");
  }
  const double lip = 2.0 * (Eig(q0p).values(n - 1) + 1.0);
  for (int it = 0; it < 20000; ++it) {
    const Vector g = 2.0 * (h * x + p.q0);
    const Vector next = project(x - g / lip);
    const double move = (next - x).norm();
    x = next;
    if (move * lip <= 1e-9) break;
  }
  auto objective = [&](const Vector& z) { return q0p.QuadraticForm(z) + 2.0 * p.q0.dot(z); };
  if (x.norm() >= 1.0 - tol) return x;

  // Minimizers form a face of x + ker[Q0+; A]; walk to the sphere along a
  // kernel direction that keeps the linear part from increasing.
  const double fx = objective(x);
  const Matrix k = KernelOfStack(p);
  std::vector<Vector> dirs;
  for (int j = 0; j < k.cols(); ++j) {
    dirs.push_back(k.col(j));
    dirs.push_back(-k.col(j));
  }
  const Certificate lp = CdtLpCondition(p);
  if (lp.witness) dirs.push_back(lp.witness->normalized());
  for (const Vector& v : dirs) {
    const double xv = x.dot(v);
    const double t = -xv + std::sqrt(xv * xv + 1.0 - x.squaredNorm());
    const Vector z = x + t * v;
    if (!IsFeasible(p, z, 1e-9)) continue;
    if (objective(z) <= fx + 1e-9 * (1.0 + std::abs(fx))) return z;
  }
  return std::nullopt;
}

bool OmegaConvexitySufficient(const ETRProblem& p) {
  p.Validate();
  auto is_z = [](const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (i != j && m(i, j) > 0.0) return false;
      }
    }
    return true;
  };
  if (!is_z(p.Q0.dense()) || !is_z(p.Q1.dense()) || !is_z(p.A.transpose() * p.A)) {
    return false;
  }
  if (p.p() != p.n || p.B != -Matrix::Identity(p.n, p.n)) return false;
  return MaxAbs(p.q0) == 0.0 && MaxAbs(p.q1) == 0.0 && MaxAbs(p.a) == 0.0 &&
         MaxAbs(p.b) == 0.0;
}

std::optional<Eigen::Vector3d> OmegaClosednessSufficient(const ETRProblem& p,
                                                         int grid_resolution) {
  p.Validate();
  if (grid_resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid resolution must be >= 1");
  }
  const Matrix g = p.A.transpose() * p.A;
  auto lambda = [&](const Eigen::Vector3d& tau) {
    const Matrix m = tau(0) * p.Q0.dense() + tau(1) * p.Q1.dense() + tau(2) * g;
    return MinEigenvalue(SymMat(Matrix(0.5 * (m + m.transpose())), 1e-8));
  };
  constexpr double kThreshold = 1e-8;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
    if (lambda(e) > kThreshold) return e;
  }
  Eigen::Vector3d best(1, 0, 0);
  double best_val = lambda(best);
  const int r = grid_resolution;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; i + j <= r; ++j) {
      const Eigen::Vector3d tau(double(i) / r, double(j) / r, double(r - i - j) / r);
      const double val = lambda(tau);
      if (val > best_val) {
        best_val = val;
        best = tau;
      }
    }
  }
  // Compass polish over (tau0, tau1) with tau2 = 1 - tau0 - tau1.
  for (double step = 1.0 / r; step > 1e-6 && best_val <= kThreshold; step *= 0.5) {
    bool moved = true;
    while (moved && best_val <= kThreshold) {
      moved = false;
      for (const auto& [d0, d1] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}) {
        Eigen::Vector3d tau = best;
        tau(0) += d0 * step;
        tau(1) += d1 * step;
        tau(2) = 1.0 - tau(0) - tau(1);
        if ((tau.array() < 0.0).any()) continue;
        const double val = lambda(tau);
        if (val > best_val) {
          best_val = val;
          best = tau;
          moved = true;
        }
      }
    }
  }
  if (best_val > kThreshold) return best;
  return std::nullopt;
}

}  // namespace etr
