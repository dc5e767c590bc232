#include "etr/copositivity.h"

#include <cmath>
#include <limits>
#include <string>

#include "etr/error.h"
#include "etr/kernels.h"

namespace etr {
namespace {

double MaxAbs(const Matrix& a) {
  return a.size() > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
}

CopositivityVerdict Yes() {
  return CopositivityVerdict{CopositivityStatus::kCopositive, std::nullopt,
                             std::nullopt};
}

// Normalizes w and keeps it only if it is a strict witness for a.
CopositivityVerdict WitnessVerdict(const Matrix& a, Vector w) {
  const double nrm = w.norm();
  if (nrm > 0) w /= nrm;
  if (nrm > 0 && w.dot(a * w) < -1e-12) {
    return CopositivityVerdict{CopositivityStatus::kNotCopositive, w,
                               std::nullopt};
  }
  return CopositivityVerdict{CopositivityStatus::kUnknown, std::nullopt,
                             std::nullopt};
}

void CheckShape(const SymMat& m, ConeSpec cone) {
  cone.Validate();
  if (m.order() != cone.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix order " + std::to_string(m.order()) +
                    " does not match cone dimension " +
                    std::to_string(cone.dim()));
  }
  if (cone.k > kMaxOrthantOrder) {
    throw Error(ErrorCode::kDimensionTooLarge,
                "orthant block of order " + std::to_string(cone.k) +
                    " exceeds the cap " + std::to_string(kMaxOrthantOrder));
  }
}

}  // namespace

void ConeSpec::Validate() const {
  if (k < 0 || m < 0 || k + m < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "cone needs k, m >= 0 and k + m >= 1");
  }
}

CopositivityVerdict IsCopositiveClassical(const SymMat& m,
                                          const CopositivityOptions& opt) {
  const int n = m.order();
  if (n > kMaxOrthantOrder) {
    throw Error(ErrorCode::kDimensionTooLarge,
                "classical copositivity is capped at order " +
                    std::to_string(kMaxOrthantOrder));
  }
  if (n == 0) return Yes();
  const Matrix& a = m.dense();
  if (a.minCoeff() >= 0.0) return Yes();
  const double threshold = opt.tol * (1.0 + MaxAbs(a));
  if (MinEigenvalue(m) >= -threshold) return Yes();
  const auto pair =
      kernels::FindNegativeOrthantEigenpair(a, threshold, opt.exec);
  if (!pair) return Yes();
  return WitnessVerdict(a, pair->x);
}

ConeReduction::ConeReduction(const SymMat& m, ConeSpec cone,
                             const CopositivityOptions& opt)
    : m_(m), cone_(cone), opt_(opt) {
  CheckShape(m, cone);
  const int k = cone.k;
  const int f = cone.m;
  const Matrix& full = m.dense();
  const Matrix r = full.topLeftCorner(k, k);
  if (f == 0) {
    hpinv_s_ = Matrix::Zero(0, k);
    schur_ = r;
    return;
  }
  const Matrix s = full.bottomLeftCorner(f, k);
  const SymMat h = m.Block(k, f);
  const EigDecomp e = Eig(h);
  if (e.values(0) < -opt.tol * (1.0 + MaxAbs(h.dense()))) {
    Vector w = Vector::Zero(k + f);
    w.tail(f) = e.vectors.col(0);
    free_failure_ = w;
    return;
  }
  const Matrix hp = PseudoInverse(h, opt.pinv_tol).dense();
  hpinv_s_ = hp * s;
  if (k > 0) {
    const Matrix residual = h.dense() * hpinv_s_ - s;
    if (residual.norm() > opt.kernel_tol * (1.0 + s.norm())) {
      // residual = -(I - H H^+) S, so its columns are minus the kernel parts.
      Eigen::Index j = 0;
      residual.colwise().norm().maxCoeff(&j);
      kernel_col_ = static_cast<int>(j);
      kernel_dir_ = -residual.col(j);
      free_failure_ = Vector::Zero(k + f);
      return;
    }
  }
  schur_ = r - s.transpose() * hpinv_s_;
  schur_ = (0.5 * (schur_ + schur_.transpose())).eval();
}

CopositivityVerdict ConeReduction::Test(double mu) const {
  const int k = cone_.k;
  const int f = cone_.m;
  if (mu != 0.0 && k == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "shifting the first entry needs an orthant coordinate");
  }
  Matrix shifted = m_.dense();
  if (k > 0) shifted(0, 0) -= mu;

  if (free_failure_ && kernel_col_ < 0) {
    return WitnessVerdict(shifted, *free_failure_);
  }
  if (free_failure_) {
    // v = (e_j, -t w): v^T M v = r - 2 t b + t^2 a with b = w^T S e_j > 0.
    const int j = kernel_col_;
    const Vector& w = kernel_dir_;
    const Matrix s = shifted.bottomLeftCorner(f, k);
    const double r = shifted(j, j);
    const double b = w.dot(s.col(j));
    const double a = w.dot(shifted.bottomRightCorner(f, f) * w);
    auto build = [&](double t) {
      Vector v = Vector::Zero(k + f);
      v(j) = 1.0;
      v.tail(f) = -t * w;
      return v;
    };
    CopositivityVerdict best = WitnessVerdict(shifted, build((std::abs(r) + 1.0) / b));
    if (a > 0) {
      const CopositivityVerdict alt = WitnessVerdict(shifted, build(b / a));
      if (!best.witness ||
          (alt.witness && alt.witness->dot(shifted * *alt.witness) <
                              best.witness->dot(shifted * *best.witness))) {
        best = alt;
      }
    }
    return best;
  }

  Matrix schur = schur_;
  if (k > 0) schur(0, 0) -= mu;
  const CopositivityVerdict inner =
      IsCopositiveClassical(SymMat(schur, 0.0), opt_);
  if (inner.status != CopositivityStatus::kNotCopositive) return inner;
  const Vector& z = *inner.witness;
  Vector v(k + f);
  v.head(k) = z;
  v.tail(f) = -hpinv_s_ * z;
  return WitnessVerdict(shifted, v);
}

CopositivityVerdict IsCopositiveCone(const SymMat& m, ConeSpec cone,
                                     const CopositivityOptions& opt) {
  return ConeReduction(m, cone, opt).Test(0.0);
}

CopositivityVerdict IsStrictlyCopositive(const SymMat& m, ConeSpec cone,
                                         const CopositivityOptions& opt) {
  CheckShape(m, cone);
  const int k = cone.k;
  const int f = cone.m;
  const Matrix& full = m.dense();
  const double threshold = opt.tol * (1.0 + MaxAbs(full));
  auto verdict = [&](double margin, const Vector& w) {
    const bool strict = margin > threshold;
    return CopositivityVerdict{
        strict ? CopositivityStatus::kCopositive
               : CopositivityStatus::kNotCopositive,
        strict ? std::nullopt : std::optional<Vector>(w.normalized()), margin};
  };

  double margin = std::numeric_limits<double>::infinity();
  Vector where;
  Matrix hpinv_s = Matrix::Zero(f, k);
  if (f > 0) {
    const SymMat h = m.Block(k, f);
    const EigDecomp e = Eig(h);
    margin = e.values(0);
    where = Vector::Zero(k + f);
    where.tail(f) = e.vectors.col(0);
    if (margin <= threshold) return verdict(margin, where);
    hpinv_s = PseudoInverse(h, opt.pinv_tol).dense() *
              full.bottomLeftCorner(f, k);
  }
  if (k > 0) {
    Matrix schur = full.topLeftCorner(k, k) -
                   full.bottomLeftCorner(f, k).transpose() * hpinv_s;
    schur = (0.5 * (schur + schur.transpose())).eval();
    Vector z;
    const double smin = kernels::SimplexMinimum(schur, &z, opt.exec);
    if (smin < margin) {
      margin = smin;
      where = Vector(k + f);
      where.head(k) = z;
      where.tail(f) = -hpinv_s * z;
    }
  }
  return verdict(margin, where);
}

double OrthantSphereMinimum(const SymMat& m, Execution exec) {
  return kernels::MinParetoEigenvalue(m.dense(), nullptr, exec);
}

double SimplexMinimum(const SymMat& m, Vector* argmin, Execution exec) {
  return kernels::SimplexMinimum(m.dense(), argmin, exec);
}

SymMat SigmaBlockMatrix(const SymMat& m, double sigma) {
  const int n = m.order();
  Matrix b = Matrix::Zero(2 * n + 1, 2 * n + 1);
  const Matrix id = Matrix::Identity(n, n);
  b.block(1, 1, n, n) = sigma * id;
  b.block(1, n + 1, n, n) = -sigma * id;
  b.block(n + 1, 1, n, n) = -sigma * id;
  b.block(n + 1, n + 1, n, n) = m.dense() + sigma * id;
  return SymMat(b, 0.0);
}

SigmaCertificate StrictMarginSigma(const SymMat& m) {
  const int n = m.order();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty matrix");
  if (!IsStrictlyCopositive(m, ConeSpec{n, 0}).copositive()) {
    throw Error(ErrorCode::kNotStrictlyCopositive,
                "matrix is not strictly copositive on the orthant");
  }
  SigmaCertificate cert;
  const EigDecomp e = Eig(m);
  cert.lambda_min = e.values(0);
  cert.rho = OrthantSphereMinimum(m);
  if (cert.lambda_min >= 0.0) {
    cert.sigma = 1.0;
  } else {
    // For ||x|| = 1 and ||x^-|| <= eps:
    // x^T M x >= rho (1 - eps^2) - 2 ||M|| eps, using (x^-)^T M x^- >= 0.
    const double norm = e.values.cwiseAbs().maxCoeff();
    double eps = 1.0;
    while (cert.rho * (1.0 - eps * eps) - 2.0 * norm * eps < 0.5 * cert.rho) {
      eps *= 0.5;
      if (eps < 1e-6) {
        throw Error(ErrorCode::kNotStrictlyCopositive,
                    "epsilon search reached its floor of 1e-6");
      }
    }
    cert.epsilon = eps;
    cert.sigma = std::max(1.0, -2.0 * cert.lambda_min / (eps * eps));
  }
  if (!IsCopositiveCone(SigmaBlockMatrix(m, cert.sigma), ConeSpec{n + 1, n})
           .copositive()) {
    throw Error(ErrorCode::kNumericalFailure,
                "sigma block matrix failed its copositivity check");
  }
  return cert;
}

}  // namespace etr
