#include "etr/matcore.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "etr/error.h"
#include "etr/quadratic.h"

namespace etr {
namespace {

constexpr int kMaxJacobiSweeps = 100;

void CheckFinite(const Matrix& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix has non-finite entries");
  }
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kNumericalFailure:
      return "NumericalFailure";
    case ErrorCode::kDimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorCode::kNotStrictlyCopositive:
      return "NotStrictlyCopositive";
    case ErrorCode::kNotCDT:
      return "NotCDT";
    case ErrorCode::kNotApplicable:
      return "NotApplicable";
    case ErrorCode::kInfeasibleProblem:
      return "InfeasibleProblem";
    case ErrorCode::kCombinatorialBlowup:
      return "CombinatorialBlowup";
    case ErrorCode::kParseError:
      return "ParseError";
  }
  return "Unknown";
}

SymMat::SymMat(const Matrix& m, double asymmetry_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "symmetric matrix must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  CheckFinite(m);
  const double scale = 1.0 + (m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
  const double asym =
      m.size() > 0 ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > asymmetry_tol * scale) {
    std::ostringstream msg;
    msg << "matrix asymmetry " << asym << " exceeds tolerance "
        << asymmetry_tol * scale;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMat SymMat::Zero(int order) {
  return SymMat(Matrix::Zero(order, order), Trusted{});
}

SymMat SymMat::Identity(int order) {
  return SymMat(Matrix::Identity(order, order), Trusted{});
}

SymMat SymMat::Diagonal(const Vector& diag) {
  CheckFinite(diag);
  return SymMat(Matrix(diag.asDiagonal()), Trusted{});
}

SymMat SymMat::Block(int start, int size) const {
  return SymMat(Matrix(m_.block(start, start, size, size)), Trusted{});
}

SymMat SymMat::operator+(const SymMat& other) const {
  if (order() != other.order()) {
    throw Error(ErrorCode::kDimensionMismatch, "SymMat sum order mismatch");
  }
  return SymMat(Matrix(m_ + other.m_), Trusted{});
}

SymMat SymMat::operator-(const SymMat& other) const {
  if (order() != other.order()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "SymMat difference order mismatch");
  }
  return SymMat(Matrix(m_ - other.m_), Trusted{});
}

SymMat SymMat::operator*(double s) const {
  return SymMat(Matrix(m_ * s), Trusted{});
}

EigDecomp Eig(const SymMat& m) {
  const int n = m.order();
  Matrix a = m.dense();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();

  bool converged = (n <= 1 || scale == 0.0);
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) {
      converged = true;
      break;
    }
    int rotations = 0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        ++rotations;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (rotations == 0) converged = true;
  }
  if (!converged) {
    throw Error(ErrorCode::kNumericalFailure,
                "Jacobi eigendecomposition did not converge");
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });
  EigDecomp out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(perm[k], perm[k]);
    out.vectors.col(k) = v.col(perm[k]);
  }
  return out;
}

double MinEigenvalue(const SymMat& m) {
  if (m.order() == 0) return 0.0;
  return Eig(m).values(0);
}

SymMat PseudoInverse(const SymMat& m, double tol) {
  if (!(tol > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "pinv tolerance must be > 0");
  }
  const int n = m.order();
  if (n == 0) return m;
  const EigDecomp e = Eig(m);
  const double cutoff = tol * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  Vector inv(n);
  for (int k = 0; k < n; ++k) {
    inv(k) = std::abs(e.values(k)) > cutoff ? 1.0 / e.values(k) : 0.0;
  }
  const Matrix p = e.vectors * inv.asDiagonal() * e.vectors.transpose();
  return SymMat(Matrix(0.5 * (p + p.transpose())), 1.0);
}

bool IsPsd(const SymMat& m, double tol) {
  if (tol < 0) {
    throw Error(ErrorCode::kInvalidArgument, "psd tolerance must be >= 0");
  }
  return MinEigenvalue(m) >= -tol;
}

Matrix KernelBasis(const SymMat& psd, double tol) {
  const int n = psd.order();
  if (n == 0) return Matrix(0, 0);
  const EigDecomp e = Eig(psd);
  const double cutoff = tol * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  int count = 0;
  while (count < n && e.values(count) <= cutoff) ++count;
  return e.vectors.leftCols(count);
}

int NumericalRank(const SymMat& m, double tol) {
  const int n = m.order();
  if (n == 0) return 0;
  const EigDecomp e = Eig(m);
  const double cutoff = tol * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(e.values(k)) > cutoff) ++rank;
  }
  return rank;
}

SymMat DirectSum(const SymMat& a, const SymMat& b) {
  const int na = a.order();
  const int nb = b.order();
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.dense();
  m.bottomRightCorner(nb, nb) = b.dense();
  return SymMat(m, 0.0);
}

SymMat Jay(int order) {
  if (order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "jay order must be >= 1");
  }
  Matrix m = Matrix::Zero(order, order);
  m(0, 0) = 1.0;
  return SymMat(m, 0.0);
}

SymMat Gram(const Matrix& a) {
  const Matrix g = a.transpose() * a;
  return SymMat(Matrix(0.5 * (g + g.transpose())), 1.0);
}

Vector QuadFunc::Gradient(const Vector& x) const {
  return 2.0 * (H.dense() * x - d);
}

double Evaluate(const QuadFunc& q, const Vector& x) {
  if (x.size() != q.dim() || q.d.size() != q.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "quadratic of dimension " + std::to_string(q.dim()) +
                    " evaluated at a point of dimension " +
                    std::to_string(x.size()));
  }
  return q.H.QuadraticForm(x) - 2.0 * q.d.dot(x) + q.gamma;
}

SymMat ShorMatrix(const QuadFunc& q) {
  const int n = q.dim();
  if (q.d.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "QuadFunc d has wrong size");
  }
  Matrix m(n + 1, n + 1);
  m(0, 0) = q.gamma;
  m.block(0, 1, 1, n) = -q.d.transpose();
  m.block(1, 0, n, 1) = -q.d;
  m.bottomRightCorner(n, n) = q.H.dense();
  return SymMat(m, 0.0);
}

}  // namespace etr
