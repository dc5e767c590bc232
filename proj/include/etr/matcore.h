#pragma once

// Dense symmetric-matrix kernel: Jacobi eigendecomposition, pseudoinverse,
// semidefiniteness tests, direct sums and Shor matrices.

#include <Eigen/Dense>

namespace etr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Symmetric matrix with finite entries. Construction from a dense matrix
// averages (M + M^T) / 2 and rejects inputs whose asymmetry exceeds the
// given tolerance (relative to 1 + max |M_ij|).
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Matrix& m, double asymmetry_tol = 1e-8);

  static SymMat Zero(int order);
  static SymMat Identity(int order);
  static SymMat Diagonal(const Vector& diag);

  int order() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& dense() const { return m_; }

  // Principal submatrix on the contiguous range [start, start + size).
  SymMat Block(int start, int size) const;

  SymMat operator+(const SymMat& other) const;
  SymMat operator-(const SymMat& other) const;
  SymMat operator*(double s) const;
  friend SymMat operator*(double s, const SymMat& m) { return m * s; }

  double QuadraticForm(const Vector& v) const { return v.dot(m_ * v); }

 private:
  struct Trusted {};
  SymMat(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

struct EigDecomp {
  Vector values;   // ascending
  Matrix vectors;  // columns are orthonormal eigenvectors
};

// Cyclic Jacobi rotations. Throws kNumericalFailure if the sweep cap is hit.
EigDecomp Eig(const SymMat& m);

double MinEigenvalue(const SymMat& m);

// Moore-Penrose pseudoinverse V diag(1/lambda) V^T, where eigenvalues with
// |lambda| <= tol * max(1, max |lambda|) are treated as zero.
SymMat PseudoInverse(const SymMat& m, double tol = 1e-9);

// lambda_min(M) >= -tol.
bool IsPsd(const SymMat& m, double tol = 1e-10);

// Orthonormal basis (as columns) of the eigenspace of a psd matrix whose
// eigenvalues are at most tol * max(1, lambda_max). Used as its kernel.
Matrix KernelBasis(const SymMat& psd, double tol = 1e-9);

// Number of eigenvalues with |lambda| > tol * max(1, max |lambda|).
int NumericalRank(const SymMat& m, double tol = 1e-9);

SymMat DirectSum(const SymMat& a, const SymMat& b);

// 1 (+) O of the given order: a single one in the top-left corner.
SymMat Jay(int order);

// A^T A as a SymMat.
SymMat Gram(const Matrix& a);

}  // namespace etr
