#pragma once

// Copositivity on cones R^k_+ x R^m. The orthant part is decided exactly by
// the eigenvector criterion on principal submatrices; the free part is
// eliminated with a Schur complement through the pseudoinverse.

#include <optional>

#include "etr/matcore.h"
#include "etr/parallel.h"

namespace etr {

// Gamma = R^k_+ x R^m, orthant coordinates first.
struct ConeSpec {
  int k = 0;
  int m = 0;

  int dim() const { return k + m; }
  void Validate() const;
};

enum class CopositivityStatus { kCopositive, kNotCopositive, kUnknown };

struct CopositivityVerdict {
  CopositivityStatus status = CopositivityStatus::kUnknown;
  // For kNotCopositive: a unit vector in the cone with w^T M w < -1e-12.
  // For a failed strict test: a cone vector with w^T M w <= margin.
  std::optional<Vector> witness;
  // Only filled by the strict test.
  std::optional<double> margin;

  bool copositive() const { return status == CopositivityStatus::kCopositive; }
};

struct CopositivityOptions {
  // Eigenvalues below -tol * (1 + max |A_ij|) count as negative.
  double tol = 1e-10;
  // ||H H^+ S - S||_F <= kernel_tol * (1 + ||S||_F).
  double kernel_tol = 1e-8;
  double pinv_tol = 1e-9;
  Execution exec = Execution::kParallel;
};

// Largest orthant block accepted (the procedure is exponential in it).
constexpr int kMaxOrthantOrder = 16;

// Copositivity on R^n_+.
CopositivityVerdict IsCopositiveClassical(const SymMat& m,
                                          const CopositivityOptions& opt = {});

CopositivityVerdict IsCopositiveCone(const SymMat& m, ConeSpec cone,
                                     const CopositivityOptions& opt = {});

// v^T M v > 0 on the cone minus the origin. The margin is
// min(lambda_min(H), min of the Schur complement over the unit simplex),
// reducing to the simplex minimum when m = 0 and lambda_min when k = 0.
CopositivityVerdict IsStrictlyCopositive(const SymMat& m, ConeSpec cone,
                                         const CopositivityOptions& opt = {});

// Precomputes the free-block data of M so that M - mu E_00 can be tested for
// many mu at the cost of one orthant test each. Requires k >= 1 unless mu is
// always zero.
class ConeReduction {
 public:
  ConeReduction(const SymMat& m, ConeSpec cone,
                const CopositivityOptions& opt = {});

  CopositivityVerdict Test(double mu) const;

  // True when the free-block or kernel branch fails. Those witnesses have no
  // weight on coordinate 0, so every mu fails.
  bool FreeBlockFails() const { return free_failure_.has_value(); }

 private:
  SymMat m_;
  ConeSpec cone_;
  CopositivityOptions opt_;
  Matrix hpinv_s_;  // H^+ S
  Matrix schur_;    // R - S^T H^+ S
  std::optional<Vector> free_failure_;
  // Kernel branch data: column j, its kernel component w.
  int kernel_col_ = -1;
  Vector kernel_dir_;
};

// rho = min { x^T M x : x >= 0, ||x|| = 1 }.
double OrthantSphereMinimum(const SymMat& m,
                            Execution exec = Execution::kParallel);

// min { x^T M x : x >= 0, sum x = 1 }.
double SimplexMinimum(const SymMat& m, Vector* argmin = nullptr,
                      Execution exec = Execution::kParallel);

struct SigmaCertificate {
  double sigma = 1.0;
  double rho = 0.0;
  double epsilon = 1.0;
  double lambda_min = 0.0;
};

// For strictly R^n_+-copositive M, a sigma with x^T M x + sigma ||x - s||^2
// > 0 on (R^n x R^n_+) minus the origin. The value is checked by testing
// 0 (+) [[sigma I, -sigma I], [-sigma I, M + sigma I]] on R^{n+1}_+ x R^n.
// Throws kNotStrictlyCopositive when M is not strictly copositive or the
// epsilon search hits its floor.
SigmaCertificate StrictMarginSigma(const SymMat& m);

// 0 (+) [[sigma I, -sigma I], [-sigma I, M + sigma I]], ordered (1, s, x).
SymMat SigmaBlockMatrix(const SymMat& m, double sigma);

}  // namespace etr
