#pragma once

// Global-optimality certificates from generalized KKT pairs, exactness tests
// for problems with Q1 = I, q1 = 0, and two sufficient conditions on the
// geometry of the relaxation.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "etr/matcore.h"
#include "etr/model.h"

namespace etr {

// v is sign-free; the slack s = b - B x is derived.
struct KKTPair {
  Vector x;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Vector v;
};

enum class CertStatus {
  kGlobalOptimal,
  kExactRelaxation,
  kConditionHolds,
  kConditionFails,
  kInconclusive,
};

std::string CertStatusName(CertStatus status);

struct Certificate {
  CertStatus status = CertStatus::kInconclusive;
  std::optional<SymMat> slack_matrix;  // set for optimality certificates
  std::optional<Vector> witness;
  std::optional<double> value;
  std::vector<std::string> notes;
};

struct KKTResiduals {
  double feasibility = 0.0;      // max constraint violation
  double stationarity = 0.0;     // ||grad_y L||_inf
  double complementarity = 0.0;  // max |v_k s_k|, |u_i fbar_i(y)|
};

KKTResiduals KKTResidualsAt(const StdProblem& s, const KKTPair& pair);

// All residuals at most tol * (1 + data scale).
bool CheckKKT(const StdProblem& s, const KKTPair& pair, double tol = 1e-8);

// GlobalOptimal iff the pair is a generalized KKT pair and
// M(L(.; u, 0)) - f0(x) J is copositive on R^{p+1}_+ x R^n.
Certificate CertifyGlobal(const StdProblem& s, const KKTPair& pair,
                          double kkt_tol = 1e-8);

// The same test with the matrix written out for Q1 = I, q1 = 0. Throws
// kNotCDT otherwise.
SymMat CdtCorollaryMatrix(const ETRProblem& p, const Eigen::Vector3d& u,
                          double mu);
Certificate CertifyCdtCorollary(const ETRProblem& p, const KKTPair& pair,
                                double kkt_tol = 1e-8);

// Sign convention for the q0 constraint of the kernel condition. Along a
// kernel direction d the auxiliary objective changes by 2 t q0^T d, so the
// sound test asks for q0^T d <= 0. kAsPrinted uses q0^T d >= 0.
enum class KernelSign { kSound, kAsPrinted };

// Is ker[Q0+; A] ∩ {B d <= 0} ∩ {sign(q0^T d)} nonzero? Decided exactly by
// 2n LPs with d_k = +-1 and |d_i| <= 1; the witness has ||d||_inf = 1.
// Throws kNotCDT.
Certificate CdtLpCondition(const ETRProblem& p,
                           KernelSign sign = KernelSign::kSound);

// The single LP with sum(d) = 1 and the printed sign. Misses cone directions
// whose coordinates sum to a nonpositive number.
Certificate CdtLpConditionSumNormalized(const ETRProblem& p);

// dim ker Q0+ >= rank B + 1. Requires A = 0 and a = 0 (kNotApplicable
// otherwise) and Q1 = I, q1 = 0 (kNotCDT).
bool DimensionCondition(const ETRProblem& p);

// Solves min x^T Q0+ x + 2 q0^T x over the feasible set and returns a
// minimizer of norm >= 1 - tol if one is found, moving along kernel
// directions from an interior minimizer when needed.
std::optional<Vector> ApSphereMinimizer(const ETRProblem& p, double tol = 1e-6);

// Q0, Q1 and A^T A Z-matrices, B = -I, and q0, q1, a, b zero.
bool OmegaConvexitySufficient(const ETRProblem& p);

// tau on the unit simplex with lambda_min(tau0 Q0 + tau1 Q1 + tau2 A^T A)
// > 1e-8, or nothing (inconclusive).
std::optional<Eigen::Vector3d> OmegaClosednessSufficient(const ETRProblem& p,
                                                         int grid_resolution = 20);

}  // namespace etr
