#pragma once

// Inner approximations of the cone of R^{p+1}_+ x R^n copositive matrices:
// Gram-matrix SOS levels for the quartic p_M and Handelman LP levels over
// the polytope {y_I >= 0, sum y_I <= 1, |y_j| <= 1 otherwise}.

#include <optional>
#include <string>
#include <vector>

#include "etr/copositivity.h"
#include "etr/poly.h"
#include "etr/relax.h"

namespace etr {

struct SosCert {
  int level = 0;
  std::vector<Exponent> basis;
  Matrix gram;  // psd, indexed by basis
  double residual = 0.0;  // max coefficient mismatch
  int iterations = 0;
};

struct SosOptions {
  int max_iterations = 50000;
  double residual_tol = 1e-6;
};

// Is p_M(y) ||y||^{2d} a sum of squares? Searched by Douglas-Rachford
// splitting between the psd cone and the coefficient-matching subspace. No
// answer is a timeout, not a refutation.
std::optional<SosCert> SosMembership(const SymMat& m, int p, int d,
                                     const SosOptions& options = {});

// Monomials kept in the Gram basis for f: every linear functional's range
// over 2 * basis stays inside its range over supp(f).
std::vector<Exponent> SosBasis(const Poly& f, int p);

struct HandelmanCert {
  int level = 0;
  std::vector<Exponent> alphas;  // multi-indices over the generators
  Vector coeffs;                 // >= 0
  double residual = 0.0;
};

struct HandelmanOptions {
  long max_terms = 200000;
};

// The affine generators: y_j (j < k), 1 - sum_{j<k} y_j, then 1 - y_i and
// 1 + y_i for each free coordinate.
std::vector<Poly> HandelmanGenerators(ConeSpec cone);

// Nonnegative c_alpha, |alpha| <= d, with y^T M y = sum c_alpha prod h^alpha.
// A nonzero free block rules out every level (all terms would have to vanish
// at y_I = 0), so those return nothing without an LP. Throws
// kCombinatorialBlowup when the expanded products exceed max_terms.
std::optional<HandelmanCert> HandelmanMembership(
    const SymMat& m, ConeSpec cone, int d, const HandelmanOptions& options = {});

Poly HandelmanPolynomial(const HandelmanCert& cert, ConeSpec cone);

enum class HierarchyMethod { kSOS, kHandelman };

std::string HierarchyMethodName(HierarchyMethod method);

struct HierarchyOptions {
  SosOptions sos;
  HandelmanOptions handelman;
  int max_tests = 40;
  double mu_tol = 1e-6;
};

// sup mu with M(u, mu) in the level-d cone. u is taken from the z_COP search
// (plus any extra seeds) and mu is bisected below Theta_semi(u), so the value
// never exceeds z_COP.
Bound HierarchyBound(const StdProblem& s, int d, HierarchyMethod method,
                     const SearchConfig& cfg = {},
                     const HierarchyOptions& options = {});

}  // namespace etr
