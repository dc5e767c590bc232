#pragma once

// Lagrangian and copositive (semi-Lagrangian) relaxation bounds.
//
//   z_LD  = sup_{u >= 0, v >= 0} inf_y L(y; u, v)
//   z_COP = sup_{u >= 0} Theta_semi(u),
//   Theta_semi(u) = inf { L(y; u, 0) : s >= 0 }
//                 = sup { mu : M(L(.; u, 0)) - mu J copositive on
//                               R^{p+1}_+ x R^n }.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etr/copositivity.h"
#include "etr/model.h"

namespace etr {

enum class BoundKind { kLD, kSemi, kCOP, kHierarchy };

std::string BoundKindName(BoundKind kind);

struct SearchTrace {
  int evaluations = 0;
  int seeds = 0;
  int finite_seeds = 0;
  std::vector<std::string> notes;
};

struct Bound {
  BoundKind kind = BoundKind::kLD;
  int level = 0;  // hierarchy level, when kind == kHierarchy
  double value = 0.0;  // may be -inf
  std::optional<Multipliers> multipliers;
  // True when value was re-verified by an exact membership test at the
  // reported multipliers (copositivity for COP, the hierarchy test otherwise).
  bool certified = false;
  SearchTrace trace;
};

struct SearchConfig {
  std::uint64_t seed = 0;
  int random_restarts = 10;
  int polish_starts = 3;
  int max_evaluations = 4000;
  // Additional u (or (u, v) for z_LD) seeds tried before the grid.
  std::vector<Vector> extra_seeds;
  Execution exec = Execution::kParallel;
};

// inf_y L(y; u, v) over all of R^{p+n}; -inf when the Hessian is not psd or
// the linear term leaves its range. An empty v means v = 0.
double ThetaFull(const StdProblem& s, const Eigen::Vector3d& u,
                 const Vector& v);

enum class SemiMethod { kBisection, kActiveSet };

// Largest p accepted by the active-set method.
constexpr int kMaxActiveSetSlacks = 12;

double ThetaSemi(const StdProblem& s, const Eigen::Vector3d& u,
                 SemiMethod method);

Bound ZLd(const StdProblem& s, const SearchConfig& cfg = {});
Bound ZCop(const StdProblem& s, const SearchConfig& cfg = {});

struct ChainReport {
  double ld = 0.0;
  double cop = 0.0;
  double zstar = 0.0;
  bool holds = false;
};

// z_LD <= z_COP + tol and z_COP <= zstar + tol.
ChainReport ChainCheck(const StdProblem& s, double zstar, double tol = 1e-6,
                       const SearchConfig& cfg = {});

}  // namespace etr
