#include "etr/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "etr/error.h"

namespace etr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variables x = offset + T x' with x' >= 0, rows over x'.
struct StandardForm {
  Vector offset;
  Matrix T;
  Matrix A_ineq;  // A_ineq x' <= rhs_ineq
  Vector rhs_ineq;
  Matrix A_eq;  // A_eq x' = rhs_eq
  Vector rhs_eq;
  Vector cost;
  double cost_offset = 0.0;
};

StandardForm ToStandardForm(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const Vector lb = lp.lb.value_or(Vector::Constant(n, -kInf));
  const Vector ub = lp.ub.value_or(Vector::Constant(n, kInf));

  StandardForm sf;
  sf.offset = Vector::Zero(n);
  std::vector<std::pair<int, double>> cols;  // (original var, sign)
  std::vector<std::pair<int, double>> bound_rows;  // (new col, ub - lb)
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lb(j))) {
      sf.offset(j) = lb(j);
      cols.push_back({j, 1.0});
      if (std::isfinite(ub(j))) {
        bound_rows.push_back({static_cast<int>(cols.size()) - 1, ub(j) - lb(j)});
      }
    } else if (std::isfinite(ub(j))) {
      sf.offset(j) = ub(j);
      cols.push_back({j, -1.0});
    } else {
      cols.push_back({j, 1.0});
      cols.push_back({j, -1.0});
    }
  }
  const int np = static_cast<int>(cols.size());
  sf.T = Matrix::Zero(n, np);
  for (int k = 0; k < np; ++k) sf.T(cols[k].first, k) = cols[k].second;

  const int mi = static_cast<int>(lp.Aineq.rows());
  const int mb = static_cast<int>(bound_rows.size());
  sf.A_ineq = Matrix::Zero(mi + mb, np);
  sf.rhs_ineq = Vector::Zero(mi + mb);
  if (mi > 0) {
    sf.A_ineq.topRows(mi) = lp.Aineq * sf.T;
    sf.rhs_ineq.head(mi) = lp.bineq - lp.Aineq * sf.offset;
  }
  for (int r = 0; r < mb; ++r) {
    sf.A_ineq(mi + r, bound_rows[r].first) = 1.0;
    sf.rhs_ineq(mi + r) = bound_rows[r].second;
  }
  const int me = static_cast<int>(lp.Aeq.rows());
  sf.A_eq = Matrix::Zero(me, np);
  sf.rhs_eq = Vector::Zero(me);
  if (me > 0) {
    sf.A_eq = lp.Aeq * sf.T;
    sf.rhs_eq = lp.beq - lp.Aeq * sf.offset;
  }
  sf.cost = sf.T.transpose() * lp.c;
  sf.cost_offset = lp.c.dot(sf.offset);
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const LPOptions& options)
      : options_(options) {
    num_struct_ = static_cast<int>(sf.cost.size());
    const int mi = static_cast<int>(sf.rhs_ineq.size());
    const int me = static_cast<int>(sf.rhs_eq.size());
    rows_ = mi + me;
    num_slack_ = mi;

    // Count artificials: equality rows and inequality rows with rhs < 0.
    int num_art = me;
    for (int i = 0; i < mi; ++i) {
      if (sf.rhs_ineq(i) < 0) ++num_art;
    }
    num_art_ = num_art;
    cols_ = num_struct_ + num_slack_ + num_art_;
    tab_ = Matrix::Zero(rows_ + 1, cols_ + 1);
    basis_.assign(rows_, -1);

    int art = num_struct_ + num_slack_;
    for (int i = 0; i < mi; ++i) {
      const double sign = sf.rhs_ineq(i) < 0 ? -1.0 : 1.0;
      tab_.row(i).head(num_struct_) = sign * sf.A_ineq.row(i);
      tab_(i, num_struct_ + i) = sign;
      tab_(i, cols_) = sign * sf.rhs_ineq(i);
      if (sign > 0) {
        basis_[i] = num_struct_ + i;
      } else {
        tab_(i, art) = 1.0;
        basis_[i] = art++;
      }
    }
    for (int r = 0; r < me; ++r) {
      const int i = mi + r;
      const double sign = sf.rhs_eq(r) < 0 ? -1.0 : 1.0;
      tab_.row(i).head(num_struct_) = sign * sf.A_eq.row(r);
      tab_(i, cols_) = sign * sf.rhs_eq(r);
      tab_(i, art) = 1.0;
      basis_[i] = art++;
    }
    rhs_scale_ = 1.0 + (rows_ > 0 ? tab_.col(cols_).head(rows_).cwiseAbs().maxCoeff() : 0.0);
  }

  // Returns false when the phase-one optimum is positive.
  bool PhaseOne() {
    Vector cost = Vector::Zero(cols_);
    for (int j = num_struct_ + num_slack_; j < cols_; ++j) cost(j) = 1.0;
    SetObjective(cost);
    const LPStatus st = Iterate(/*allow_artificial=*/true);
    if (st == LPStatus::kUnbounded) {
      throw Error(ErrorCode::kNumericalFailure, "phase one reported unbounded");
    }
    if (ObjectiveValue() > options_.feasibility_tol * rhs_scale_) return false;
    DriveOutArtificials();
    return true;
  }

  LPStatus PhaseTwo(const Vector& struct_cost) {
    Vector cost = Vector::Zero(cols_);
    cost.head(num_struct_) = struct_cost;
    SetObjective(cost);
    return Iterate(/*allow_artificial=*/false);
  }

  Vector StructuralSolution() const {
    Vector x = Vector::Zero(num_struct_);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < num_struct_) x(basis_[i]) = std::max(0.0, tab_(i, cols_));
    }
    return x;
  }

  int iterations() const { return iterations_; }

 private:
  void SetObjective(const Vector& cost) {
    cost_ = cost;
    tab_.row(rows_).setZero();
    tab_.row(rows_).head(cols_) = cost.transpose();
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) tab_.row(rows_) -= cb * tab_.row(i);
    }
  }

  double ObjectiveValue() const { return -tab_(rows_, cols_); }

  void Pivot(int r, int s) {
    tab_.row(r) /= tab_(r, s);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = tab_(i, s);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(r);
    }
    basis_[r] = s;
  }

  LPStatus Iterate(bool allow_artificial) {
    const int limit = allow_artificial ? cols_ : num_struct_ + num_slack_;
    while (true) {
      if (++iterations_ > options_.max_iterations) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex iteration cap reached");
      }
      int entering = -1;
      for (int j = 0; j < limit; ++j) {
        if (tab_(rows_, j) < -options_.pivot_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LPStatus::kOptimal;

      int leaving = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows_; ++i) {
        const double a = tab_(i, entering);
        if (a <= options_.pivot_tol) continue;
        const double ratio = std::max(0.0, tab_(i, cols_)) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
        if (leaving < 0 || ratio < best_ratio - slack ||
            (ratio <= best_ratio + slack && basis_[i] < basis_[leaving])) {
          if (leaving < 0 || ratio < best_ratio - slack) best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) return LPStatus::kUnbounded;
      Pivot(leaving, entering);
    }
  }

  void DriveOutArtificials() {
    const int first_art = num_struct_ + num_slack_;
    std::vector<int> keep;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < first_art) {
        keep.push_back(i);
        continue;
      }
      int col = -1;
      double best = options_.pivot_tol;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab_(i, j)) > best) {
          best = std::abs(tab_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        Pivot(i, col);
        keep.push_back(i);
      }
      // Otherwise the row is redundant and is dropped below.
    }
    if (static_cast<int>(keep.size()) == rows_) return;
    Matrix t(keep.size() + 1, cols_ + 1);
    std::vector<int> basis;
    for (size_t r = 0; r < keep.size(); ++r) {
      t.row(r) = tab_.row(keep[r]);
      basis.push_back(basis_[keep[r]]);
    }
    t.row(keep.size()) = tab_.row(rows_);
    tab_ = std::move(t);
    basis_ = std::move(basis);
    rows_ = static_cast<int>(keep.size());
  }

  LPOptions options_;
  int num_struct_ = 0;
  int num_slack_ = 0;
  int num_art_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  double rhs_scale_ = 1.0;
  Matrix tab_;
  std::vector<int> basis_;
  Vector cost_;
  int iterations_ = 0;
};

LPOutcome Run(const LinearProgram& lp, const LPOptions& options,
              bool optimize) {
  lp.Validate();
  const StandardForm sf = ToStandardForm(lp);
  Simplex simplex(sf, options);
  LPOutcome out;
  if (!simplex.PhaseOne()) {
    out.status = LPStatus::kInfeasible;
    out.iterations = simplex.iterations();
    return out;
  }
  if (optimize) {
    const LPStatus st = simplex.PhaseTwo(sf.cost);
    out.iterations = simplex.iterations();
    if (st == LPStatus::kUnbounded) {
      out.status = LPStatus::kUnbounded;
      return out;
    }
  }
  out.iterations = simplex.iterations();
  const Vector x = sf.offset + sf.T * simplex.StructuralSolution();
  out.status = LPStatus::kOptimal;
  out.x = x;
  out.value = lp.c.dot(x);
  return out;
}

}  // namespace

LinearProgram LinearProgram::Empty(int num_vars) {
  LinearProgram lp;
  lp.c = Vector::Zero(num_vars);
  lp.Aeq = Matrix::Zero(0, num_vars);
  lp.beq = Vector::Zero(0);
  lp.Aineq = Matrix::Zero(0, num_vars);
  lp.bineq = Vector::Zero(0);
  return lp;
}

void LinearProgram::Validate() const {
  const int n = num_vars();
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kDimensionMismatch, "LinearProgram: " + what);
  };
  if (Aeq.rows() != beq.size() || (Aeq.rows() > 0 && Aeq.cols() != n)) {
    fail("equality system has inconsistent dimensions");
  }
  if (Aineq.rows() != bineq.size() || (Aineq.rows() > 0 && Aineq.cols() != n)) {
    fail("inequality system has inconsistent dimensions");
  }
  if (lb && lb->size() != n) fail("lb has wrong length");
  if (ub && ub->size() != n) fail("ub has wrong length");
  if (!c.allFinite() || !Aeq.allFinite() || !beq.allFinite() ||
      !Aineq.allFinite() || !bineq.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "LinearProgram data must be finite");
  }
  if (lb && ub && ((*lb).array() > (*ub).array()).any()) {
    throw Error(ErrorCode::kInvalidArgument, "LinearProgram has lb > ub");
  }
}

LPOutcome SolveLP(const LinearProgram& lp, const LPOptions& options) {
  return Run(lp, options, /*optimize=*/true);
}

LPOutcome LPFeasible(const LinearProgram& lp, const LPOptions& options) {
  return Run(lp, options, /*optimize=*/false);
}

double LPViolation(const LinearProgram& lp, const Vector& x) {
  double worst = 0.0;
  if (lp.Aeq.rows() > 0) {
    worst = std::max(worst, (lp.Aeq * x - lp.beq).cwiseAbs().maxCoeff());
  }
  if (lp.Aineq.rows() > 0) {
    worst = std::max(worst, (lp.Aineq * x - lp.bineq).maxCoeff());
  }
  for (int j = 0; j < x.size(); ++j) {
    if (lp.lb) worst = std::max(worst, (*lp.lb)(j) - x(j));
    if (lp.ub) worst = std::max(worst, x(j) - (*lp.ub)(j));
  }
  return worst;
}

}  // namespace etr
