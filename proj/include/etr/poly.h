#pragma once

// Sparse real polynomials in a fixed number of variables.

#include <map>
#include <vector>

#include "etr/matcore.h"

namespace etr {

using Exponent = std::vector<int>;

class Poly {
 public:
  explicit Poly(int dim = 0) : dim_(dim) {}

  static Poly Constant(int dim, double c);
  static Poly Variable(int dim, int i);

  int dim() const { return dim_; }
  // Never holds zero coefficients.
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void Add(const Exponent& e, double c);
  double Coefficient(const Exponent& e) const;
  int Degree() const;
  double Evaluate(const Vector& y) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;

 private:
  void CheckDim(int other) const;

  int dim_;
  std::map<Exponent, double> terms_;
};

double MaxCoefficientDiff(const Poly& a, const Poly& b);

// y^T M y.
Poly QuadraticFormPoly(const SymMat& m);

// z^T M z with z = (y_0^2, ..., y_p^2, y_{p+1}, ...): nonnegative on all of
// R^{p+n+1} iff M is copositive on R^{p+1}_+ x R^n.
Poly QuarticPM(const SymMat& m, int p);

// (sum_i y_i^2)^d.
Poly NormSquaredPower(int dim, int d);

}  // namespace etr
