#include "etr/poly.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "etr/error.h"

namespace etr {

Poly Poly::Constant(int dim, double c) {
  Poly out(dim);
  out.Add(Exponent(dim, 0), c);
  return out;
}

Poly Poly::Variable(int dim, int i) {
  if (i < 0 || i >= dim) {
    throw Error(ErrorCode::kInvalidArgument, "variable index out of range");
  }
  Exponent e(dim, 0);
  e[i] = 1;
  Poly out(dim);
  out.Add(e, 1.0);
  return out;
}

void Poly::CheckDim(int other) const {
  if (other != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "polynomials in " + std::to_string(dim_) + " and " +
                    std::to_string(other) + " variables");
  }
}

void Poly::Add(const Exponent& e, double c) {
  CheckDim(static_cast<int>(e.size()));
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

double Poly::Coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

int Poly::Degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    deg = std::max(deg, s);
  }
  return deg;
}

double Poly::Evaluate(const Vector& y) const {
  CheckDim(static_cast<int>(y.size()));
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < dim_; ++i) {
      if (e[i] > 0) t *= std::pow(y(i), e[i]);
    }
    total += t;
  }
  return total;
}

Poly Poly::operator+(const Poly& o) const {
  CheckDim(o.dim_);
  Poly out = *this;
  for (const auto& [e, c] : o.terms_) out.Add(e, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  CheckDim(o.dim_);
  Poly out(dim_);
  Exponent e(dim_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
      out.Add(e, ca * cb);
    }
  }
  return out;
}

Poly Poly::operator*(double s) const {
  Poly out(dim_);
  for (const auto& [e, c] : terms_) out.Add(e, c * s);
  return out;
}

double MaxCoefficientDiff(const Poly& a, const Poly& b) {
  double worst = 0.0;
  for (const auto& [e, c] : (a - b).terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

Poly QuadraticFormPoly(const SymMat& m) {
  const int n = m.order();
  Poly out(n);
  Exponent e(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ++e[i];
      ++e[j];
      out.Add(e, m(i, j));
      --e[i];
      --e[j];
    }
  }
  return out;
}

Poly QuarticPM(const SymMat& m, int p) {
  const int n = m.order();
  if (p < 0 || p + 1 > n) {
    throw Error(ErrorCode::kDimensionMismatch, "p + 1 exceeds the matrix order");
  }
  Poly out(n);
  Exponent e(n, 0);
  auto power = [&](int i) { return i <= p ? 2 : 1; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      e[i] += power(i);
      e[j] += power(j);
      out.Add(e, m(i, j));
      e[i] -= power(i);
      e[j] -= power(j);
    }
  }
  return out;
}

Poly NormSquaredPower(int dim, int d) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "negative power");
  Poly sq(dim);
  for (int i = 0; i < dim; ++i) {
    Exponent e(dim, 0);
    e[i] = 2;
    sq.Add(e, 1.0);
  }
  Poly out = Poly::Constant(dim, 1.0);
  for (int k = 0; k < d; ++k) out = out * sq;
  return out;
}

}  // namespace etr
