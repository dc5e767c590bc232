#include "etr/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "etr/error.h"
#include "etr/lp.h"

namespace etr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All exponent vectors of total degree <= max_deg.
void EnumerateMonomials(int dim, int max_deg, Exponent* cur, int pos,
                        std::vector<Exponent>* out) {
  if (pos == dim) {
    out->push_back(*cur);
    return;
  }
  for (int k = 0; k <= max_deg; ++k) {
    (*cur)[pos] = k;
    EnumerateMonomials(dim, max_deg - k, cur, pos + 1, out);
  }
  (*cur)[pos] = 0;
}

Matrix ProjectPsd(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const Vector ev = es.eigenvalues().cwiseMax(0.0);
  const Matrix p = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (p + p.transpose());
}

// Gram entries grouped by the monomial b_i + b_j they produce. Each ordered
// pair belongs to exactly one group, so the coefficient-matching subspace
// projects group by group.
struct GramSystem {
  std::vector<std::vector<std::pair<int, int>>> groups;
  std::vector<double> target;

  Matrix Project(const Matrix& g) const {
    Matrix out = g;
    for (size_t a = 0; a < groups.size(); ++a) {
      double sum = 0.0;
      for (const auto& [i, j] : groups[a]) sum += g(i, j);
      const double delta = (target[a] - sum) / groups[a].size();
      for (const auto& [i, j] : groups[a]) out(i, j) += delta;
    }
    return out;
  }

  double Residual(const Matrix& g) const {
    double worst = 0.0;
    for (size_t a = 0; a < groups.size(); ++a) {
      double sum = 0.0;
      for (const auto& [i, j] : groups[a]) sum += g(i, j);
      worst = std::max(worst, std::abs(target[a] - sum));
    }
    return worst;
  }
};

}  // namespace

std::vector<Exponent> SosBasis(const Poly& f, int p) {
  const int dim = f.dim();
  if (f.empty()) return {};
  // Functionals: each coordinate, total degree, and the weighting under
  // which p_M is homogeneous (2 on y_I, 1 elsewhere, doubled to integers).
  std::vector<std::vector<int>> funcs;
  for (int i = 0; i < dim; ++i) {
    std::vector<int> w(dim, 0);
    w[i] = 1;
    funcs.push_back(w);
  }
  funcs.emplace_back(dim, 1);
  std::vector<int> weighted(dim, 2);
  for (int i = 0; i <= p && i < dim; ++i) weighted[i] = 1;
  funcs.push_back(weighted);

  std::vector<int> lo(funcs.size(), std::numeric_limits<int>::max());
  std::vector<int> hi(funcs.size(), std::numeric_limits<int>::min());
  for (const auto& [e, c] : f.terms()) {
    for (size_t k = 0; k < funcs.size(); ++k) {
      int v = 0;
      for (int i = 0; i < dim; ++i) v += funcs[k][i] * e[i];
      lo[k] = std::min(lo[k], v);
      hi[k] = std::max(hi[k], v);
    }
  }
  std::vector<Exponent> all;
  Exponent cur(dim, 0);
  EnumerateMonomials(dim, f.Degree() / 2, &cur, 0, &all);
  std::vector<Exponent> basis;
  for (const Exponent& m : all) {
    bool keep = true;
    for (size_t k = 0; k < funcs.size() && keep; ++k) {
      int v = 0;
      for (int i = 0; i < dim; ++i) v += funcs[k][i] * m[i];
      keep = 2 * v >= lo[k] && 2 * v <= hi[k];
    }
    if (keep) basis.push_back(m);
  }
  return basis;
}

std::optional<SosCert> SosMembership(const SymMat& m, int p, int d,
                                     const SosOptions& options) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "level must be >= 0");
  const int dim = m.order();
  const Poly f = QuarticPM(m, p) * NormSquaredPower(dim, d);
  SosCert cert;
  cert.level = d;
  cert.basis = SosBasis(f, p);
  const int nb = static_cast<int>(cert.basis.size());
  if (f.empty()) {
    cert.gram = Matrix::Zero(nb, nb);
    return cert;
  }

  GramSystem sys;
  std::map<Exponent, int> group_of;
  Exponent e(dim);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      for (int k = 0; k < dim; ++k) e[k] = cert.basis[i][k] + cert.basis[j][k];
      auto [it, inserted] = group_of.emplace(e, static_cast<int>(sys.groups.size()));
      if (inserted) {
        sys.groups.emplace_back();
        sys.target.push_back(f.Coefficient(e));
      }
      sys.groups[it->second].emplace_back(i, j);
    }
  }
  for (const auto& [mono, c] : f.terms()) {
    if (!group_of.count(mono)) return std::nullopt;  // outside every square
  }

  Matrix x = Matrix::Zero(nb, nb);
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Matrix a = sys.Project(x);
    const Matrix b = ProjectPsd(2.0 * a - x);
    x += b - a;
    if (it % 10 != 0 && it != options.max_iterations) continue;
    const Matrix g = ProjectPsd(sys.Project(x));
    const double res = sys.Residual(g);
    if (res < options.residual_tol) {
      cert.gram = g;
      cert.residual = res;
      cert.iterations = it;
      return cert;
    }
  }
  return std::nullopt;
}

std::vector<Poly> HandelmanGenerators(ConeSpec cone) {
  cone.Validate();
  const int dim = cone.dim();
  std::vector<Poly> gens;
  Poly rest = Poly::Constant(dim, 1.0);
  for (int j = 0; j < cone.k; ++j) {
    gens.push_back(Poly::Variable(dim, j));
    rest = rest - Poly::Variable(dim, j);
  }
  gens.push_back(rest);
  for (int i = cone.k; i < dim; ++i) {
    gens.push_back(Poly::Constant(dim, 1.0) - Poly::Variable(dim, i));
    gens.push_back(Poly::Constant(dim, 1.0) + Poly::Variable(dim, i));
  }
  return gens;
}

namespace {

// Products prod h^alpha for all |alpha| <= d, built depth-first.
void ExpandProducts(const std::vector<Poly>& gens, int d, long max_terms,
                    std::vector<Exponent>* alphas, std::vector<Poly>* products) {
  const int ng = static_cast<int>(gens.size());
  long terms = 0;
  Exponent alpha(ng, 0);
  std::function<void(int, int, const Poly&)> rec = [&](int start, int left,
                                                       const Poly& prod) {
    alphas->push_back(alpha);
    products->push_back(prod);
    terms += static_cast<long>(prod.terms().size());
    if (terms > max_terms) {
      throw Error(ErrorCode::kCombinatorialBlowup,
                  "Handelman expansion exceeds " + std::to_string(max_terms) +
                      " monomials");
    }
    if (left == 0) return;
    for (int g = start; g < ng; ++g) {
      ++alpha[g];
      rec(g, left - 1, prod * gens[g]);
      --alpha[g];
    }
  };
  rec(0, d, Poly::Constant(gens.front().dim(), 1.0));
}

}  // namespace

Poly HandelmanPolynomial(const HandelmanCert& cert, ConeSpec cone) {
  const std::vector<Poly> gens = HandelmanGenerators(cone);
  Poly out(cone.dim());
  for (size_t t = 0; t < cert.alphas.size(); ++t) {
    if (cert.coeffs(t) == 0.0) continue;
    Poly prod = Poly::Constant(cone.dim(), cert.coeffs(t));
    for (size_t g = 0; g < gens.size(); ++g) {
      for (int r = 0; r < cert.alphas[t][g]; ++r) prod = prod * gens[g];
    }
    out = out + prod;
  }
  return out;
}

std::optional<HandelmanCert> HandelmanMembership(const SymMat& m, ConeSpec cone,
                                                 int d,
                                                 const HandelmanOptions& options) {
  cone.Validate();
  if (m.order() != cone.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix order differs from cone dimension");
  }
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "level must be >= 0");
  if (cone.m > 0 && m.dense().bottomRightCorner(cone.m, cone.m).cwiseAbs().maxCoeff() > 0.0) {
    return std::nullopt;
  }
  const Poly q = QuadraticFormPoly(m);
  std::vector<Exponent> alphas;
  std::vector<Poly> products;
  ExpandProducts(HandelmanGenerators(cone), d, options.max_terms, &alphas, &products);

  std::map<Exponent, int> row_of;
  auto row = [&](const Exponent& e) {
    return row_of.emplace(e, static_cast<int>(row_of.size())).first->second;
  };
  for (const auto& [e, c] : q.terms()) row(e);
  for (const Poly& prod : products) {
    for (const auto& [e, c] : prod.terms()) row(e);
  }
  const int rows = static_cast<int>(row_of.size());
  const int cols = static_cast<int>(products.size());
  LinearProgram lp = LinearProgram::Empty(cols);
  lp.Aeq = Matrix::Zero(rows, cols);
  lp.beq = Vector::Zero(rows);
  for (int t = 0; t < cols; ++t) {
    for (const auto& [e, c] : products[t].terms()) lp.Aeq(row_of.at(e), t) = c;
  }
  for (const auto& [e, c] : q.terms()) lp.beq(row_of.at(e)) = c;
  lp.lb = Vector::Zero(cols);
  const LPOutcome out = LPFeasible(lp);
  if (out.status != LPStatus::kOptimal) return std::nullopt;

  HandelmanCert cert;
  cert.level = d;
  cert.alphas = alphas;
  cert.coeffs = out.x->cwiseMax(0.0);
  cert.residual = MaxCoefficientDiff(HandelmanPolynomial(cert, cone), q);
  if (cert.residual > 1e-7) return std::nullopt;
  return cert;
}

std::string HierarchyMethodName(HierarchyMethod method) {
  return method == HierarchyMethod::kSOS ? "sos" : "handelman";
}

Bound HierarchyBound(const StdProblem& s, int d, HierarchyMethod method,
                     const SearchConfig& cfg, const HierarchyOptions& options) {
  const ConeSpec cone{s.p + 1, s.n};
  int tests = 0;
  // The levels are nested, so any level <= d certifies; cheapest first.
  auto member = [&](const Eigen::Vector3d& u, double mu) {
    ++tests;
    const SymMat m = LagrangianMatrix(s, u, mu);
    for (int level = 0; level <= d; ++level) {
      const bool ok = method == HierarchyMethod::kSOS
                          ? SosMembership(m, s.p, level, options.sos).has_value()
                          : HandelmanMembership(m, cone, level, options.handelman).has_value();
      if (ok) return true;
    }
    return false;
  };

  Bound bound;
  bound.kind = BoundKind::kHierarchy;
  bound.level = d;
  bound.value = -kInf;

  std::vector<Eigen::Vector3d> candidates;
  const Bound cop = ZCop(s, cfg);
  bound.trace.evaluations = cop.trace.evaluations;
  if (cop.multipliers) candidates.push_back(cop.multipliers->u);
  for (const Vector& seed : cfg.extra_seeds) {
    if (seed.size() >= 3) candidates.emplace_back(seed.head<3>().cwiseMax(0.0));
  }
  bound.trace.seeds = static_cast<int>(candidates.size());

  for (const Eigen::Vector3d& u : candidates) {
    const double hi0 = ThetaSemi(s, u, SemiMethod::kBisection);
    if (hi0 == -kInf) continue;
    ++bound.trace.finite_seeds;
    const int budget_end = tests + options.max_tests;
    // Membership is monotone in mu (y_0^4 ||y||^{2d} is itself in every
    // level), so bracket downwards from the copositive value and bisect.
    double fail = hi0;
    double ok = hi0 - options.mu_tol * (1.0 + std::abs(hi0));
    double step = std::max(1.0, std::abs(hi0)) * 1e-3;
    bool found = member(u, ok);
    while (!found && tests < budget_end) {
      fail = ok;
      ok = hi0 - step;
      step *= 4.0;
      found = member(u, ok);
    }
    if (!found) continue;
    while (tests < budget_end && fail - ok > options.mu_tol * (1.0 + std::abs(ok))) {
      const double mid = 0.5 * (ok + fail);
      (member(u, mid) ? ok : fail) = mid;
    }
    if (ok > bound.value) {
      bound.value = ok;
      bound.multipliers = Multipliers{u, Vector()};
      bound.certified = true;
    }
  }
  bound.trace.notes.push_back(HierarchyMethodName(method) + " level " +
                              std::to_string(d) + ", " + std::to_string(tests) +
                              " membership tests");
  if (bound.value == -kInf) bound.trace.notes.push_back("no level-d member found");
  return bound;
}

}  // namespace etr
