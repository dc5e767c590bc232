#include "search.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

namespace etr::internal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool Better(double a, double b) {
  if (a == -kInf) return false;
  if (b == -kInf) return true;
  return a > b + 1e-12 * (1.0 + std::abs(b));
}

struct Point {
  Vector x;
  double value;
};

class Polisher {
 public:
  Polisher(const std::function<double(const Vector&)>& f,
           const MaximizeOptions& opt)
      : f_(f), opt_(opt) {}

  Point Run(Point start) {
    Point best = Compass(std::move(start));
    best = NelderMead(std::move(best));
    return Compass(std::move(best));
  }

  int evaluations() const { return evals_; }

 private:
  double Eval(const Vector& x) {
    ++evals_;
    return f_(x);
  }

  bool Exhausted() const { return evals_ >= opt_.max_evaluations; }

  Point Compass(Point p) {
    const int n = static_cast<int>(p.x.size());
    double h = std::max(0.1, 0.25 * p.x.cwiseAbs().maxCoeff());
    while (h >= opt_.min_step && !Exhausted()) {
      bool moved = false;
      for (int i = 0; i < n && !Exhausted(); ++i) {
        for (double dir : {1.0, -1.0}) {
          Vector y = p.x;
          y(i) = std::max(0.0, y(i) + dir * h);
          if (y(i) == p.x(i)) continue;
          const double v = Eval(y);
          if (Better(v, p.value)) {
            p = Point{y, v};
            moved = true;
            break;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    return p;
  }

  Point NelderMead(Point p) {
    if (p.value == -kInf) return p;
    const int n = static_cast<int>(p.x.size());
    std::vector<Point> simplex{p};
    const double size = std::max(0.05, 0.1 * p.x.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
      Vector y = p.x;
      y(i) += size;
      simplex.push_back(Point{y, Eval(y)});
    }
    auto clip = [](Vector y) { return Vector(y.cwiseMax(0.0)); };
    // Maximization: sort descending, worst last.
    auto order = [&] {
      std::stable_sort(simplex.begin(), simplex.end(),
                       [](const Point& a, const Point& b) {
                         return a.value > b.value;
                       });
    };
    for (int it = 0; it < 50 * n && !Exhausted(); ++it) {
      order();
      const double spread = simplex.front().value - simplex.back().value;
      if (std::isfinite(spread) && spread <= 1e-12 * (1.0 + std::abs(simplex.front().value))) {
        break;
      }
      Vector centroid = Vector::Zero(n);
      for (int i = 0; i < n; ++i) centroid += simplex[i].x;
      centroid /= n;
      Point& worst = simplex.back();
      const Vector xr = clip(centroid + (centroid - worst.x));
      const double fr = Eval(xr);
      if (Better(fr, simplex.front().value)) {
        const Vector xe = clip(centroid + 2.0 * (centroid - worst.x));
        const double fe = Eval(xe);
        worst = Better(fe, fr) ? Point{xe, fe} : Point{xr, fr};
      } else if (Better(fr, simplex[n - 1].value)) {
        worst = Point{xr, fr};
      } else {
        const Vector xc = clip(centroid + 0.5 * (worst.x - centroid));
        const double fc = Eval(xc);
        if (Better(fc, worst.value)) {
          worst = Point{xc, fc};
        } else {
          for (int i = 1; i <= n; ++i) {
            simplex[i].x = clip(simplex[0].x + 0.5 * (simplex[i].x - simplex[0].x));
            simplex[i].value = Eval(simplex[i].x);
          }
        }
      }
    }
    order();
    return Better(simplex.front().value, p.value) ? simplex.front() : p;
  }

  const std::function<double(const Vector&)>& f_;
  const MaximizeOptions& opt_;
  int evals_ = 0;
};

}  // namespace

MaximizeResult MaximizeNonneg(const std::function<double(const Vector&)>& f,
                              const std::vector<Vector>& seeds,
                              const MaximizeOptions& opt) {
  const long count = static_cast<long>(seeds.size());
  std::vector<double> values(count, -kInf);
  std::exception_ptr failure;
  if (opt.exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic) num_threads(ThreadCount())
    for (long i = 0; i < count; ++i) {
      try {
        values[i] = f(seeds[i]);
      } catch (...) {
#pragma omp critical(etr_search_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long i = 0; i < count; ++i) values[i] = f(seeds[i]);
  }

  MaximizeResult out;
  out.evaluations = static_cast<int>(count);
  std::vector<long> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](long a, long b) { return values[a] > values[b]; });
  for (double v : values) out.finite_seeds += v > -kInf;
  if (count == 0) return out;
  out.x = seeds[idx[0]];
  out.value = values[idx[0]];
  if (out.value == -kInf) return out;

  std::vector<Point> starts;
  for (long i : idx) {
    if (static_cast<int>(starts.size()) >= opt.polish_starts) break;
    if (values[i] == -kInf) break;
    bool duplicate = false;
    for (const Point& s : starts) duplicate |= s.x == seeds[i];
    if (!duplicate) starts.push_back(Point{seeds[i], values[i]});
  }
  std::vector<Point> results(starts.size());
  std::vector<int> evals(starts.size(), 0);
  for (size_t s = 0; s < starts.size(); ++s) {
    Polisher polisher(f, opt);
    results[s] = polisher.Run(starts[s]);
    evals[s] = polisher.evaluations();
  }
  for (size_t s = 0; s < results.size(); ++s) {
    out.evaluations += evals[s];
    if (Better(results[s].value, out.value)) {
      out.x = results[s].x;
      out.value = results[s].value;
    }
  }
  return out;
}

std::vector<Vector> LevelGrid(int dim) {
  static const double kLevels[] = {0.0, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
  constexpr int kCount = 7;
  std::vector<Vector> out;
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= kCount;
  for (long code = 0; code < total; ++code) {
    Vector x(dim);
    long c = code;
    // Last coordinate varies fastest so (0, 0, 1) precedes (1, 0, 0).
    for (int i = dim - 1; i >= 0; --i) {
      x(i) = kLevels[c % kCount];
      c /= kCount;
    }
    out.push_back(x);
  }
  std::stable_sort(out.begin(), out.end(), [](const Vector& a, const Vector& b) {
    return a.lpNorm<1>() < b.lpNorm<1>();
  });
  return out;
}

std::vector<Vector> RandomSeeds(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-2.0, 3.0);
  std::uniform_int_distribution<int> zero(0, 3);
  std::vector<Vector> out;
  for (int k = 0; k < count; ++k) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) {
      x(i) = std::pow(10.0, expo(rng));
      if (zero(rng) == 0) x(i) = 0.0;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace etr::internal
