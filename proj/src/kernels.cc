#include "etr/kernels.h"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>

#include "etr/error.h"

namespace etr {

int ThreadCount() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("RELAX_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      threads = std::min<long>(threads, cap);
    }
  }
  return std::max(1, threads);
}

namespace kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kBlock = 1024;

void CheckOrder(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "kernel expects a square matrix");
  }
  if (a.rows() > kMaxSubsetOrder) {
    throw Error(ErrorCode::kDimensionTooLarge,
                "subset enumeration is capped at order " +
                    std::to_string(kMaxSubsetOrder) + ", got " +
                    std::to_string(a.rows()));
  }
}

std::vector<int> Bits(std::uint32_t mask) {
  std::vector<int> idx;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) idx.push_back(i);
  }
  return idx;
}

Matrix Principal(const Matrix& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Matrix sub(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sub(i, j) = a(idx[i], idx[j]);
  }
  return sub;
}

// All masks of a given popcount over n bits, ascending.
std::vector<std::uint32_t> MasksOfSize(int n, int size) {
  std::vector<std::uint32_t> out;
  if (size == 0 || size > n) return out;
  std::uint32_t m = (1u << size) - 1u;
  const std::uint32_t limit = 1u << n;
  while (m < limit) {
    out.push_back(m);
    const std::uint32_t c = m & (~m + 1u);
    const std::uint32_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

// Sign-normalized eigenvector if it is nonnegative up to roundoff.
std::optional<Vector> NonnegativeDirection(Vector x) {
  if (x.sum() < 0) x = -x;
  if (x.minCoeff() < -1e-12) return std::nullopt;
  x = x.cwiseMax(0.0);
  const double nrm = x.norm();
  if (nrm == 0.0) return std::nullopt;
  return x / nrm;
}

Vector Pad(const Vector& xs, const std::vector<int>& idx, int n) {
  Vector x = Vector::Zero(n);
  for (size_t i = 0; i < idx.size(); ++i) x(idx[i]) = xs(i);
  return x;
}

// Runs body(i) for i in [0, count), in parallel when requested, and rethrows
// the first exception raised by any iteration.
template <typename Body>
void ForEach(long count, Execution exec, Body body) {
  if (exec == Execution::kSerial) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) num_threads(ThreadCount())
  for (long i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(etr_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::optional<OrthantEigenpair> TestMask(const Matrix& a, std::uint32_t mask,
                                         double threshold) {
  const std::vector<int> idx = Bits(mask);
  const Matrix sub = Principal(a, idx);
  const EigDecomp e = Eig(SymMat(sub));
  for (int k = 0; k < e.values.size() && e.values(k) < -threshold; ++k) {
    const std::optional<Vector> xs = NonnegativeDirection(e.vectors.col(k));
    if (!xs) continue;
    if (xs->dot(sub * *xs) >= -1e-12) continue;
    return OrthantEigenpair{mask, e.values(k), Pad(*xs, idx, a.rows())};
  }
  return std::nullopt;
}

}  // namespace

std::optional<OrthantEigenpair> FindNegativeOrthantEigenpair(
    const Matrix& a, double threshold, Execution exec) {
  CheckOrder(a);
  const int n = static_cast<int>(a.rows());
  for (int size = 1; size <= n; ++size) {
    const std::vector<std::uint32_t> masks = MasksOfSize(n, size);
    std::vector<std::optional<OrthantEigenpair>> found(masks.size());
    ForEach(static_cast<long>(masks.size()), exec, [&](long i) {
      found[i] = TestMask(a, masks[i], threshold);
    });
    for (auto& f : found) {
      if (f) return f;
    }
  }
  return std::nullopt;
}

double MinParetoEigenvalue(const Matrix& a, Vector* argmin, Execution exec) {
  CheckOrder(a);
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty matrix");
  const long total = (1L << n) - 1;
  std::vector<double> best(total, kInf);
  std::vector<Vector> where(total);
  ForEach(total, exec, [&](long i) {
    const std::uint32_t mask = static_cast<std::uint32_t>(i + 1);
    const std::vector<int> idx = Bits(mask);
    const EigDecomp e = Eig(SymMat(Principal(a, idx)));
    for (int k = 0; k < e.values.size(); ++k) {
      const std::optional<Vector> xs = NonnegativeDirection(e.vectors.col(k));
      if (!xs) continue;
      best[i] = e.values(k);
      where[i] = Pad(*xs, idx, n);
      break;
    }
  });
  long arg = -1;
  for (long i = 0; i < total; ++i) {
    if (best[i] < kInf && (arg < 0 || best[i] < best[arg])) arg = i;
  }
  if (argmin) *argmin = where[arg];
  return best[arg];
}

double SimplexMinimum(const Matrix& a, Vector* argmin, Execution exec) {
  CheckOrder(a);
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty matrix");
  const long total = (1L << n) - 1;
  std::vector<double> best(total, kInf);
  std::vector<Vector> where(total);
  ForEach(total, exec, [&](long i) {
    const std::uint32_t mask = static_cast<std::uint32_t>(i + 1);
    const std::vector<int> idx = Bits(mask);
    const int k = static_cast<int>(idx.size());
    // [A_S -1; 1^T 0] [x; lambda] = [0; 1].
    Matrix sys = Matrix::Zero(k + 1, k + 1);
    sys.topLeftCorner(k, k) = Principal(a, idx);
    sys.block(0, k, k, 1).setConstant(-1.0);
    sys.block(k, 0, 1, k).setConstant(1.0);
    Vector rhs = Vector::Zero(k + 1);
    rhs(k) = 1.0;
    Eigen::FullPivLU<Matrix> lu(sys);
    if (lu.rank() < k + 1) return;
    Vector xs = lu.solve(rhs).head(k);
    if (xs.minCoeff() < -1e-12) return;
    xs = xs.cwiseMax(0.0);
    xs /= xs.sum();
    const Vector x = Pad(xs, idx, n);
    best[i] = x.dot(a * x);
    where[i] = x;
  });
  long arg = -1;
  for (long i = 0; i < total; ++i) {
    if (best[i] < kInf && (arg < 0 || best[i] < best[arg])) arg = i;
  }
  if (argmin) *argmin = where[arg];
  return best[arg];
}

SampleMin SampleConeMinimum(const Matrix& m, int k, long num_samples,
                            std::uint64_t seed, Execution exec) {
  const int dim = static_cast<int>(m.rows());
  if (m.cols() != dim || k < 0 || k > dim || dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "bad cone sampling input");
  }
  const long blocks = (num_samples + kBlock - 1) / kBlock;
  std::vector<SampleMin> per_block(blocks, SampleMin{kInf, Vector()});
  ForEach(blocks, exec, [&](long blk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(blk)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g;
    const long count = std::min(kBlock, num_samples - blk * kBlock);
    Vector v(dim);
    SampleMin best{kInf, Vector()};
    for (long s = 0; s < count; ++s) {
      for (int i = 0; i < dim; ++i) v(i) = g(rng);
      v.head(k) = v.head(k).cwiseAbs();
      v.normalize();
      const double q = v.dot(m * v);
      if (q < best.value) best = SampleMin{q, v};
    }
    per_block[blk] = std::move(best);
  });
  SampleMin out{kInf, Vector()};
  for (auto& b : per_block) {
    if (b.value < out.value) out = std::move(b);
  }
  return out;
}

std::vector<GridPoint> GridBest(const Vector& lo, const Vector& hi,
                                int per_axis,
                                const std::function<double(const Vector&)>& f,
                                int keep, Execution exec) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n || per_axis < 2 || n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad grid specification");
  }
  long total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  auto point = [&](long index) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      const long c = index % per_axis;
      index /= per_axis;
      x(i) = lo(i) + (hi(i) - lo(i)) * static_cast<double>(c) / (per_axis - 1);
    }
    return x;
  };
  std::vector<double> values(total);
  const long blocks = (total + kBlock - 1) / kBlock;
  ForEach(blocks, exec, [&](long blk) {
    const long end = std::min(total, (blk + 1) * kBlock);
    for (long i = blk * kBlock; i < end; ++i) values[i] = f(point(i));
  });
  std::vector<long> order;
  for (long i = 0; i < total; ++i) {
    if (values[i] < kInf) order.push_back(i);
  }
  const long take = std::min<long>(keep, static_cast<long>(order.size()));
  std::partial_sort(order.begin(), order.begin() + take, order.end(),
                    [&](long x, long y) {
                      return values[x] < values[y] ||
                             (values[x] == values[y] && x < y);
                    });
  std::vector<GridPoint> out;
  for (long i = 0; i < take; ++i) {
    out.push_back(GridPoint{order[i], values[order[i]], point(order[i])});
  }
  return out;
}

}  // namespace kernels
}  // namespace etr
