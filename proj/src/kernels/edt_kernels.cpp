// Exact squared Euclidean distance transform by lower envelopes of parabolas,
// one dimension at a time. Everything is integer: parabola intersections are
// kept as fractions so the envelope never depends on floating-point rounding.

#include <algorithm>
#include <vector>

#include "slz/kernels.hpp"

namespace slz::kernels {
namespace {

struct Fraction {
  SqDist num;
  SqDist den;  // > 0
};

struct Envelope {
  std::vector<int> site;
  std::vector<SqDist> height;
  std::vector<Fraction> start;  // start[k] = left end of parabola k's region
  std::vector<bool> start_is_neg_inf;

  void reserve(int n) {
    site.resize(n + 2);
    height.resize(n + 2);
    start.resize(n + 2);
    start_is_neg_inf.resize(n + 2);
  }
};

inline Fraction intersect(int p, SqDist fp, int q, SqDist fq) {
  return {(fq + SqDist(q) * q) - (fp + SqDist(p) * p), 2 * SqDist(q - p)};
}

inline bool less_equal(const Fraction& a, const Fraction& b) {
  return a.num * b.den <= b.num * a.den;
}

// f holds n samples with the given stride. With ring=true, zero-height sites
// sit at -1 and n. Writes n squared distances (or kUnreachable) to out.
void transform_1d(const SqDist* f, int n, std::ptrdiff_t stride, bool ring, SqDist* out,
                  std::ptrdiff_t out_stride, Envelope& env) {
  int k = -1;
  auto push = [&](int q, SqDist fq) {
    if (k < 0) {
      k = 0;
      env.site[0] = q;
      env.height[0] = fq;
      env.start_is_neg_inf[0] = true;
      return;
    }
    Fraction s{};
    while (true) {
      s = intersect(env.site[k], env.height[k], q, fq);
      if (!env.start_is_neg_inf[k] && less_equal(s, env.start[k])) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    env.site[k] = q;
    env.height[k] = fq;
    env.start[k] = s;
    env.start_is_neg_inf[k] = false;
  };

  if (ring) push(-1, 0);
  for (int q = 0; q < n; ++q) {
    const SqDist fq = f[q * stride];
    if (fq < kUnreachable) push(q, fq);
  }
  if (ring) push(n, 0);

  if (k < 0) {
    for (int x = 0; x < n; ++x) out[x * out_stride] = kUnreachable;
    return;
  }
  const int last = k;
  k = 0;
  for (int x = 0; x < n; ++x) {
    // advance while the next parabola starts strictly before x
    while (k < last && env.start[k + 1].num < SqDist(x) * env.start[k + 1].den) ++k;
    const SqDist dx = x - env.site[k];
    out[x * out_stride] = dx * dx + env.height[k];
  }
}

std::vector<SqDist> transform_2d(std::span<const std::uint8_t> values, int grid_cols, int row0,
                                 int col0, int rows, int cols, bool ring, bool use_threads) {
  std::vector<SqDist> vertical(static_cast<std::size_t>(rows) * cols);
  std::vector<SqDist> out(static_cast<std::size_t>(rows) * cols);

#pragma omp parallel if (use_threads)
  {
    Envelope env;
    env.reserve(std::max(rows, cols) + 2);
    std::vector<SqDist> seeds(rows);
#pragma omp for schedule(static)
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) {
        seeds[r] = values[static_cast<std::size_t>(row0 + r) * grid_cols + col0 + c] == 0
                       ? 0
                       : kUnreachable;
      }
      transform_1d(seeds.data(), rows, 1, ring, vertical.data() + c, cols, env);
    }
#pragma omp for schedule(static)
    for (int r = 0; r < rows; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * cols;
      transform_1d(vertical.data() + base, cols, 1, ring, out.data() + base, 1, env);
    }
  }
  return out;
}

}  // namespace

namespace serial {

std::vector<SqDist> edt_squared(std::span<const std::uint8_t> values, int rows, int cols) {
  return transform_2d(values, cols, 0, 0, rows, cols, true, false);
}

}  // namespace serial

namespace parallel {

std::vector<SqDist> edt_squared(std::span<const std::uint8_t> values, int rows, int cols) {
  return transform_2d(values, cols, 0, 0, rows, cols, true, true);
}

std::vector<SqDist> edt_squared_window(std::span<const std::uint8_t> values, int grid_cols,
                                       int row0, int col0, int rows, int cols) {
  return transform_2d(values, grid_cols, row0, col0, rows, cols, false, true);
}

}  // namespace parallel
}  // namespace slz::kernels
