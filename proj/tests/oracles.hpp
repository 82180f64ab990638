#pragma once

// Slow, obviously-correct versions of the library algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Grid = std::vector<std::uint8_t>;  // 0 occupied, 255 free, row-major

/// Squared distance from every cell to the nearest occupied cell, the grid
/// being surrounded by occupied cells at row -1, row rows, col -1, col cols.
/// All pairs, O((rows*cols)^2).
inline std::vector<std::int64_t> edt_squared(const Grid& g, int rows, int cols) {
  std::vector<std::pair<int, int>> occupied;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (g[static_cast<std::size_t>(r) * cols + c] == 0) occupied.emplace_back(r, c);
    }
  }
  std::vector<std::int64_t> out(g.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Ring cells: the closest one shares the row or the column of (r, c).
      std::int64_t best = std::min({std::int64_t(r + 1) * (r + 1), std::int64_t(rows - r) * (rows - r),
                                    std::int64_t(c + 1) * (c + 1), std::int64_t(cols - c) * (cols - c)});
      for (const auto& [orow, ocol] : occupied) {
        const std::int64_t dr = r - orow;
        const std::int64_t dc = c - ocol;
        best = std::min(best, dr * dr + dc * dc);
      }
      out[static_cast<std::size_t>(r) * cols + c] = best;
    }
  }
  return out;
}

/// Ring cells spelled out one by one, for checking the shortcut above.
inline std::int64_t ring_distance_explicit(int r, int c, int rows, int cols) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  const auto consider = [&](int rr, int cc) {
    const std::int64_t dr = r - rr;
    const std::int64_t dc = c - cc;
    best = std::min(best, dr * dr + dc * dc);
  };
  for (int cc = -1; cc <= cols; ++cc) {
    consider(-1, cc);
    consider(rows, cc);
  }
  for (int rr = -1; rr <= rows; ++rr) {
    consider(rr, -1);
    consider(rr, cols);
  }
  return best;
}

struct EmptyCircle {
  int row = 0;
  int col = 0;
  std::int64_t squared = 0;
};

/// Largest circle centred on a cell whose interior holds no occupied or ring
/// cell. Every maximiser is returned.
inline std::vector<EmptyCircle> largest_empty_circles(const Grid& g, int rows, int cols) {
  const auto d = edt_squared(g, rows, cols);
  const auto best = *std::max_element(d.begin(), d.end());
  std::vector<EmptyCircle> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (d[static_cast<std::size_t>(r) * cols + c] == best) out.push_back({r, c, best});
    }
  }
  return out;
}

/// Minimum assignment cost over all injective maps of the smaller side.
inline double min_assignment_cost(const Eigen::MatrixXd& cost) {
  const bool transpose = cost.rows() > cost.cols();
  const Eigen::MatrixXd c = transpose ? Eigen::MatrixXd(cost.transpose()) : cost;
  const int n = static_cast<int>(c.rows());
  const int m = static_cast<int>(c.cols());
  std::vector<int> cols(static_cast<std::size_t>(m));
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  // Every permutation of the columns; the first n entries are the assignment.
  do {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += c(i, cols[static_cast<std::size_t>(i)]);
    best = std::min(best, sum);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

struct Disk {
  double x, y, r;
};

/// Uniform samples in the joint bounding box.
inline double monte_carlo_iou(const Disk& a, const Disk& b, long samples, std::uint64_t seed) {
  const double x0 = std::min(a.x - a.r, b.x - b.r);
  const double x1 = std::max(a.x + a.r, b.x + b.r);
  const double y0 = std::min(a.y - a.r, b.y - b.r);
  const double y1 = std::max(a.y + a.r, b.y + b.r);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1);
  std::uniform_real_distribution<double> uy(y0, y1);
  long inter = 0;
  long uni = 0;
  for (long i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    const bool in_a = (x - a.x) * (x - a.x) + (y - a.y) * (y - a.y) <= a.r * a.r;
    const bool in_b = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y) <= b.r * b.r;
    inter += in_a && in_b;
    uni += in_a || in_b;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Box dilation of the nonzero set by brute-force neighbourhood scan.
inline std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask, int w, int h, int radius) {
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int yy = y + dy;
          const int xx = x + dx;
          if (yy >= 0 && yy < h && xx >= 0 && xx < w && mask[static_cast<std::size_t>(yy) * w + xx]) {
            out[static_cast<std::size_t>(y) * w + x] = 1;
          }
        }
      }
    }
  }
  return out;
}

/// Pinhole projection written out component by component.
inline Eigen::Vector3d project(const Eigen::Matrix3d& r, const Eigen::Vector3d& t, double fx, double fy,
                               double cx, double cy, const Eigen::Vector3d& p) {
  const double xc = r(0, 0) * p.x() + r(0, 1) * p.y() + r(0, 2) * p.z() + t.x();
  const double yc = r(1, 0) * p.x() + r(1, 1) * p.y() + r(1, 2) * p.z() + t.y();
  const double zc = r(2, 0) * p.x() + r(2, 1) * p.y() + r(2, 2) * p.z() + t.z();
  return {fx * xc / zc + cx, fy * yc / zc + cy, zc};
}

/// Random occupancy grid with the given fraction of occupied cells.
inline Grid random_grid(int rows, int cols, double occupied_fraction, std::mt19937_64& rng) {
  std::bernoulli_distribution occ(occupied_fraction);
  Grid g(static_cast<std::size_t>(rows) * cols);
  for (auto& v : g) v = occ(rng) ? 0 : 255;
  return g;
}

}  // namespace oracle
