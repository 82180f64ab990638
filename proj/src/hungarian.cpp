// Shortest augmenting path Hungarian method with row/column potentials,
// O(n^3) on the padded square matrix.

#include <algorithm>
#include <cmath>
#include <limits>

#include "slz/error.hpp"
#include "slz/tracking.hpp"

namespace slz::tracking {

std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0 || m == 0) return {};
  if (!cost.allFinite()) throw InvalidArgument("cost matrix has non-finite entries");

  const int size = std::max(n, m);
  const double sentinel = cost.cwiseAbs().maxCoeff() + 1.0;
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(size, size, sentinel);
  a.topLeftCorner(n, m) = cost;

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual start of each augmenting path.
  std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0);
  std::vector<int> match_of_col(size + 1, 0), way(size + 1, 0);

  for (int i = 1; i <= size; ++i) {
    match_of_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(size + 1, inf);
    std::vector<char> used(size + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= size; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= size; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j <= size; ++j) {
    const int row = match_of_col[j] - 1;
    const int col = j - 1;
    if (row < n && col < m) pairs.emplace_back(row, col);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace slz::tracking
