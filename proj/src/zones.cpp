#include "slz/zones.hpp"

#include <algorithm>

#include "slz/error.hpp"

namespace slz::zones {

void SlzConfig::validate() const {
  if (n_p < 1) throw InvalidArgument("n_p must be at least 1");
  if (!(r0 > 0.0)) throw InvalidArgument("r0 must be positive");
}

DistanceMap euclidean_distance_transform(const geometry::PlaneGrid& grid) {
  grid.validate();
  DistanceMap dm;
  dm.rows = grid.rows;
  dm.cols = grid.cols;
  dm.cell_size = grid.cell_size;
  dm.squared_cells = kernels::parallel::edt_squared(grid.values, grid.rows, grid.cols);
  return dm;
}

void mark_disk(geometry::PlaneGrid& grid, int row, int col, kernels::SqDist radius_sq) {
  const int reach = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius_sq)))) + 1;
  for (int r = std::max(0, row - reach); r <= std::min(grid.rows - 1, row + reach); ++r) {
    const kernels::SqDist dr = r - row;
    for (int c = std::max(0, col - reach); c <= std::min(grid.cols - 1, col + reach); ++c) {
      const kernels::SqDist dc = c - col;
      if (dr * dr + dc * dc <= radius_sq) grid.at(r, c) = density::kOccupied;
    }
  }
}

namespace {

struct Peak {
  int row = 0;
  int col = 0;
  kernels::SqDist squared = -1;
};

Peak find_peak(const std::vector<kernels::SqDist>& sq, int rows, int cols) {
  Peak best;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto v = sq[static_cast<std::size_t>(r) * cols + c];
      if (v > best.squared) best = {r, c, v};
    }
  }
  return best;
}

SlzProposal make_proposal(const geometry::PlaneGrid& grid, const Peak& p, int frame_index) {
  return {grid.center_x(p.col), grid.center_y(p.row),
          std::sqrt(static_cast<double>(p.squared)) * grid.cell_size, frame_index};
}

bool below_threshold(const Peak& p, const geometry::PlaneGrid& grid, double r0) {
  return p.squared <= 0 || std::sqrt(static_cast<double>(p.squared)) * grid.cell_size < r0;
}

}  // namespace

std::vector<SlzProposal> extract_slz(const geometry::PlaneGrid& grid, const SlzConfig& cfg,
                                     int frame_index) {
  cfg.validate();
  grid.validate();
  geometry::PlaneGrid work = grid;
  std::vector<kernels::SqDist> sq = kernels::parallel::edt_squared(work.values, work.rows, work.cols);

  // Scratch grid holding only the newest disk; cleared inside the window after use.
  geometry::PlaneGrid disk_only = work;
  std::fill(disk_only.values.begin(), disk_only.values.end(), density::kFree);

  std::vector<SlzProposal> out;
  while (static_cast<int>(out.size()) < cfg.n_p) {
    const Peak peak = find_peak(sq, work.rows, work.cols);
    if (below_threshold(peak, work, cfg.r0)) break;
    out.push_back(make_proposal(work, peak, frame_index));
    mark_disk(work, peak.row, peak.col, peak.squared);

    // Distances only shrink near the new disk: every old value is <= the peak,
    // and a cell 2R or more from the centre is at least R from the disk.
    const int reach =
        2 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(peak.squared)))) + 2;
    const int r0 = std::max(0, peak.row - reach);
    const int r1 = std::min(work.rows - 1, peak.row + reach);
    const int c0 = std::max(0, peak.col - reach);
    const int c1 = std::min(work.cols - 1, peak.col + reach);

    mark_disk(disk_only, peak.row, peak.col, peak.squared);
    const auto local = kernels::parallel::edt_squared_window(disk_only.values, work.cols, r0, c0,
                                                             r1 - r0 + 1, c1 - c0 + 1);
    const int wcols = c1 - c0 + 1;
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        auto& v = sq[static_cast<std::size_t>(r) * work.cols + c];
        v = std::min(v, local[static_cast<std::size_t>(r - r0) * wcols + (c - c0)]);
        disk_only.at(r, c) = density::kFree;
      }
    }
  }
  return out;
}

namespace reference {

std::vector<SlzProposal> extract_slz(const geometry::PlaneGrid& grid, const SlzConfig& cfg,
                                     int frame_index) {
  cfg.validate();
  grid.validate();
  geometry::PlaneGrid work = grid;
  std::vector<SlzProposal> out;
  while (static_cast<int>(out.size()) < cfg.n_p) {
    const auto sq = kernels::serial::edt_squared(work.values, work.rows, work.cols);
    const Peak peak = find_peak(sq, work.rows, work.cols);
    if (below_threshold(peak, work, cfg.r0)) break;
    out.push_back(make_proposal(work, peak, frame_index));
    mark_disk(work, peak.row, peak.col, peak.squared);
  }
  return out;
}

}  // namespace reference
}  // namespace slz::zones
