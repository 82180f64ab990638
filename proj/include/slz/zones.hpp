#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "slz/geometry.hpp"
#include "slz/kernels.hpp"

namespace slz::zones {

/// Distance from every cell to the nearest occupied cell centre. The grid is
/// treated as surrounded by a ring of occupied cells, so free space never
/// extends past the mapped region.
struct DistanceMap {
  int rows = 0;
  int cols = 0;
  double cell_size = 1.0;
  std::vector<kernels::SqDist> squared_cells;

  kernels::SqDist squared(int row, int col) const {
    return squared_cells[static_cast<std::size_t>(row) * cols + col];
  }
  double meters(int row, int col) const {
    return std::sqrt(static_cast<double>(squared(row, col))) * cell_size;
  }
};

struct SlzProposal {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  int frame_index = 0;

  bool operator==(const SlzProposal&) const = default;
};

struct SlzConfig {
  int n_p = 10;
  double r0 = 1.0;

  void validate() const;
};

DistanceMap euclidean_distance_transform(const geometry::PlaneGrid& grid);

/// Repeatedly takes the largest inscribed circle, emits it and marks it
/// occupied, until n_p proposals or the best radius drops below r0. Ties in
/// the maximum go to the lowest (row, col).
std::vector<SlzProposal> extract_slz(const geometry::PlaneGrid& grid, const SlzConfig& cfg,
                                     int frame_index);

namespace reference {

/// Same contract as extract_slz, recomputing the full distance transform with
/// the serial kernel after every emitted circle.
std::vector<SlzProposal> extract_slz(const geometry::PlaneGrid& grid, const SlzConfig& cfg,
                                     int frame_index);

}  // namespace reference

/// Marks cells whose centre is within the disk (squared cell distance <=
/// radius_sq) around (row, col) occupied.
void mark_disk(geometry::PlaneGrid& grid, int row, int col, kernels::SqDist radius_sq);

}  // namespace slz::zones
