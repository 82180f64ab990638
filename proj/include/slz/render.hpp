#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "slz/geometry.hpp"
#include "slz/world.hpp"

namespace slz::render {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved r, g, b

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

// Binary P5 / P6 with maxval 255.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);
GrayImage read_pgm(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);

/// Head-plane occupancy, north up (row 0 of the image is the largest y).
GrayImage occupancy_image(const geometry::PlaneGrid& grid);

/// Top view of the ROI: imaged cells in grey levels, actors, proposals
/// (green), tracks (blue), target (red) and the drone position.
RgbImage composite(const world::FrameView& view, const world::Region& roi, double pixels_per_meter = 10.0);

}  // namespace slz::render
