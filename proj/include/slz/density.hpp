#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace slz::density {

/// Image-space crowd evidence, persons per pixel, row-major.
struct DensityMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  DensityMap() = default;
  DensityMap(int w, int h);

  float at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  float& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  double total() const;
};

inline constexpr std::uint8_t kOccupied = 0;
inline constexpr std::uint8_t kFree = 255;

/// Binary image-plane map. After occupancy_from_density, 255 = people-free
/// and 0 = occupied.
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  OccupancyGrid() = default;
  OccupancyGrid(int w, int h, std::uint8_t fill);

  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// Continuous pixel coordinates; pixel (r, c) spans [c, c+1) x [r, r+1).
struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Error model standing in for a learned density generator.
struct OracleNoiseConfig {
  double sigma_px = 2.0;
  double fp_rate = 0.0;  // expected spurious blobs per frame
  double fn_rate = 0.0;  // per-head miss probability
  std::uint64_t seed = 0;

  void validate() const;
};

/// Blobs are truncated at this many standard deviations.
inline constexpr double kBlobSupportSigmas = 4.0;

/// Values with D - min(D) at or below this are treated as equal to the minimum.
inline constexpr double kMinimumTolerance = 1e-12;

/// Sum of unit-integral isotropic Gaussians centred on the retained heads plus
/// Poisson(fp_rate) spurious blobs. Deterministic in (inputs, seed).
DensityMap render_oracle_density(std::span<const PixelPoint> heads, const OracleNoiseConfig& cfg,
                                 int width, int height);

/// Binarize (D - min D > 0), dilate the positive set twice with a 5x5 box and
/// invert. Output: 255 free, 0 occupied.
OccupancyGrid occupancy_from_density(const DensityMap& d);

struct LoadReport {
  std::size_t clamped_pixels = 0;
};

// "DMAP <w> <h>\n" followed by w*h little-endian float32, row-major.
void save_density(const std::filesystem::path& path, const DensityMap& d);
DensityMap load_density(const std::filesystem::path& path, LoadReport* report = nullptr);

}  // namespace slz::density
