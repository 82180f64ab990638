#include <algorithm>
#include <cmath>
#include <numbers>

#include "slz/kernels.hpp"

namespace slz::kernels {
namespace {

struct BlobShape {
  double support;     // truncation radius, pixels
  double support_sq;
  double inv_two_var;
  double norm;

  explicit BlobShape(double sigma)
      : support(density::kBlobSupportSigmas * sigma),
        support_sq(support * support),
        inv_two_var(1.0 / (2.0 * sigma * sigma)),
        norm(1.0 / (2.0 * std::numbers::pi * sigma * sigma)) {}
};

// Column range [first, last] of pixel centres within the support of a blob
// on a given row offset, or an empty range (first > last).
inline void column_span(const BlobShape& s, const Blob& b, double dy, int width, int& first,
                        int& last) {
  const double half = std::sqrt(std::max(0.0, s.support_sq - dy * dy));
  first = std::max(0, static_cast<int>(std::floor(b.x - half - 0.5)));
  last = std::min(width - 1, static_cast<int>(std::ceil(b.x + half - 0.5)));
}

inline void accumulate_row(const BlobShape& s, const Blob& b, int row, int width, float* out) {
  const double dy = (row + 0.5) - b.y;
  if (std::abs(dy) > s.support) return;
  int first = 0;
  int last = -1;
  column_span(s, b, dy, width, first, last);
  for (int c = first; c <= last; ++c) {
    const double dx = (c + 0.5) - b.x;
    const double d2 = dx * dx + dy * dy;
    if (d2 <= s.support_sq) out[c] += static_cast<float>(s.norm * std::exp(-d2 * s.inv_two_var));
  }
}

inline void row_span(const BlobShape& s, const Blob& b, int height, int& first, int& last) {
  first = std::max(0, static_cast<int>(std::floor(b.y - s.support - 0.5)));
  last = std::min(height - 1, static_cast<int>(std::ceil(b.y + s.support - 0.5)));
}

}  // namespace

namespace serial {

std::vector<float> render_blobs(std::span<const Blob> blobs, double sigma, int width, int height) {
  std::vector<float> out(static_cast<std::size_t>(width) * height, 0.0f);
  const BlobShape shape(sigma);
  for (const Blob& b : blobs) {
    int first = 0;
    int last = -1;
    row_span(shape, b, height, first, last);
    for (int r = first; r <= last; ++r) {
      accumulate_row(shape, b, r, width, out.data() + static_cast<std::size_t>(r) * width);
    }
  }
  return out;
}

std::vector<std::uint8_t> dilate_box(std::span<const std::uint8_t> mask, int width, int height,
                                     int radius) {
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      std::uint8_t v = 0;
      for (int dr = -radius; dr <= radius && v == 0; ++dr) {
        const int rr = r + dr;
        if (rr < 0 || rr >= height) continue;
        for (int dc = -radius; dc <= radius; ++dc) {
          const int cc = c + dc;
          if (cc < 0 || cc >= width) continue;
          if (mask[static_cast<std::size_t>(rr) * width + cc] != 0) {
            v = 255;
            break;
          }
        }
      }
      out[static_cast<std::size_t>(r) * width + c] = v;
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<float> render_blobs(std::span<const Blob> blobs, double sigma, int width, int height) {
  std::vector<float> out(static_cast<std::size_t>(width) * height, 0.0f);
  const BlobShape shape(sigma);
  const long n = static_cast<long>(blobs.size());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    float* row = out.data() + static_cast<std::size_t>(r) * width;
    for (long i = 0; i < n; ++i) accumulate_row(shape, blobs[i], r, width, row);
  }
  return out;
}

std::vector<std::uint8_t> dilate_box(std::span<const std::uint8_t> mask, int width, int height,
                                     int radius) {
  std::vector<std::uint8_t> horizontal(mask.size(), 0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const std::uint8_t* in = mask.data() + static_cast<std::size_t>(r) * width;
    std::uint8_t* out = horizontal.data() + static_cast<std::size_t>(r) * width;
    for (int c = 0; c < width; ++c) {
      const int lo = std::max(0, c - radius);
      const int hi = std::min(width - 1, c + radius);
      std::uint8_t v = 0;
      for (int k = lo; k <= hi; ++k) v = std::max(v, in[k]);
      out[c] = v != 0 ? 255 : 0;
    }
  }
  std::vector<std::uint8_t> out(mask.size(), 0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const int lo = std::max(0, r - radius);
    const int hi = std::min(height - 1, r + radius);
    std::uint8_t* dst = out.data() + static_cast<std::size_t>(r) * width;
    for (int k = lo; k <= hi; ++k) {
      const std::uint8_t* src = horizontal.data() + static_cast<std::size_t>(k) * width;
      for (int c = 0; c < width; ++c) dst[c] = std::max(dst[c], src[c]);
    }
  }
  return out;
}

}  // namespace parallel
}  // namespace slz::kernels
