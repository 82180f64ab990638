#include "slz/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "slz/error.hpp"
#include "slz/kernels.hpp"

namespace slz::density {

DensityMap::DensityMap(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("density map size must be positive");
  values.assign(static_cast<std::size_t>(w) * h, 0.0f);
}

double DensityMap::total() const {
  double s = 0.0;
  for (float v : values) s += v;
  return s;
}

OccupancyGrid::OccupancyGrid(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("occupancy grid size must be positive");
  values.assign(static_cast<std::size_t>(w) * h, fill);
}

void OracleNoiseConfig::validate() const {
  if (!(sigma_px > 0.0)) throw InvalidArgument("sigma_px must be positive");
  if (!(fp_rate >= 0.0)) throw InvalidArgument("fp_rate must be non-negative");
  if (!(fn_rate >= 0.0 && fn_rate < 1.0)) throw InvalidArgument("fn_rate must lie in [0, 1)");
}

DensityMap render_oracle_density(std::span<const PixelPoint> heads, const OracleNoiseConfig& cfg,
                                 int width, int height) {
  cfg.validate();
  DensityMap d(width, height);

  std::mt19937_64 rng(cfg.seed);
  std::bernoulli_distribution miss(cfg.fn_rate);
  std::vector<kernels::Blob> blobs;
  blobs.reserve(heads.size());
  for (const PixelPoint& h : heads) {
    if (!miss(rng)) blobs.push_back({h.x, h.y});
  }
  if (cfg.fp_rate > 0.0) {
    std::poisson_distribution<int> spurious(cfg.fp_rate);
    std::uniform_real_distribution<double> ux(0.0, width);
    std::uniform_real_distribution<double> uy(0.0, height);
    const int n = spurious(rng);
    for (int i = 0; i < n; ++i) {
      const double x = ux(rng);
      blobs.push_back({x, uy(rng)});
    }
  }
  d.values = kernels::parallel::render_blobs(blobs, cfg.sigma_px, width, height);
  return d;
}

OccupancyGrid occupancy_from_density(const DensityMap& d) {
  if (d.width <= 0 || d.height <= 0 ||
      d.values.size() != static_cast<std::size_t>(d.width) * d.height) {
    throw InvalidArgument("density map has inconsistent dimensions");
  }
  float lo = d.values.front();
  for (float v : d.values) {
    if (!std::isfinite(v) || v < 0.0f) throw InvalidArgument("density values must be finite and >= 0");
    lo = std::min(lo, v);
  }

  std::vector<std::uint8_t> people(d.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    people[i] = (static_cast<double>(d.values[i]) - lo > kMinimumTolerance) ? 255 : 0;
  }
  auto grown = kernels::parallel::dilate_box(people, d.width, d.height, 2);
  grown = kernels::parallel::dilate_box(grown, d.width, d.height, 2);

  OccupancyGrid o;
  o.width = d.width;
  o.height = d.height;
  o.values = std::move(grown);
  for (auto& v : o.values) v = static_cast<std::uint8_t>(~v);
  return o;
}

namespace {

constexpr char kMagic[] = "DMAP";

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace

void save_density(const std::filesystem::path& path, const DensityMap& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kMagic << ' ' << d.width << ' ' << d.height << '\n';
  std::vector<std::uint32_t> raw(d.values.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = to_little_endian(std::bit_cast<std::uint32_t>(d.values[i]));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  if (!out) throw IoError("failed writing " + path.string());
}

DensityMap load_density(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::string header;
  if (!std::getline(in, header) || header.size() > 64) {
    throw MalformedFile(path.string() + ": missing header line");
  }
  std::istringstream hs(header);
  std::string magic;
  long w = 0;
  long h = 0;
  if (!(hs >> magic >> w >> h) || magic != kMagic) {
    throw MalformedFile(path.string() + ": bad magic or header");
  }
  std::string rest;
  if (hs >> rest) throw MalformedFile(path.string() + ": trailing header fields");
  if (w <= 0 || h <= 0 || w > (1L << 15) || h > (1L << 15)) {
    throw MalformedFile(path.string() + ": bad dimensions");
  }

  DensityMap d(static_cast<int>(w), static_cast<int>(h));
  std::vector<std::uint32_t> raw(d.values.size());
  const auto bytes = static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t));
  in.read(reinterpret_cast<char*>(raw.data()), bytes);
  if (in.gcount() != bytes) throw MalformedFile(path.string() + ": truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw MalformedFile(path.string() + ": payload longer than the header dimensions");
  }

  std::size_t clamped = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    float v = std::bit_cast<float>(to_little_endian(raw[i]));
    if (!std::isfinite(v)) throw MalformedFile(path.string() + ": non-finite density value");
    if (v < 0.0f) {
      v = 0.0f;
      ++clamped;
    }
    d.values[i] = v;
  }
  if (report) report->clamped_pixels = clamped;
  return d;
}

}  // namespace slz::density
