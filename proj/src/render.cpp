#include "slz/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "slz/error.hpp"

namespace slz::render {

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  auto* p = &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

namespace {

void write_netpbm(const std::filesystem::path& path, const char* magic, int w, int h,
                  const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << magic << '\n' << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

// Header tokens are separated by whitespace; '#' starts a comment line.
int header_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  int v = -1;
  if (!(in >> v) || v < 0) throw MalformedFile(path.string() + ": bad header");
  return v;
}

std::vector<std::uint8_t> read_netpbm(const std::filesystem::path& path, const char* magic, int channels,
                                      int& w, int& h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string m;
  in >> m;
  if (m != magic) throw MalformedFile(path.string() + ": expected " + magic);
  w = header_int(in, path);
  h = header_int(in, path);
  if (header_int(in, path) != 255) throw MalformedFile(path.string() + ": maxval must be 255");
  if (!std::isspace(in.get())) throw MalformedFile(path.string() + ": bad header");
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) {
    throw MalformedFile(path.string() + ": truncated pixel data");
  }
  if (in.peek() != EOF) throw MalformedFile(path.string() + ": trailing bytes");
  return data;
}

void draw_circle(RgbImage& img, double cx, double cy, double r, std::uint8_t red, std::uint8_t green,
                 std::uint8_t blue) {
  const int steps = std::max(16, static_cast<int>(2.0 * std::numbers::pi * r * 2.0));
  for (int i = 0; i < steps; ++i) {
    const double a = 2.0 * std::numbers::pi * i / steps;
    img.set(static_cast<int>(std::floor(cx + r * std::cos(a))), static_cast<int>(std::floor(cy + r * std::sin(a))),
            red, green, blue);
  }
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_netpbm(path, "P5", img.width, img.height, img.pixels);
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  write_netpbm(path, "P6", img.width, img.height, img.pixels);
}

GrayImage read_pgm(const std::filesystem::path& path) {
  GrayImage img;
  img.pixels = read_netpbm(path, "P5", 1, img.width, img.height);
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  RgbImage img;
  img.pixels = read_netpbm(path, "P6", 3, img.width, img.height);
  return img;
}

GrayImage occupancy_image(const geometry::PlaneGrid& grid) {
  GrayImage img{grid.cols, grid.rows, std::vector<std::uint8_t>(grid.values.size())};
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      img.pixels[static_cast<std::size_t>(grid.rows - 1 - r) * grid.cols + c] = grid.at(r, c);
    }
  }
  return img;
}

RgbImage composite(const world::FrameView& view, const world::Region& roi, double ppm) {
  RgbImage img;
  img.width = std::max(1, static_cast<int>(std::ceil((roi.max_x - roi.min_x) * ppm)));
  img.height = std::max(1, static_cast<int>(std::ceil((roi.max_y - roi.min_y) * ppm)));
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 40);

  const auto px = [&](double x) { return (x - roi.min_x) * ppm; };
  const auto py = [&](double y) { return (roi.max_y - y) * ppm; };

  if (view.perception) {
    const auto& g = view.perception->grid;
    const auto& mapped = view.perception->mapped;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const double wx = roi.min_x + (x + 0.5) / ppm;
        const double wy = roi.max_y - (y + 0.5) / ppm;
        const int c = static_cast<int>(std::lround((wx - g.origin_x) / g.cell_size));
        const int r = static_cast<int>(std::lround((wy - g.origin_y) / g.cell_size));
        if (r < 0 || c < 0 || r >= g.rows || c >= g.cols || mapped.at(r, c) == density::kOccupied) continue;
        const std::uint8_t v = g.at(r, c) == density::kFree ? 200 : 90;
        img.set(x, y, v, v, v);
      }
    }
  }

  const auto& rec = view.record;
  for (const auto& a : rec.actors) {
    const int x = static_cast<int>(std::floor(px(a.x())));
    const int y = static_cast<int>(std::floor(py(a.y())));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) img.set(x + dx, y + dy, 230, 200, 30);
    }
  }
  for (const auto& p : rec.proposals) draw_circle(img, px(p.cx), py(p.cy), p.radius * ppm, 40, 210, 60);
  for (const auto& t : rec.tracks) draw_circle(img, px(t.x), py(t.y), t.r * ppm, 60, 110, 240);
  if (rec.target) draw_circle(img, px(rec.target->x), py(rec.target->y), rec.target->r * ppm, 240, 40, 40);

  const int dx = static_cast<int>(std::floor(px(rec.drone.x())));
  const int dy = static_cast<int>(std::floor(py(rec.drone.y())));
  for (int k = -3; k <= 3; ++k) {
    img.set(dx + k, dy, 255, 255, 255);
    img.set(dx, dy + k, 255, 255, 255);
  }
  return img;
}

}  // namespace slz::render
