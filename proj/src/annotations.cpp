#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "slz/error.hpp"
#include "slz/eval.hpp"
#include "slz/format.hpp"

namespace slz::eval {

namespace {

constexpr const char* kHeadsMagic = "HEADS v1";
constexpr const char* kPoseMagic = "POSE v1";

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void read_magic(std::istream& in, const std::filesystem::path& path, const char* magic) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedFile(where(path, 1) + "missing header");
  strip_cr(line);
  if (line != magic) throw MalformedFile(where(path, 1) + "expected header '" + magic + "'");
}

int field_int(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  const auto v = text::parse_int(s);
  if (!v || *v < 0 || *v > std::numeric_limits<int>::max()) {
    throw MalformedFile(where(path, line) + "bad integer '" + std::string(s) + "'");
  }
  return static_cast<int>(*v);
}

double field_double(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  const auto v = text::parse_double(s);
  if (!v || !std::isfinite(*v)) {
    throw MalformedFile(where(path, line) + "bad number '" + std::string(s) + "'");
  }
  return *v;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<HeadAnnotation> read_annotations(const std::filesystem::path& path) {
  auto in = open_input(path);
  read_magic(in, path, kHeadsMagic);
  std::vector<HeadAnnotation> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = text::split(line, ',');
    if (f.size() != 4) throw MalformedFile(where(path, n) + "expected 4 fields");
    HeadAnnotation h{field_int(f[0], path, n), field_int(f[1], path, n), field_double(f[2], path, n),
                     field_double(f[3], path, n)};
    if (!out.empty() && h.frame_id < out.back().frame_id) {
      throw MalformedFile(where(path, n) + "frame ids must be non-decreasing");
    }
    out.push_back(h);
  }
  return out;
}

void write_annotations(const std::filesystem::path& path, std::span<const HeadAnnotation> heads) {
  auto out = open_output(path);
  out << kHeadsMagic << '\n';
  for (const auto& h : heads) {
    out << h.frame_id << ',' << h.head_id << ',' << text::format_double(h.x) << ','
        << text::format_double(h.y) << '\n';
  }
  finish(out, path);
}

std::vector<world::FramePose> read_poses(const std::filesystem::path& path) {
  auto in = open_input(path);
  read_magic(in, path, kPoseMagic);
  std::vector<world::FramePose> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = text::split(line, ',');
    if (f.size() != 8) throw MalformedFile(where(path, n) + "expected 8 fields");
    world::FramePose p;
    p.frame_id = field_int(f[0], path, n);
    p.translation = {field_double(f[1], path, n), field_double(f[2], path, n), field_double(f[3], path, n)};
    p.rotation = Eigen::Quaterniond(field_double(f[7], path, n), field_double(f[4], path, n),
                                    field_double(f[5], path, n), field_double(f[6], path, n));
    if (std::abs(p.rotation.norm() - 1.0) > 1e-6) {
      throw MalformedFile(where(path, n) + "quaternion is not unit length");
    }
    if (!out.empty() && p.frame_id <= out.back().frame_id) {
      throw MalformedFile(where(path, n) + "frame ids must be strictly increasing");
    }
    out.push_back(p);
  }
  return out;
}

void write_poses(const std::filesystem::path& path, std::span<const world::FramePose> poses) {
  auto out = open_output(path);
  out << kPoseMagic << '\n';
  for (const auto& p : poses) {
    const auto& t = p.translation;
    const auto& q = p.rotation;
    out << p.frame_id << ',' << text::format_double(t.x()) << ',' << text::format_double(t.y()) << ','
        << text::format_double(t.z()) << ',' << text::format_double(q.x()) << ','
        << text::format_double(q.y()) << ',' << text::format_double(q.z()) << ','
        << text::format_double(q.w()) << '\n';
  }
  finish(out, path);
}

}  // namespace slz::eval
