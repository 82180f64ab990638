#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

// Per-test scratch directory, wiped on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* base = std::getenv("SLZ_TEST_TMP");
  std::filesystem::path root = base ? base : std::filesystem::temp_directory_path() / "slz_tests";
  const auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}
