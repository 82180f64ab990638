#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "slz/pipeline.hpp"
#include "slz/world.hpp"

namespace slz::cli {

struct RunConfig {
  world::ScenarioConfig scenario;
  world::PipelineConfig pipeline;
  std::filesystem::path out_dir = "out";
  bool render = false;
  int runs = 100;

  void validate() const;
};

/// Command-line values; each one set here wins over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<world::Criterion> criterion;
  std::optional<bool> render;
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> frac_moving;
  std::optional<int> actors;  // sets both actors_min and actors_max
};

/// Parses an INI file over the built-in defaults. Unknown sections or keys
/// and unparsable values raise ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// INI text that parse_config reads back to the same configuration.
std::string dump_config(const RunConfig& cfg);

}  // namespace slz::cli
