#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "slz/config.hpp"
#include "slz/eval.hpp"

namespace slz::cli {

inline constexpr int kExitCollision = 2;
inline constexpr int kExitTimeout = 3;
inline constexpr int kExitAborted = 4;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitMalformed = 65;
inline constexpr int kExitSoftware = 70;
inline constexpr int kExitIo = 74;

int exit_code(world::Outcome o);

/// Defaults, then the file when given, then the overrides.
RunConfig resolve_config(const std::optional<std::filesystem::path>& config, const Overrides& o);

// Output files inside cfg.out_dir:
//   run:    mission.jsonl, summary.csv, timing.csv, frames/frame_NNNNNN.{ppm,pgm}
//   batch:  summary.csv, report.csv, timing.csv
//   replay: frames.csv, summary.csv, timing.csv
// summary.csv and report.csv never contain wall-clock values.
int cmd_run(const RunConfig& cfg, std::ostream& msg);
int cmd_batch(const RunConfig& cfg, std::ostream& msg);
int cmd_replay(const std::filesystem::path& annotations, const std::filesystem::path& poses,
               const RunConfig& cfg, std::ostream& msg);

/// Summary row helpers shared by run and batch.
std::string summary_header();
std::string summary_row(const eval::MissionSummary& s);

/// Parses argv, dispatches and maps errors to exit codes.
int run_main(int argc, char** argv);

}  // namespace slz::cli
