#pragma once

#include <filesystem>
#include <iosfwd>

#include "slz/world.hpp"

namespace slz::world {

// One JSON object per line: a "mission" header, one "frame" record per tick
// and a closing "result" record.
void write_mission_log(std::ostream& out, const MissionLog& log);
void write_mission_log(const std::filesystem::path& path, const MissionLog& log);

MissionLog read_mission_log(std::istream& in);
MissionLog read_mission_log(const std::filesystem::path& path);

}  // namespace slz::world
