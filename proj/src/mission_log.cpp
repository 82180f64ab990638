#include "slz/mission_log.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>

#include "slz/error.hpp"

namespace slz::world {

namespace {

using nlohmann::json;

json vec(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }
json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json circle_json(const tracking::Circle& c) { return {{"x", c.x}, {"y", c.y}, {"r", c.r}}; }

json track_json(const TrackSnapshot& t) {
  return {{"id", t.id}, {"x", t.x}, {"y", t.y}, {"r", t.r}, {"age", t.age}, {"misses", t.misses}};
}

json frame_json(const FrameRecord& f) {
  json j;
  j["record"] = "frame";
  j["frame"] = f.frame;
  j["time"] = f.time;
  j["pose"] = {{"frame_id", f.pose.frame_id},
               {"t", vec(f.pose.translation)},
               {"q", json::array({f.pose.rotation.x(), f.pose.rotation.y(), f.pose.rotation.z(),
                                  f.pose.rotation.w()})}};
  j["drone"] = vec(f.drone);
  j["yaw"] = f.yaw;
  j["actors"] = json::array();
  for (const auto& a : f.actors) j["actors"].push_back(vec(a));
  j["proposals"] = json::array();
  for (const auto& p : f.proposals) {
    j["proposals"].push_back({{"cx", p.cx}, {"cy", p.cy}, {"r", p.radius}, {"frame", p.frame_index}});
  }
  j["tracks"] = json::array();
  for (const auto& t : f.tracks) j["tracks"].push_back(track_json(t));
  j["target"] = f.target ? track_json(*f.target) : json(nullptr);
  j["command"] = {{"kind", to_string(f.command.kind)}, {"waypoint", vec(f.command.waypoint)}};
  j["ground_truth"] = json::array();
  for (const auto& c : f.ground_truth) j["ground_truth"].push_back(circle_json(c));
  j["perceived"] = f.perceived;
  j["perception_seconds"] = f.perception_seconds;
  return j;
}

Eigen::Vector2d vec2(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
Eigen::Vector3d vec3(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

TrackSnapshot track_from(const json& j) {
  return {j.at("id").get<int>(), j.at("x").get<double>(), j.at("y").get<double>(),
          j.at("r").get<double>(), j.at("age").get<int>(), j.at("misses").get<int>()};
}

FrameRecord frame_from(const json& j) {
  FrameRecord f;
  f.frame = j.at("frame").get<int>();
  f.time = j.at("time").get<double>();
  const auto& pose = j.at("pose");
  f.pose.frame_id = pose.at("frame_id").get<int>();
  f.pose.translation = vec3(pose.at("t"));
  const auto& q = pose.at("q");
  f.pose.rotation = Eigen::Quaterniond(q.at(3).get<double>(), q.at(0).get<double>(),
                                       q.at(1).get<double>(), q.at(2).get<double>());
  f.drone = vec3(j.at("drone"));
  f.yaw = j.at("yaw").get<double>();
  for (const auto& a : j.at("actors")) f.actors.push_back(vec2(a));
  for (const auto& p : j.at("proposals")) {
    f.proposals.push_back({p.at("cx").get<double>(), p.at("cy").get<double>(), p.at("r").get<double>(),
                           p.at("frame").get<int>()});
  }
  for (const auto& t : j.at("tracks")) f.tracks.push_back(track_from(t));
  if (!j.at("target").is_null()) f.target = track_from(j.at("target"));
  f.command.kind = parse_command_kind(j.at("command").at("kind").get<std::string>());
  f.command.waypoint = vec3(j.at("command").at("waypoint"));
  for (const auto& c : j.at("ground_truth")) {
    f.ground_truth.push_back({c.at("x").get<double>(), c.at("y").get<double>(), c.at("r").get<double>()});
  }
  f.perceived = j.at("perceived").get<bool>();
  f.perception_seconds = j.at("perception_seconds").get<double>();
  return f;
}

}  // namespace

void write_mission_log(std::ostream& out, const MissionLog& log) {
  out << json{{"record", "mission"},
              {"seed", log.seed},
              {"criterion", to_string(log.criterion)},
              {"start_altitude", log.start_altitude}}
             .dump()
      << '\n';
  for (const auto& f : log.frames) out << frame_json(f).dump() << '\n';
  out << json{{"record", "result"},
              {"outcome", to_string(log.outcome)},
              {"end_time", log.end_time},
              {"touchdown_x", log.touchdown_x},
              {"touchdown_y", log.touchdown_y},
              {"touchdown_clearance", log.touchdown_clearance}}
             .dump()
      << '\n';
}

void write_mission_log(const std::filesystem::path& path, const MissionLog& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_mission_log(out, log);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

MissionLog read_mission_log(std::istream& in) {
  MissionLog log;
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  bool have_result = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (have_result) throw MalformedFile("line " + std::to_string(n) + ": record after result");
    try {
      const json j = json::parse(line);
      const auto kind = j.at("record").get<std::string>();
      if (kind == "mission") {
        if (have_header) throw MalformedFile("duplicate mission header");
        log.seed = j.at("seed").get<std::uint64_t>();
        log.criterion = parse_criterion(j.at("criterion").get<std::string>());
        log.start_altitude = j.at("start_altitude").get<double>();
        have_header = true;
      } else if (!have_header) {
        throw MalformedFile("missing mission header");
      } else if (kind == "frame") {
        log.frames.push_back(frame_from(j));
      } else if (kind == "result") {
        log.outcome = parse_outcome(j.at("outcome").get<std::string>());
        log.end_time = j.at("end_time").get<double>();
        log.touchdown_x = j.at("touchdown_x").get<double>();
        log.touchdown_y = j.at("touchdown_y").get<double>();
        log.touchdown_clearance = j.at("touchdown_clearance").get<double>();
        have_result = true;
      } else {
        throw MalformedFile("unknown record '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw MalformedFile("line " + std::to_string(n) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw MalformedFile("line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (!have_result) throw MalformedFile("mission log has no result record");
  return log;
}

MissionLog read_mission_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_mission_log(in);
}

}  // namespace slz::world
