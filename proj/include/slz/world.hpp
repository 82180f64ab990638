#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "slz/pipeline.hpp"

namespace slz::world {

using Rng = std::mt19937_64;

struct Actor {
  double x = 0.0;
  double y = 0.0;
  bool moving = false;
  double body_radius = 0.3;
};

enum class Criterion { Biggest, Oldest, Random };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& s);

enum class Outcome { LandedSafe, Collision, Timeout, Aborted };

std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& s);

struct ScenarioConfig {
  double roi_side = 30.0;
  int actors_min = 80;
  int actors_max = 120;
  double frac_moving = 0.0;
  std::uint64_t seed = 1;
  double dt_sim = 0.1;
  Criterion criterion = Criterion::Biggest;
  double max_mission_time = 120.0;

  double start_altitude = 10.0;
  double ceiling = 20.0;
  double speed_xy = 2.0;
  double speed_z = 1.0;
  double body_radius = 0.3;
  double drone_radius = 0.25;
  double land_altitude = 2.0;
  double land_xy_tolerance = 0.5;
  double waypoint_margin = 1.0;
  // Seconds spent holding at the ceiling with no target before giving up.
  double abort_after = 20.0;
  // A challenger replaces the current target only if it is better by this fraction.
  double retarget_margin = 0.1;

  void validate() const;
  Region roi() const { return {0.0, 0.0, roi_side, roi_side}; }
};

struct DroneState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  double speed_xy = 2.0;
  double speed_z = 1.0;
  geometry::RigidTransform body_to_camera = nadir_mount();

  FramePose pose(int frame_id) const;
};

struct WorldState {
  Region roi;
  std::vector<Actor> actors;
  DroneState drone;

  std::vector<Eigen::Vector2d> heads() const;
};

/// One lattice step of 0.2 m per axis, alpha uniform on {-1, 0, 1}, clamped to the ROI.
Actor random_walk_step(const Actor& a, const Region& roi, Rng& rng);

/// Uniform non-overlapping placement (pairwise distance >= 2 body radii).
/// Throws PlacementFailure after 1e5 rejected draws.
WorldState spawn_scenario(const ScenarioConfig& cfg);

struct Observation {
  density::DensityMap density;
  geometry::RigidTransform world_to_camera;
  FramePose pose;
};

Observation observe(const WorldState& world, const DroneState& drone, const PipelineConfig& cfg,
                    int frame_id);

/// Biggest filtered radius or oldest age; ties go to the lower id.
std::optional<tracking::TrackState> select_target(std::span<const tracking::TrackState> tracks,
                                                  Criterion criterion);

struct Command {
  enum class Kind { Goto, Land, Ascend, Hold };
  Kind kind = Kind::Hold;
  Eigen::Vector3d waypoint = Eigen::Vector3d::Zero();

  bool operator==(const Command&) const = default;
};

std::string to_string(Command::Kind k);
Command::Kind parse_command_kind(const std::string& s);

Command landing_policy_step(const DroneState& drone, const std::optional<tracking::Circle>& target,
                            const ScenarioConfig& cfg);

/// Moves the drone one tick toward the command at the speed limits. Goto
/// follows a straight line so horizontal and vertical arrival coincide.
void apply_command(DroneState& drone, const Command& cmd, const ScenarioConfig& cfg);

struct TrackSnapshot {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  int age = 0;
  int misses = 0;

  bool operator==(const TrackSnapshot&) const = default;
  tracking::Circle circle() const { return {x, y, r}; }
};

struct FrameRecord {
  int frame = 0;
  double time = 0.0;
  FramePose pose;
  Eigen::Vector3d drone = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  std::vector<Eigen::Vector2d> actors;
  std::vector<zones::SlzProposal> proposals;
  std::vector<TrackSnapshot> tracks;
  std::optional<TrackSnapshot> target;
  Command command;
  std::vector<tracking::Circle> ground_truth;
  bool perceived = false;
  double perception_seconds = 0.0;
};

struct MissionLog {
  std::uint64_t seed = 0;
  Criterion criterion = Criterion::Biggest;
  double start_altitude = 10.0;
  std::vector<FrameRecord> frames;
  Outcome outcome = Outcome::Timeout;
  double end_time = 0.0;
  double touchdown_x = 0.0;
  double touchdown_y = 0.0;
  // Horizontal distance from the touchdown point to the closest actor, or -1 with no actors.
  double touchdown_clearance = -1.0;
};

/// Sim-state equality; perception_seconds is wall-clock and ignored.
bool same_trajectory(const MissionLog& a, const MissionLog& b);

/// Seed of the density renderer used by simulate_mission.
std::uint64_t mission_noise_seed(const ScenarioConfig& sc, const PipelineConfig& pc);

struct FrameView {
  const FrameRecord& record;
  const PerceptionFrame* perception;  // null for frames without perception
};

using FrameObserver = std::function<void(const FrameView&)>;

MissionLog simulate_mission(const ScenarioConfig& cfg, const PipelineConfig& pipeline,
                            const FrameObserver& observer = {});

/// Keeps the current target unless it died or a challenger beats it by more
/// than the configured margin on the criterion value.
class TargetSelector {
 public:
  TargetSelector(Criterion criterion, double margin) : criterion_(criterion), margin_(margin) {}

  std::optional<tracking::TrackState> choose(std::span<const tracking::TrackState> tracks);
  void veto(int track_id) { vetoed_.push_back(track_id); }
  std::optional<int> current() const { return current_; }

 private:
  Criterion criterion_;
  double margin_;
  std::optional<int> current_;
  std::vector<int> vetoed_;
};

}  // namespace slz::world
