#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slz/geometry.hpp"
#include "slz/tracking.hpp"
#include "slz/world.hpp"

namespace slz::eval {

/// Radius of the fixed safety disk around a landing centre.
inline constexpr double kDangerRadius = 1.0;
/// Side of the axis-aligned personal-space square (0.16 m^2).
inline constexpr double kPersonalSpaceSide = 0.4;
inline constexpr int kGroundTruthCount = 10;

struct RiskCounts {
  int warning = 0;  // heads strictly inside the target disk
  int danger = 0;   // heads strictly within kDangerRadius of the centre
};

RiskCounts risk_counts(const tracking::Circle& target, std::span<const Eigen::Vector2d> heads);

struct GroundTruthSlz {
  std::vector<tracking::Circle> circles;  // non-increasing radii
};

/// Occupies a 0.4 m square (half-open on the high side) around each head on a
/// copy of the template and extracts up to ten SLZ with minimum radius r0.
GroundTruthSlz ground_truth_slz(std::span<const Eigen::Vector2d> heads,
                                const geometry::PlaneGrid& grid_template, double r0);

/// Best IoU of the target against any ground-truth circle. Throws
/// EmptyGroundTruth when gt is empty.
double best_iou(const tracking::Circle& target, const GroundTruthSlz& gt);

struct FrameMetrics {
  int frame = 0;
  bool has_target = false;
  int warning = 0;
  int danger = 0;
  double slz_area = 0.0;
  std::optional<double> best_iou;
  std::optional<double> nearest_person;  // descent frames with at least one actor
  bool perceived = false;
  double exec_time = 0.0;
  double target_radius = 0.0;
};

FrameMetrics frame_metrics(const world::FrameRecord& f, double start_altitude);

/// Mean/std of samples; zero when there are none.
struct Stat {
  double avg = 0.0;
  double std = 0.0;
  double max = 0.0;
  double min = 0.0;
  std::size_t count = 0;
};

struct MetricsReport {
  Stat warning;
  Stat danger;
  Stat slz_area;
  Stat best_iou;
  Stat nearest_person;
  Stat exec_time;
  double success_rate = 0.0;
  std::size_t missions = 0;
  std::size_t frames = 0;
};

struct MissionSummary {
  std::uint64_t seed = 0;
  world::Outcome outcome = world::Outcome::Timeout;
  std::size_t frames = 0;
  MetricsReport metrics;
};

MissionSummary summarize(const world::MissionLog& log);

/// Pools per-frame samples across missions; success_rate = LandedSafe / total.
MetricsReport aggregate(std::span<const world::MissionLog> logs);

/// Pools per-frame metric samples directly (used for replays).
MetricsReport aggregate_frames(std::span<const FrameMetrics> frames);

// ---- annotation and pose streams ----------------------------------------

struct HeadAnnotation {
  int frame_id = 0;
  int head_id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// "HEADS v1" then "frame_id,head_id,x_m,y_m" lines; frame ids non-decreasing.
std::vector<HeadAnnotation> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, std::span<const HeadAnnotation> heads);

/// "POSE v1" then "frame_id,tx,ty,tz,qx,qy,qz,qw" lines (world-to-body, unit
/// quaternion); frame ids strictly increasing.
std::vector<world::FramePose> read_poses(const std::filesystem::path& path);
void write_poses(const std::filesystem::path& path, std::span<const world::FramePose> poses);

/// Heads and poses of every perceived frame of a mission.
void export_ground_truth(const world::MissionLog& log, std::vector<HeadAnnotation>& heads,
                         std::vector<world::FramePose>& poses);

struct ReplayResult {
  std::vector<world::FrameRecord> frames;
  std::vector<FrameMetrics> metrics;
  MetricsReport report;
  std::size_t annotated_frames = 0;  // frames with at least one head
};

/// Runs the perception and tracking chain on oracle densities rendered from
/// the annotated heads, one frame per pose, with no drone motion.
ReplayResult replay_annotations(std::span<const HeadAnnotation> heads,
                                std::span<const world::FramePose> poses,
                                const world::PipelineConfig& pipeline, world::Criterion criterion,
                                double dt, double retarget_margin = 0.1);

}  // namespace slz::eval
