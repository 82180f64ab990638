#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slz/zones.hpp"

namespace slz::tracking {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  bool operator==(const Circle&) const = default;
};

/// Exact intersection-over-union of two disks (lens area for partial overlap).
double circle_iou(const Circle& a, const Circle& b);

/// Minimum-cost assignment of min(n, m) (row, col) pairs, sorted by row.
/// Rectangular inputs are padded to square with a constant sentinel; padded
/// matches are dropped.
std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost);

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Constant-velocity filter over (x, y, r, vx, vy, vr).
struct TrackState {
  int id = 0;
  Vector6d mean = Vector6d::Zero();
  Matrix6d covariance = Matrix6d::Identity();
  int age = 0;
  int misses = 0;

  Circle circle() const { return {mean(0), mean(1), mean(2)}; }
};

struct TrackerConfig {
  double sigma_a = 0.5;
  Eigen::Matrix3d r_meas = Eigen::Vector3d(0.25, 0.25, 0.25).asDiagonal();
  double dt = 0.1;
  int n_p = 10;
  double iou_gate = 0.2;
  int mu1 = 5;
  int mu2 = 3;
  double min_radius = 0.1;

  void validate() const;
  Matrix6d transition() const;
  /// sigma_a multiplies the whole block matrix (not sigma_a squared).
  Matrix6d process_noise() const;
  Matrix6d initial_covariance() const;
};

TrackState kf_predict(const TrackState& t, const TrackerConfig& cfg);

/// Throws SingularInnovation when the innovation covariance has condition
/// number above 1e12.
TrackState kf_update(const TrackState& t, const Eigen::Vector3d& z, const TrackerConfig& cfg);

struct TrackEvent {
  enum class Kind { Birth, Death, Match };
  Kind kind;
  int track_id;
  int proposal_index;  // -1 for deaths
};

/// Unmatched proposal waiting for mu2 consecutive sightings.
struct BirthCandidate {
  Circle circle;
  int streak = 0;
};

/// Owns the live filters of one pipeline. Not thread-safe.
class TrackManager {
 public:
  explicit TrackManager(TrackerConfig cfg);

  /// Predict, associate by 1 - IoU with the Hungarian solver, gate at
  /// iou_gate, update or age out, then feed the birth pool.
  std::vector<TrackEvent> step(std::span<const zones::SlzProposal> proposals);

  const std::vector<TrackState>& tracks() const { return tracks_; }
  const std::vector<BirthCandidate>& candidates() const { return pool_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  TrackerConfig cfg_;
  std::vector<TrackState> tracks_;
  std::vector<BirthCandidate> pool_;
  int next_id_ = 1;
};

/// Pairs (i, j) with IoU(a_i, b_j) >= gate from the optimal 1 - IoU assignment.
std::vector<std::pair<int, int>> associate(std::span<const Circle> a, std::span<const Circle> b,
                                           double gate);

}  // namespace slz::tracking
