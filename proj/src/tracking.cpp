#include "slz/tracking.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slz/error.hpp"

namespace slz::tracking {

double circle_iou(const Circle& a, const Circle& b) {
  if (!(a.r > 0.0) || !(b.r > 0.0)) throw InvalidArgument("circle radii must be positive");
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  const double area_a = std::numbers::pi * a.r * a.r;
  const double area_b = std::numbers::pi * b.r * b.r;
  if (d >= a.r + b.r) return 0.0;
  if (d <= std::abs(a.r - b.r)) {
    const double small = std::min(a.r, b.r);
    const double large = std::max(a.r, b.r);
    return (small * small) / (large * large);
  }
  const double ca = std::clamp((d * d + a.r * a.r - b.r * b.r) / (2.0 * d * a.r), -1.0, 1.0);
  const double cb = std::clamp((d * d + b.r * b.r - a.r * a.r) / (2.0 * d * b.r), -1.0, 1.0);
  const double k = (-d + a.r + b.r) * (d + a.r - b.r) * (d - a.r + b.r) * (d + a.r + b.r);
  const double lens =
      a.r * a.r * std::acos(ca) + b.r * b.r * std::acos(cb) - 0.5 * std::sqrt(std::max(0.0, k));
  const double inter = std::clamp(lens, 0.0, std::min(area_a, area_b));
  return inter / (area_a + area_b - inter);
}

void TrackerConfig::validate() const {
  if (!(sigma_a > 0.0) || !(dt > 0.0) || !(min_radius > 0.0)) {
    throw InvalidArgument("sigma_a, dt and min_radius must be positive");
  }
  if (n_p < 1 || mu1 < 1 || mu2 < 1) throw InvalidArgument("n_p, mu1, mu2 must be >= 1");
  if (!(iou_gate > 0.0 && iou_gate < 1.0)) throw InvalidArgument("iou_gate must lie in (0, 1)");
  if (!r_meas.allFinite() || (r_meas - r_meas.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("r_meas must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r_meas);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw InvalidArgument("r_meas must be positive-definite");
}

Matrix6d TrackerConfig::transition() const {
  Matrix6d f = Matrix6d::Identity();
  f.topRightCorner<3, 3>() = dt * Eigen::Matrix3d::Identity();
  return f;
}

Matrix6d TrackerConfig::process_noise() const {
  const Eigen::Matrix3d i3 = Eigen::Matrix3d::Identity();
  Matrix6d q;
  q.topLeftCorner<3, 3>() = std::pow(dt, 4) / 4.0 * i3;
  q.topRightCorner<3, 3>() = std::pow(dt, 3) / 2.0 * i3;
  q.bottomLeftCorner<3, 3>() = std::pow(dt, 3) / 2.0 * i3;
  q.bottomRightCorner<3, 3>() = dt * dt * i3;
  return sigma_a * q;
}

Matrix6d TrackerConfig::initial_covariance() const {
  Matrix6d p = Matrix6d::Identity();
  p.topLeftCorner<3, 3>() = r_meas;
  return p;
}

TrackState kf_predict(const TrackState& t, const TrackerConfig& cfg) {
  const Matrix6d f = cfg.transition();
  TrackState out = t;
  out.mean = f * t.mean;
  Matrix6d p = f * t.covariance * f.transpose() + cfg.process_noise();
  out.covariance = 0.5 * (p + p.transpose());
  return out;
}

TrackState kf_update(const TrackState& t, const Eigen::Vector3d& z, const TrackerConfig& cfg) {
  if (!z.allFinite()) throw InvalidArgument("measurement is not finite");
  Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
  h.leftCols<3>() = Eigen::Matrix3d::Identity();

  const Eigen::Matrix3d s = h * t.covariance * h.transpose() + cfg.r_meas;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularInnovation("innovation covariance is numerically singular");
  }

  const Eigen::Matrix<double, 6, 3> gain = t.covariance * h.transpose() * s.inverse();
  TrackState out = t;
  out.mean = t.mean + gain * (z - h * t.mean);
  // Joseph form keeps the posterior symmetric positive-definite.
  const Matrix6d a = Matrix6d::Identity() - gain * h;
  const Matrix6d p = a * t.covariance * a.transpose() + gain * cfg.r_meas * gain.transpose();
  out.covariance = 0.5 * (p + p.transpose());
  out.mean(2) = std::max(out.mean(2), cfg.min_radius);
  out.misses = 0;
  return out;
}

std::vector<std::pair<int, int>> associate(std::span<const Circle> a, std::span<const Circle> b,
                                           double gate) {
  if (a.empty() || b.empty()) return {};
  Eigen::MatrixXd iou(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Circle ca{a[i].x, a[i].y, std::max(a[i].r, 1e-9)};
      const Circle cb{b[j].x, b[j].y, std::max(b[j].r, 1e-9)};
      iou(i, j) = circle_iou(ca, cb);
    }
  }
  const Eigen::MatrixXd cost = Eigen::MatrixXd::Ones(iou.rows(), iou.cols()) - iou;
  std::vector<std::pair<int, int>> out;
  for (const auto& [i, j] : hungarian_assign(cost)) {
    if (iou(i, j) >= gate) out.emplace_back(i, j);
  }
  return out;
}

TrackManager::TrackManager(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::vector<TrackEvent> TrackManager::step(std::span<const zones::SlzProposal> proposals) {
  std::vector<TrackEvent> events;

  for (auto& t : tracks_) t = kf_predict(t, cfg_);

  std::vector<Circle> predicted;
  predicted.reserve(tracks_.size());
  for (const auto& t : tracks_) predicted.push_back(t.circle());
  std::vector<Circle> measured;
  measured.reserve(proposals.size());
  for (const auto& p : proposals) measured.push_back({p.cx, p.cy, p.radius});

  std::vector<char> track_matched(tracks_.size(), 0);
  std::vector<char> proposal_used(proposals.size(), 0);
  for (const auto& [ti, pj] : associate(predicted, measured, cfg_.iou_gate)) {
    const auto& m = measured[pj];
    tracks_[ti] = kf_update(tracks_[ti], Eigen::Vector3d(m.x, m.y, m.r), cfg_);
    track_matched[ti] = 1;
    proposal_used[pj] = 1;
    events.push_back({TrackEvent::Kind::Match, tracks_[ti].id, pj});
  }

  std::vector<TrackState> survivors;
  survivors.reserve(tracks_.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (!track_matched[i]) ++tracks_[i].misses;
    if (tracks_[i].misses > cfg_.mu1) {
      events.push_back({TrackEvent::Kind::Death, tracks_[i].id, -1});
    } else {
      survivors.push_back(std::move(tracks_[i]));
    }
  }
  tracks_ = std::move(survivors);

  // Birth pool: an unmatched proposal must re-appear (by IoU against its
  // pool entry) on mu2 consecutive frames.
  std::vector<int> loose;
  std::vector<Circle> loose_circles;
  for (std::size_t j = 0; j < proposals.size(); ++j) {
    if (!proposal_used[j]) {
      loose.push_back(static_cast<int>(j));
      loose_circles.push_back(measured[j]);
    }
  }
  std::vector<Circle> pool_circles;
  for (const auto& c : pool_) pool_circles.push_back(c.circle);

  std::vector<BirthCandidate> next_pool;
  std::vector<int> next_pool_proposal;
  std::vector<char> loose_taken(loose.size(), 0);
  for (const auto& [pi, lj] : associate(pool_circles, loose_circles, cfg_.iou_gate)) {
    next_pool.push_back({loose_circles[lj], pool_[pi].streak + 1});
    next_pool_proposal.push_back(loose[lj]);
    loose_taken[lj] = 1;
  }
  for (std::size_t k = 0; k < loose.size(); ++k) {
    if (!loose_taken[k]) {
      next_pool.push_back({loose_circles[k], 1});
      next_pool_proposal.push_back(loose[k]);
    }
  }

  pool_.clear();
  for (std::size_t k = 0; k < next_pool.size(); ++k) {
    const auto& cand = next_pool[k];
    if (cand.streak >= cfg_.mu2 && static_cast<int>(tracks_.size()) < cfg_.n_p) {
      TrackState t;
      t.id = next_id_++;
      t.mean << cand.circle.x, cand.circle.y, cand.circle.r, 0.0, 0.0, 0.0;
      t.covariance = cfg_.initial_covariance();
      tracks_.push_back(t);
      events.push_back({TrackEvent::Kind::Birth, t.id, next_pool_proposal[k]});
    } else {
      pool_.push_back(cand);
    }
  }

  for (auto& t : tracks_) ++t.age;
  return events;
}

}  // namespace slz::tracking
