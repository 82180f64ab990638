#include "slz/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "slz/error.hpp"
#include "slz/zones.hpp"

namespace slz::eval {

RiskCounts risk_counts(const tracking::Circle& target, std::span<const Eigen::Vector2d> heads) {
  if (!(target.r > 0.0)) throw InvalidArgument("target radius must be positive");
  RiskCounts out;
  for (const auto& h : heads) {
    const double d = std::hypot(h.x() - target.x, h.y() - target.y);
    if (d < target.r) ++out.warning;
    if (d < kDangerRadius) ++out.danger;
  }
  return out;
}

GroundTruthSlz ground_truth_slz(std::span<const Eigen::Vector2d> heads,
                                const geometry::PlaneGrid& grid_template, double r0) {
  grid_template.validate();
  geometry::PlaneGrid g = grid_template;
  const double half = 0.5 * kPersonalSpaceSide;
  for (const auto& h : heads) {
    const int c0 = std::max(0, static_cast<int>(std::floor((h.x() - half - g.origin_x) / g.cell_size)));
    const int c1 = std::min(g.cols - 1, static_cast<int>(std::ceil((h.x() + half - g.origin_x) / g.cell_size)));
    const int r0i = std::max(0, static_cast<int>(std::floor((h.y() - half - g.origin_y) / g.cell_size)));
    const int r1i = std::min(g.rows - 1, static_cast<int>(std::ceil((h.y() + half - g.origin_y) / g.cell_size)));
    for (int r = r0i; r <= r1i; ++r) {
      const double y = g.center_y(r);
      if (y < h.y() - half || y >= h.y() + half) continue;
      for (int c = c0; c <= c1; ++c) {
        const double x = g.center_x(c);
        if (x >= h.x() - half && x < h.x() + half) g.at(r, c) = density::kOccupied;
      }
    }
  }
  GroundTruthSlz gt;
  for (const auto& p : zones::extract_slz(g, zones::SlzConfig{kGroundTruthCount, r0}, 0)) {
    gt.circles.push_back({p.cx, p.cy, p.radius});
  }
  return gt;
}

double best_iou(const tracking::Circle& target, const GroundTruthSlz& gt) {
  if (gt.circles.empty()) throw EmptyGroundTruth();
  double best = 0.0;
  for (const auto& c : gt.circles) best = std::max(best, tracking::circle_iou(target, c));
  return best;
}

FrameMetrics frame_metrics(const world::FrameRecord& f, double start_altitude) {
  FrameMetrics m;
  m.frame = f.frame;
  m.perceived = f.perceived;
  m.exec_time = f.perception_seconds;
  if (f.target && f.target->r > 0.0) {
    const auto c = f.target->circle();
    m.has_target = true;
    m.target_radius = c.r;
    const auto risk = risk_counts(c, f.actors);
    m.warning = risk.warning;
    m.danger = risk.danger;
    m.slz_area = std::numbers::pi * c.r * c.r;
    if (!f.ground_truth.empty()) m.best_iou = best_iou(c, GroundTruthSlz{f.ground_truth});
  }
  if (f.drone.z() < start_altitude && !f.actors.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : f.actors) {
      best = std::min(best, std::hypot(a.x() - f.drone.x(), a.y() - f.drone.y()));
    }
    m.nearest_person = best;
  }
  return m;
}

namespace {

class StatAccumulator {
 public:
  void add(double v) {
    values_.push_back(v);
  }
  Stat finish() const {
    Stat s;
    s.count = values_.size();
    if (values_.empty()) return s;
    double sum = 0.0;
    for (double v : values_) sum += v;
    s.avg = sum / values_.size();
    double var = 0.0;
    for (double v : values_) var += (v - s.avg) * (v - s.avg);
    s.std = std::sqrt(var / values_.size());
    s.max = *std::max_element(values_.begin(), values_.end());
    s.min = *std::min_element(values_.begin(), values_.end());
    return s;
  }

 private:
  std::vector<double> values_;
};

struct Pool {
  StatAccumulator warning, danger, area, iou, nearest, exec;
  std::size_t frames = 0;

  void add(const FrameMetrics& m) {
    ++frames;
    if (m.has_target) {
      warning.add(m.warning);
      danger.add(m.danger);
      area.add(m.slz_area);
      if (m.best_iou) iou.add(*m.best_iou);
    }
    if (m.nearest_person) nearest.add(*m.nearest_person);
    if (m.perceived) exec.add(m.exec_time);
  }

  MetricsReport finish() const {
    MetricsReport r;
    r.warning = warning.finish();
    r.danger = danger.finish();
    r.slz_area = area.finish();
    r.best_iou = iou.finish();
    r.nearest_person = nearest.finish();
    r.exec_time = exec.finish();
    r.frames = frames;
    return r;
  }
};

}  // namespace

MetricsReport aggregate_frames(std::span<const FrameMetrics> frames) {
  Pool pool;
  for (const auto& m : frames) pool.add(m);
  return pool.finish();
}

MetricsReport aggregate(std::span<const world::MissionLog> logs) {
  if (logs.empty()) throw InvalidArgument("aggregate needs at least one mission log");
  Pool pool;
  std::size_t safe = 0;
  for (const auto& log : logs) {
    for (const auto& f : log.frames) pool.add(frame_metrics(f, log.start_altitude));
    if (log.outcome == world::Outcome::LandedSafe) ++safe;
  }
  MetricsReport r = pool.finish();
  r.missions = logs.size();
  r.success_rate = static_cast<double>(safe) / static_cast<double>(logs.size());
  return r;
}

MissionSummary summarize(const world::MissionLog& log) {
  MissionSummary s;
  s.seed = log.seed;
  s.outcome = log.outcome;
  s.frames = log.frames.size();
  s.metrics = aggregate(std::span<const world::MissionLog>(&log, 1));
  return s;
}

void export_ground_truth(const world::MissionLog& log, std::vector<HeadAnnotation>& heads,
                         std::vector<world::FramePose>& poses) {
  heads.clear();
  poses.clear();
  for (const auto& f : log.frames) {
    if (!f.perceived) continue;
    poses.push_back(f.pose);
    for (std::size_t i = 0; i < f.actors.size(); ++i) {
      heads.push_back({f.frame, static_cast<int>(i), f.actors[i].x(), f.actors[i].y()});
    }
  }
}

ReplayResult replay_annotations(std::span<const HeadAnnotation> heads,
                                std::span<const world::FramePose> poses,
                                const world::PipelineConfig& pipeline, world::Criterion criterion,
                                double dt, double retarget_margin) {
  for (std::size_t i = 1; i < poses.size(); ++i) {
    if (poses[i].frame_id <= poses[i - 1].frame_id) throw MalformedFile("pose frame ids are not increasing");
  }
  world::PipelineConfig pc = pipeline;
  pc.tracker.dt = dt;
  world::PerceptionPipeline chain(pc);
  world::TargetSelector selector(criterion, retarget_margin);

  ReplayResult out;
  std::size_t h = 0;
  for (const auto& pose : poses) {
    std::vector<Eigen::Vector2d> frame_heads;
    while (h < heads.size() && heads[h].frame_id < pose.frame_id) {
      throw MalformedFile("annotation for frame " + std::to_string(heads[h].frame_id) +
                          " has no camera pose");
    }
    while (h < heads.size() && heads[h].frame_id == pose.frame_id) {
      frame_heads.emplace_back(heads[h].x, heads[h].y);
      ++h;
    }
    if (!frame_heads.empty()) ++out.annotated_frames;

    const auto pf = chain.process(pose, frame_heads);
    world::FrameRecord rec;
    rec.frame = pose.frame_id;
    rec.time = pose.frame_id * dt;
    rec.pose = pose;
    rec.drone = geometry::camera_center(pf.world_to_camera);
    rec.actors = std::move(frame_heads);
    rec.perceived = true;
    rec.proposals = pf.proposals;
    rec.perception_seconds = pf.perception_seconds;
    for (const auto& t : chain.tracker().tracks()) {
      rec.tracks.push_back({t.id, t.mean(0), t.mean(1), t.mean(2), t.age, t.misses});
    }
    if (const auto chosen = selector.choose(chain.tracker().tracks())) {
      rec.target = world::TrackSnapshot{chosen->id, chosen->mean(0), chosen->mean(1),
                                        chosen->mean(2), chosen->age, chosen->misses};
    }
    rec.ground_truth = ground_truth_slz(rec.actors, pf.mapped, pc.slz.r0).circles;
    out.metrics.push_back(frame_metrics(rec, std::numeric_limits<double>::infinity()));
    out.frames.push_back(std::move(rec));
  }
  if (h < heads.size()) {
    throw MalformedFile("annotation for frame " + std::to_string(heads[h].frame_id) +
                        " has no camera pose");
  }
  out.report = aggregate_frames(out.metrics);
  return out;
}

}  // namespace slz::eval
