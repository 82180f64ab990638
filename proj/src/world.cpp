#include "slz/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slz/error.hpp"
#include "slz/eval.hpp"

namespace slz::world {

namespace {

// Independent RNG streams of one mission.
enum Stream : int { kSpawn = 0, kWalk = 1, kRandomTouchdown = 2, kNoise = 3 };

Rng stream(std::uint64_t seed, Stream s) { return Rng(frame_seed(seed, 1000 + s)); }

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Biggest: return "biggest";
    case Criterion::Oldest: return "oldest";
    case Criterion::Random: return "random";
  }
  return "biggest";
}

Criterion parse_criterion(const std::string& s) {
  if (s == "biggest") return Criterion::Biggest;
  if (s == "oldest") return Criterion::Oldest;
  if (s == "random") return Criterion::Random;
  throw InvalidArgument("unknown criterion '" + s + "'");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::LandedSafe: return "LandedSafe";
    case Outcome::Collision: return "Collision";
    case Outcome::Timeout: return "Timeout";
    case Outcome::Aborted: return "Aborted";
  }
  return "Timeout";
}

Outcome parse_outcome(const std::string& s) {
  if (s == "LandedSafe") return Outcome::LandedSafe;
  if (s == "Collision") return Outcome::Collision;
  if (s == "Timeout") return Outcome::Timeout;
  if (s == "Aborted") return Outcome::Aborted;
  throw InvalidArgument("unknown outcome '" + s + "'");
}

std::string to_string(Command::Kind k) {
  switch (k) {
    case Command::Kind::Goto: return "goto";
    case Command::Kind::Land: return "land";
    case Command::Kind::Ascend: return "ascend";
    case Command::Kind::Hold: return "hold";
  }
  return "hold";
}

Command::Kind parse_command_kind(const std::string& s) {
  if (s == "goto") return Command::Kind::Goto;
  if (s == "land") return Command::Kind::Land;
  if (s == "ascend") return Command::Kind::Ascend;
  if (s == "hold") return Command::Kind::Hold;
  throw InvalidArgument("unknown command '" + s + "'");
}

void ScenarioConfig::validate() const {
  if (!(roi_side > 0.0)) throw InvalidArgument("roi_side must be positive");
  if (actors_min < 0 || actors_max < actors_min) throw InvalidArgument("bad actor count range");
  if (!(frac_moving >= 0.0 && frac_moving <= 1.0)) throw InvalidArgument("frac_moving must lie in [0, 1]");
  if (!(dt_sim > 0.0) || !(max_mission_time > 0.0)) throw InvalidArgument("times must be positive");
  if (!(speed_xy > 0.0) || !(speed_z > 0.0)) throw InvalidArgument("speeds must be positive");
  if (!(body_radius > 0.0) || !(drone_radius >= 0.0)) throw InvalidArgument("radii must be positive");
  if (!(land_altitude > 0.0) || !(start_altitude > land_altitude) || !(ceiling >= start_altitude)) {
    throw InvalidArgument("altitudes must satisfy 0 < land < start <= ceiling");
  }
}

FramePose DroneState::pose(int frame_id) const {
  FramePose p;
  p.frame_id = frame_id;
  p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(-yaw, Eigen::Vector3d::UnitZ()));
  p.translation = -(p.rotation.toRotationMatrix() * position);
  return p;
}

std::vector<Eigen::Vector2d> WorldState::heads() const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(actors.size());
  for (const auto& a : actors) out.emplace_back(a.x, a.y);
  return out;
}

Actor random_walk_step(const Actor& a, const Region& roi, Rng& rng) {
  std::uniform_int_distribution<int> alpha(-1, 1);
  Actor out = a;
  const int ax = alpha(rng);
  const int ay = alpha(rng);
  out.x = std::clamp(a.x + 0.2 * ax, roi.min_x, roi.max_x);
  out.y = std::clamp(a.y + 0.2 * ay, roi.min_y, roi.max_y);
  return out;
}

WorldState spawn_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng = stream(cfg.seed, kSpawn);
  WorldState w;
  w.roi = cfg.roi();

  const int n = std::uniform_int_distribution<int>(cfg.actors_min, cfg.actors_max)(rng);
  std::uniform_real_distribution<double> ux(w.roi.min_x, w.roi.max_x);
  std::uniform_real_distribution<double> uy(w.roi.min_y, w.roi.max_y);
  const double min_sq = 4.0 * cfg.body_radius * cfg.body_radius;
  long rejections = 0;
  w.actors.reserve(n);
  while (static_cast<int>(w.actors.size()) < n) {
    const double x = ux(rng);
    const double y = uy(rng);
    const bool clear = std::none_of(w.actors.begin(), w.actors.end(), [&](const Actor& a) {
      return (a.x - x) * (a.x - x) + (a.y - y) * (a.y - y) < min_sq;
    });
    if (clear) {
      w.actors.push_back({x, y, false, cfg.body_radius});
    } else if (++rejections > 100000) {
      throw PlacementFailure("could not place " + std::to_string(n) + " non-overlapping actors");
    }
  }
  const int moving = static_cast<int>(std::floor(cfg.frac_moving * n));
  for (int i = 0; i < moving; ++i) w.actors[i].moving = true;

  w.drone.position = Eigen::Vector3d(ux(rng), uy(rng), cfg.start_altitude);
  w.drone.yaw = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
  w.drone.speed_xy = cfg.speed_xy;
  w.drone.speed_z = cfg.speed_z;
  return w;
}

Observation observe(const WorldState& world, const DroneState& drone, const PipelineConfig& cfg,
                    int frame_id) {
  Observation o;
  o.pose = drone.pose(frame_id);
  o.world_to_camera = geometry::compose(drone.body_to_camera, o.pose.world_to_body());
  const auto heads = world.heads();
  o.density = render_heads(heads, o.world_to_camera, cfg, frame_seed(cfg.noise.seed, frame_id));
  return o;
}

namespace {

double criterion_value(const tracking::TrackState& t, Criterion c) {
  return c == Criterion::Oldest ? static_cast<double>(t.age) : t.mean(2);
}

}  // namespace

std::optional<tracking::TrackState> select_target(std::span<const tracking::TrackState> tracks,
                                                  Criterion criterion) {
  if (criterion == Criterion::Random) return std::nullopt;
  const tracking::TrackState* best = nullptr;
  for (const auto& t : tracks) {
    if (!best) {
      best = &t;
      continue;
    }
    const double v = criterion_value(t, criterion);
    const double b = criterion_value(*best, criterion);
    if (v > b || (v == b && t.id < best->id)) best = &t;
  }
  if (!best) return std::nullopt;
  return *best;
}

std::optional<tracking::TrackState> TargetSelector::choose(
    std::span<const tracking::TrackState> tracks) {
  std::vector<tracking::TrackState> allowed;
  for (const auto& t : tracks) {
    if (std::find(vetoed_.begin(), vetoed_.end(), t.id) == vetoed_.end()) allowed.push_back(t);
  }
  const auto best = select_target(allowed, criterion_);
  if (!best) {
    current_.reset();
    return std::nullopt;
  }
  if (current_) {
    auto it = std::find_if(allowed.begin(), allowed.end(),
                           [&](const auto& t) { return t.id == *current_; });
    if (it != allowed.end()) {
      const double incumbent = criterion_value(*it, criterion_);
      if (best->id == it->id || !(criterion_value(*best, criterion_) > incumbent * (1.0 + margin_))) {
        return *it;
      }
    }
  }
  current_ = best->id;
  return best;
}

Command landing_policy_step(const DroneState& drone, const std::optional<tracking::Circle>& target,
                            const ScenarioConfig& cfg) {
  Command cmd;
  if (target) {
    const Region roi = cfg.roi();
    const double x = std::clamp(target->x, roi.min_x - cfg.waypoint_margin, roi.max_x + cfg.waypoint_margin);
    const double y = std::clamp(target->y, roi.min_y - cfg.waypoint_margin, roi.max_y + cfg.waypoint_margin);
    const double horizontal = std::hypot(drone.position.x() - x, drone.position.y() - y);
    if (drone.position.z() <= cfg.land_altitude + 1e-9 && horizontal <= cfg.land_xy_tolerance) {
      cmd.kind = Command::Kind::Land;
      cmd.waypoint = Eigen::Vector3d(drone.position.x(), drone.position.y(), 0.0);
    } else {
      cmd.kind = Command::Kind::Goto;
      cmd.waypoint = Eigen::Vector3d(x, y, cfg.land_altitude);
    }
    return cmd;
  }
  if (drone.position.z() < cfg.ceiling - 1e-9) {
    cmd.kind = Command::Kind::Ascend;
    cmd.waypoint = Eigen::Vector3d(drone.position.x(), drone.position.y(), cfg.ceiling);
  } else {
    cmd.kind = Command::Kind::Hold;
    cmd.waypoint = drone.position;
  }
  return cmd;
}

void apply_command(DroneState& drone, const Command& cmd, const ScenarioConfig& cfg) {
  const double dt = cfg.dt_sim;
  switch (cmd.kind) {
    case Command::Kind::Hold:
      return;
    case Command::Kind::Ascend:
      drone.position.z() = std::min(cfg.ceiling, drone.position.z() + drone.speed_z * dt);
      return;
    case Command::Kind::Land:
      drone.position.z() = std::max(0.0, drone.position.z() - drone.speed_z * dt);
      return;
    case Command::Kind::Goto: {
      const Eigen::Vector3d delta = cmd.waypoint - drone.position;
      const double t_xy = delta.head<2>().norm() / drone.speed_xy;
      const double t_z = std::abs(delta.z()) / drone.speed_z;
      const double t = std::max(t_xy, t_z);
      if (t <= dt * (1.0 + 1e-9)) {
        drone.position = cmd.waypoint;
      } else {
        drone.position += delta * (dt / t);
      }
      return;
    }
  }
}

bool same_trajectory(const MissionLog& a, const MissionLog& b) {
  if (a.seed != b.seed || a.criterion != b.criterion || a.outcome != b.outcome ||
      a.end_time != b.end_time || a.touchdown_x != b.touchdown_x ||
      a.touchdown_y != b.touchdown_y || a.touchdown_clearance != b.touchdown_clearance ||
      a.frames.size() != b.frames.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const auto& fa = a.frames[i];
    const auto& fb = b.frames[i];
    if (fa.frame != fb.frame || fa.time != fb.time || fa.drone != fb.drone || fa.yaw != fb.yaw ||
        fa.actors != fb.actors || fa.proposals != fb.proposals || fa.tracks != fb.tracks ||
        fa.target != fb.target || fa.perceived != fb.perceived || !(fa.command == fb.command) ||
        fa.ground_truth != fb.ground_truth) {
      return false;
    }
  }
  return true;
}

std::uint64_t mission_noise_seed(const ScenarioConfig& sc, const PipelineConfig& pc) {
  return frame_seed(pc.noise.seed ^ sc.seed, 1000 + kNoise);
}

namespace {

double nearest_actor(const std::vector<Actor>& actors, double x, double y, const Actor** who) {
  double best = -1.0;
  for (const auto& a : actors) {
    const double d = std::hypot(a.x - x, a.y - y);
    if (best < 0.0 || d < best) {
      best = d;
      if (who) *who = &a;
    }
  }
  return best;
}

// Occupied, imaged cells whose centres fall inside the disk.
bool disk_observed_clear(const PerceptionFrame& pf, const tracking::Circle& c) {
  const auto& g = pf.grid;
  const int c0 = std::max(0, static_cast<int>(std::floor((c.x - c.r - g.origin_x) / g.cell_size)));
  const int c1 = std::min(g.cols - 1, static_cast<int>(std::ceil((c.x + c.r - g.origin_x) / g.cell_size)));
  const int r0 = std::max(0, static_cast<int>(std::floor((c.y - c.r - g.origin_y) / g.cell_size)));
  const int r1 = std::min(g.rows - 1, static_cast<int>(std::ceil((c.y + c.r - g.origin_y) / g.cell_size)));
  for (int r = r0; r <= r1; ++r) {
    for (int col = c0; col <= c1; ++col) {
      if (pf.mapped.at(r, col) == density::kOccupied) continue;
      if (std::hypot(g.center_x(col) - c.x, g.center_y(r) - c.y) < c.r &&
          g.at(r, col) == density::kOccupied) {
        return false;
      }
    }
  }
  return true;
}

TrackSnapshot snapshot(const tracking::TrackState& t) {
  return {t.id, t.mean(0), t.mean(1), t.mean(2), t.age, t.misses};
}

}  // namespace

MissionLog simulate_mission(const ScenarioConfig& cfg, const PipelineConfig& pipeline_cfg,
                            const FrameObserver& observer) {
  cfg.validate();
  WorldState world = spawn_scenario(cfg);
  Rng walk = stream(cfg.seed, kWalk);

  PipelineConfig pc = pipeline_cfg;
  pc.region = world.roi;
  pc.noise.seed = mission_noise_seed(cfg, pipeline_cfg);
  pc.tracker.dt = cfg.dt_sim;
  PerceptionPipeline pipeline(pc);
  TargetSelector selector(cfg.criterion, cfg.retarget_margin);

  std::optional<tracking::Circle> random_target;
  if (cfg.criterion == Criterion::Random) {
    Rng pick = stream(cfg.seed, kRandomTouchdown);
    std::uniform_real_distribution<double> ux(world.roi.min_x, world.roi.max_x);
    std::uniform_real_distribution<double> uy(world.roi.min_y, world.roi.max_y);
    const double x = ux(pick);
    random_target = tracking::Circle{x, uy(pick), cfg.land_xy_tolerance};
  }

  MissionLog log;
  log.seed = cfg.seed;
  log.criterion = cfg.criterion;
  log.start_altitude = cfg.start_altitude;

  const long max_ticks = static_cast<long>(std::llround(cfg.max_mission_time / cfg.dt_sim));
  double hold_time = 0.0;
  bool landing = false;
  long tick = 0;
  for (; tick < max_ticks && !landing; ++tick) {
    for (auto& a : world.actors) {
      if (a.moving) a = random_walk_step(a, world.roi, walk);
    }

    FrameRecord rec;
    rec.frame = static_cast<int>(tick);
    rec.time = tick * cfg.dt_sim;
    rec.pose = world.drone.pose(rec.frame);
    rec.drone = world.drone.position;
    rec.yaw = world.drone.yaw;
    rec.actors = world.heads();

    std::optional<PerceptionFrame> pf;
    std::optional<tracking::Circle> target;
    if (cfg.criterion == Criterion::Random) {
      target = random_target;
    } else {
      pf = pipeline.process(rec.pose, rec.actors);
      rec.perceived = true;
      rec.proposals = pf->proposals;
      rec.perception_seconds = pf->perception_seconds;
      for (const auto& t : pipeline.tracker().tracks()) rec.tracks.push_back(snapshot(t));
      rec.ground_truth = eval::ground_truth_slz(rec.actors, pf->mapped, pc.slz.r0).circles;

      auto chosen = selector.choose(pipeline.tracker().tracks());
      rec.command = landing_policy_step(world.drone, chosen ? std::optional(chosen->circle()) : std::nullopt, cfg);
      // Touch down only if the imaged part of the filtered disk is still clear.
      while (chosen && rec.command.kind == Command::Kind::Land && !disk_observed_clear(*pf, chosen->circle())) {
        selector.veto(chosen->id);
        chosen = selector.choose(pipeline.tracker().tracks());
        rec.command = landing_policy_step(world.drone, chosen ? std::optional(chosen->circle()) : std::nullopt, cfg);
      }
      if (chosen) {
        rec.target = snapshot(*chosen);
        target = chosen->circle();
      }
    }
    if (cfg.criterion == Criterion::Random) {
      rec.command = landing_policy_step(world.drone, target, cfg);
    }

    log.frames.push_back(std::move(rec));
    const FrameRecord& stored = log.frames.back();
    if (observer) observer(FrameView{stored, pf ? &*pf : nullptr});

    if (stored.command.kind == Command::Kind::Land) {
      landing = true;
      break;
    }
    hold_time = stored.command.kind == Command::Kind::Hold ? hold_time + cfg.dt_sim : 0.0;
    if (hold_time >= cfg.abort_after) {
      log.outcome = Outcome::Aborted;
      log.end_time = (tick + 1) * cfg.dt_sim;
      return log;
    }
    apply_command(world.drone, stored.command, cfg);
  }

  if (!landing) {
    log.outcome = Outcome::Timeout;
    log.end_time = tick * cfg.dt_sim;
    return log;
  }

  // Committed vertical descent; actors keep walking, no further perception.
  const Command land{Command::Kind::Land, Eigen::Vector3d(world.drone.position.x(), world.drone.position.y(), 0.0)};
  while (world.drone.position.z() > 0.0) {
    ++tick;
    for (auto& a : world.actors) {
      if (a.moving) a = random_walk_step(a, world.roi, walk);
    }
    apply_command(world.drone, land, cfg);
  }
  log.end_time = (tick + 1) * cfg.dt_sim;
  log.touchdown_x = world.drone.position.x();
  log.touchdown_y = world.drone.position.y();
  const Actor* closest = nullptr;
  log.touchdown_clearance = nearest_actor(world.actors, log.touchdown_x, log.touchdown_y, &closest);
  const bool hit = closest && log.touchdown_clearance < closest->body_radius + cfg.drone_radius;
  log.outcome = hit ? Outcome::Collision : Outcome::LandedSafe;
  return log;
}

}  // namespace slz::world
