#include <doctest.h>

#include <random>

#include "slz/error.hpp"
#include "slz/world.hpp"

using namespace slz;
using namespace slz::world;

namespace {

tracking::TrackState track(int id, double r, int age) {
  tracking::TrackState t;
  t.id = id;
  t.mean << 0, 0, r, 0, 0, 0;
  t.age = age;
  return t;
}

}  // namespace

TEST_CASE("random walk moves on a 0.2 m lattice inside the ROI") {
  const Region roi{0, 0, 1, 1};
  Rng rng(1);
  Actor a{0.5, 0.5, true, 0.3};
  int moved = 0;
  for (int i = 0; i < 2000; ++i) {
    const Actor b = random_walk_step(a, roi, rng);
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    for (double d : {dx, dy}) {
      const bool on_lattice = std::abs(d) < 1e-12 || std::abs(std::abs(d) - 0.2) < 1e-12;
      const bool clamped = b.x == 0.0 || b.x == 1.0 || b.y == 0.0 || b.y == 1.0;
      CHECK((on_lattice || clamped));
    }
    CHECK(roi.contains(b.x, b.y));
    moved += (dx != 0.0 || dy != 0.0);
    a = b;
  }
  CHECK(moved > 1000);
}

TEST_CASE("scenario spawning") {
  ScenarioConfig cfg;
  cfg.seed = 17;
  cfg.frac_moving = 0.25;
  const auto w1 = spawn_scenario(cfg);
  const auto w2 = spawn_scenario(cfg);
  REQUIRE(w1.actors.size() == w2.actors.size());
  CHECK(w1.actors.size() >= 80);
  CHECK(w1.actors.size() <= 120);
  int moving = 0;
  for (std::size_t i = 0; i < w1.actors.size(); ++i) {
    CHECK(w1.actors[i].x == w2.actors[i].x);
    CHECK(w1.actors[i].y == w2.actors[i].y);
    CHECK(w1.roi.contains(w1.actors[i].x, w1.actors[i].y));
    moving += w1.actors[i].moving;
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(std::hypot(w1.actors[i].x - w1.actors[j].x, w1.actors[i].y - w1.actors[j].y) >= 0.6);
    }
  }
  CHECK(moving == static_cast<int>(std::floor(0.25 * w1.actors.size())));
  CHECK(w1.drone.position.z() == cfg.start_altitude);
  CHECK(w1.drone.position == w2.drone.position);

  cfg.roi_side = 2.0;
  cfg.actors_min = cfg.actors_max = 50;
  CHECK_THROWS_AS(spawn_scenario(cfg), PlacementFailure);
}

TEST_CASE("drone pose puts the camera at the drone") {
  DroneState d;
  d.position = {3, 4, 9};
  d.yaw = 1.1;
  const auto pose = d.pose(5);
  CHECK(pose.frame_id == 5);
  const auto w2c = geometry::compose(d.body_to_camera, pose.world_to_body());
  CHECK((geometry::camera_center(w2c) - d.position).norm() < 1e-12);
  const auto px = geometry::project_plane_point({3, 4, 1.7}, w2c, geometry::CameraModel{});
  CHECK(px.x == doctest::Approx(128.0));
  CHECK(px.y == doctest::Approx(128.0));
}

TEST_CASE("observation skips heads far outside the image") {
  WorldState w;
  w.roi = {0, 0, 100, 100};
  w.actors = {{10, 10, false, 0.3}, {90, 90, false, 0.3}};
  w.drone.position = {10, 10, 10};
  PipelineConfig cfg;
  const auto o = observe(w, w.drone, cfg, 0);
  CHECK(o.density.total() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("target selection") {
  const std::vector<tracking::TrackState> tracks = {track(3, 2.0, 5), track(1, 2.0, 1), track(2, 1.0, 9)};
  CHECK(select_target(tracks, Criterion::Biggest)->id == 1);
  CHECK(select_target(tracks, Criterion::Oldest)->id == 2);
  CHECK_FALSE(select_target(tracks, Criterion::Random));
  CHECK_FALSE(select_target({}, Criterion::Biggest));
}

TEST_CASE("target hysteresis") {
  TargetSelector sel(Criterion::Biggest, 0.1);
  std::vector<tracking::TrackState> tracks = {track(1, 2.0, 0)};
  CHECK(sel.choose(tracks)->id == 1);
  tracks.push_back(track(2, 2.1, 0));
  CHECK(sel.choose(tracks)->id == 1);
  tracks[1].mean(2) = 2.3;
  CHECK(sel.choose(tracks)->id == 2);
  sel.veto(2);
  CHECK(sel.choose(tracks)->id == 1);
  CHECK(sel.current() == 1);
}

TEST_CASE("landing policy") {
  ScenarioConfig cfg;
  DroneState d;
  d.position = {5, 5, 10};

  auto cmd = landing_policy_step(d, tracking::Circle{8, 9, 2}, cfg);
  CHECK(cmd.kind == Command::Kind::Goto);
  CHECK(cmd.waypoint == Eigen::Vector3d(8, 9, 2));

  d.position = {8.3, 9, 2};
  cmd = landing_policy_step(d, tracking::Circle{8, 9, 2}, cfg);
  CHECK(cmd.kind == Command::Kind::Land);

  d.position = {8.6, 9, 2};
  CHECK(landing_policy_step(d, tracking::Circle{8, 9, 2}, cfg).kind == Command::Kind::Goto);

  // Waypoints outside the ROI are pulled back to its margin.
  cmd = landing_policy_step(d, tracking::Circle{-40, 45, 2}, cfg);
  CHECK(cmd.waypoint == Eigen::Vector3d(-1, 31, 2));

  cmd = landing_policy_step(d, std::nullopt, cfg);
  CHECK(cmd.kind == Command::Kind::Ascend);
  d.position.z() = cfg.ceiling;
  CHECK(landing_policy_step(d, std::nullopt, cfg).kind == Command::Kind::Hold);
}

TEST_CASE("kinematics respect speed limits and arrive together") {
  ScenarioConfig cfg;
  DroneState d;
  d.position = {0, 0, 10};
  const Command go{Command::Kind::Goto, {6, 8, 2}};
  Eigen::Vector3d prev = d.position;
  int ticks = 0;
  while (d.position != go.waypoint && ticks < 1000) {
    apply_command(d, go, cfg);
    const Eigen::Vector3d step = d.position - prev;
    CHECK(step.head<2>().norm() <= cfg.speed_xy * cfg.dt_sim + 1e-12);
    CHECK(std::abs(step.z()) <= cfg.speed_z * cfg.dt_sim + 1e-12);
    prev = d.position;
    ++ticks;
  }
  CHECK(ticks == 80);  // 8 m of descent at 1 m/s

  apply_command(d, Command{Command::Kind::Land, {}}, cfg);
  CHECK(d.position.z() == doctest::Approx(1.9));
  apply_command(d, Command{Command::Kind::Hold, {}}, cfg);
  CHECK(d.position.z() == doctest::Approx(1.9));
}

TEST_CASE("missions are deterministic") {
  ScenarioConfig sc;
  sc.seed = 5;
  sc.frac_moving = 0.3;
  PipelineConfig pc;
  const auto a = simulate_mission(sc, pc);
  const auto b = simulate_mission(sc, pc);
  CHECK(same_trajectory(a, b));
  CHECK_FALSE(a.frames.empty());
  sc.seed = 6;
  CHECK_FALSE(same_trajectory(a, simulate_mission(sc, pc)));
}

TEST_CASE("empty world lands safely") {
  ScenarioConfig sc;
  sc.actors_min = sc.actors_max = 0;
  const auto log = simulate_mission(sc, PipelineConfig{});
  CHECK(log.outcome == Outcome::LandedSafe);
  CHECK(log.touchdown_clearance == -1.0);
  CHECK(log.frames.back().command.kind == Command::Kind::Land);
}

TEST_CASE("random criterion lands without perception") {
  ScenarioConfig sc;
  sc.criterion = Criterion::Random;
  const auto log = simulate_mission(sc, PipelineConfig{});
  for (const auto& f : log.frames) {
    CHECK_FALSE(f.perceived);
    CHECK(f.proposals.empty());
  }
  CHECK((log.outcome == Outcome::LandedSafe || log.outcome == Outcome::Collision));
}

TEST_CASE("observer sees every frame") {
  ScenarioConfig sc;
  int seen = 0;
  int perceived = 0;
  const auto log = simulate_mission(sc, PipelineConfig{}, [&](const FrameView& v) {
    ++seen;
    perceived += v.perception != nullptr;
  });
  CHECK(seen == static_cast<int>(log.frames.size()));
  CHECK(perceived == seen);
}

TEST_CASE("name round trips") {
  for (auto c : {Criterion::Biggest, Criterion::Oldest, Criterion::Random}) CHECK(parse_criterion(to_string(c)) == c);
  for (auto o : {Outcome::LandedSafe, Outcome::Collision, Outcome::Timeout, Outcome::Aborted}) {
    CHECK(parse_outcome(to_string(o)) == o);
  }
  CHECK_THROWS_AS(parse_criterion("largest"), InvalidArgument);
}
