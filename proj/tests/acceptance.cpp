// Acceptance run: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `acceptance 1 4`.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "scratch.hpp"
#include "slz/cli.hpp"
#include "slz/density.hpp"
#include "slz/eval.hpp"
#include "slz/mission_log.hpp"
#include "slz/tracking.hpp"
#include "slz/world.hpp"
#include "slz/zones.hpp"

using namespace slz;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

geometry::PlaneGrid to_grid(const oracle::Grid& g, int rows, int cols, double cell) {
  geometry::PlaneGrid out(0.0, 0.0, cell, rows, cols, density::kFree);
  out.values = g;
  return out;
}

// Mission batches shared between criteria.
struct Batch {
  std::vector<world::MissionLog> logs;
  double seconds = 0.0;

  double success_rate() const {
    std::size_t safe = 0;
    for (const auto& l : logs) safe += l.outcome == world::Outcome::LandedSafe;
    return logs.empty() ? 0.0 : static_cast<double>(safe) / logs.size();
  }
};

Batch run_batch(world::Criterion criterion, double frac_moving, int runs, std::uint64_t base_seed) {
  Batch b;
  const auto t0 = Clock::now();
  world::PipelineConfig pc;
  for (int i = 0; i < runs; ++i) {
    world::ScenarioConfig sc;
    sc.seed = base_seed + static_cast<std::uint64_t>(i);
    sc.criterion = criterion;
    sc.frac_moving = frac_moving;
    b.logs.push_back(world::simulate_mission(sc, pc));
  }
  b.seconds = seconds_since(t0);
  return b;
}

struct Batches {
  std::optional<Batch> static_biggest, static_oldest, dynamic_biggest, dynamic_oldest, dynamic_random;
};

Batch& ensure(std::optional<Batch>& slot, world::Criterion c, double frac) {
  if (!slot) slot = run_batch(c, frac, 100, 1);
  return *slot;
}

Result criterion_1() {
  std::mt19937_64 rng(1001);
  double edt_seconds = 0.0;
  long mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const int rows = 1 + static_cast<int>(rng() % 64);
    const int cols = 1 + static_cast<int>(rng() % 64);
    const double frac = std::uniform_real_distribution<double>(0.0, 0.5)(rng) * (i % 10 != 0);
    const auto g = oracle::random_grid(rows, cols, frac, rng);
    const auto grid = to_grid(g, rows, cols, 0.1);
    const auto t0 = Clock::now();
    const auto dm = zones::euclidean_distance_transform(grid);
    edt_seconds += seconds_since(t0);
    const auto expect = oracle::edt_squared(g, rows, cols);
    for (std::size_t k = 0; k < expect.size(); ++k) mismatches += dm.squared_cells[k] != expect[k];
  }
  return {mismatches == 0 && edt_seconds < 5.0,
          fmt("500 grids, %ld mismatching cells, transform time %.3f s", mismatches, edt_seconds)};
}

Result criterion_2() {
  std::mt19937_64 rng(1002);
  int radius_bad = 0;
  int centre_bad = 0;
  const double cell = 0.1;
  for (int i = 0; i < 100; ++i) {
    const int rows = 4 + static_cast<int>(rng() % 61);
    const int cols = 4 + static_cast<int>(rng() % 61);
    const double frac = std::uniform_real_distribution<double>(0.0, 0.1)(rng);
    const auto g = oracle::random_grid(rows, cols, frac, rng);
    const auto best = oracle::largest_empty_circles(g, rows, cols);
    const auto p = zones::extract_slz(to_grid(g, rows, cols, cell), zones::SlzConfig{1, 1e-9}, 0);
    if (best.front().squared == 0) {
      radius_bad += !p.empty();
      continue;
    }
    if (p.size() != 1 || p[0].radius != std::sqrt(static_cast<double>(best.front().squared)) * cell) {
      ++radius_bad;
      continue;
    }
    const bool near = std::any_of(best.begin(), best.end(), [&](const oracle::EmptyCircle& e) {
      return std::abs(p[0].cx - e.col * cell) <= cell + 1e-12 && std::abs(p[0].cy - e.row * cell) <= cell + 1e-12;
    });
    centre_bad += !near;
  }
  return {radius_bad == 0 && centre_bad == 0,
          fmt("100 grids, %d radius mismatches, %d centres off by more than one cell", radius_bad, centre_bad)};
}

Result criterion_3() {
  std::mt19937_64 rng(1003);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const int m = 1 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd c(n, m);
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < m; ++k) {
        // Integers or multiples of 1/1024: every partial sum is exact.
        c(r, k) = i % 2 == 0 ? static_cast<double>(rng() % 100) : static_cast<double>(rng() % 100000) / 1024.0;
      }
    }
    const auto a = tracking::hungarian_assign(c);
    double cost = 0.0;
    for (const auto& [r, k] : a) cost += c(r, k);
    bad += a.size() != static_cast<std::size_t>(std::min(n, m)) || cost != oracle::min_assignment_cost(c);
  }
  return {bad == 0, fmt("1000 matrices, %d not matching the permutation minimum", bad)};
}

Result criterion_4() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> rad(0.2, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const tracking::Circle a{pos(rng), pos(rng), rad(rng)};
    const tracking::Circle b{pos(rng), pos(rng), rad(rng)};
    const double mc = oracle::monte_carlo_iou({a.x, a.y, a.r}, {b.x, b.y, b.r}, 10'000'000, 5000 + i);
    worst = std::max(worst, std::abs(tracking::circle_iou(a, b) - mc));
  }
  const double unit = tracking::circle_iou({0, 0, 1}, {1, 0, 1});
  return {worst < 1e-3 && std::abs(unit - 0.2430) <= 1e-3,
          fmt("max |closed form - Monte Carlo| = %.2e over 100 pairs; unit circles at distance 1: %.6f", worst, unit)};
}

Result criterion_5() {
  tracking::TrackerConfig cfg;
  cfg.dt = 0.1;
  const tracking::Vector6d truth0 = (tracking::Vector6d() << 4.0, -2.0, 3.0, 0.8, -0.5, 0.05).finished();
  const auto truth = [&](int k) {
    tracking::Vector6d s = truth0;
    s.head<3>() += truth0.tail<3>() * (k * cfg.dt);
    return s;
  };
  tracking::TrackState t;
  t.mean << truth(0).head<3>(), 0.0, 0.0, 0.0;
  t.covariance = cfg.initial_covariance();
  bool spd = true;
  for (int k = 1; k < 50; ++k) {
    t = tracking::kf_predict(t, cfg);
    t = tracking::kf_update(t, truth(k).head<3>(), cfg);
    const auto& p = t.covariance;
    spd = spd && (p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-9 &&
          Eigen::SelfAdjointEigenSolver<tracking::Matrix6d>(p).eigenvalues().minCoeff() > 0.0;
  }
  const tracking::Vector6d e = (t.mean - truth(49)).cwiseAbs();
  const double err = e.maxCoeff();
  return {err < 1e-3 && spd,
          fmt("50 frames, sigma_a %.2g, errors x %.2e y %.2e r %.2e vx %.2e vy %.2e vr %.2e, covariance SPD every "
              "frame: %s",
              cfg.sigma_a, e(0), e(1), e(2), e(3), e(4), e(5), spd ? "yes" : "no")};
}

Result criterion_6() {
  world::PipelineConfig pc;
  long violations = 0;
  long proposals = 0;
  long frames = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    world::ScenarioConfig sc;
    sc.seed = seed;
    const auto log = world::simulate_mission(sc, pc);
    for (const auto& f : log.frames) {
      ++frames;
      for (const auto& p : f.proposals) {
        ++proposals;
        for (const auto& a : f.actors) violations += std::hypot(a.x() - p.cx, a.y() - p.cy) < p.radius;
      }
    }
  }
  return {violations == 0,
          fmt("50 static missions, %ld frames, %ld proposals, %ld actors inside a proposal", frames, proposals,
              violations)};
}

Result criterion_7(Batches& b) {
  auto& big = ensure(b.static_biggest, world::Criterion::Biggest, 0.0);
  auto& old = ensure(b.static_oldest, world::Criterion::Oldest, 0.0);
  const double secs = big.seconds + old.seconds;
  return {big.success_rate() >= 0.95 && old.success_rate() >= 0.95 && secs < 600.0,
          fmt("success biggest %.2f, oldest %.2f (100 missions each), %.1f s", big.success_rate(), old.success_rate(),
              secs)};
}

Result criterion_8(Batches& b) {
  const double big = ensure(b.dynamic_biggest, world::Criterion::Biggest, 0.2).success_rate();
  const double old = ensure(b.dynamic_oldest, world::Criterion::Oldest, 0.2).success_rate();
  const double rnd = ensure(b.dynamic_random, world::Criterion::Random, 0.2).success_rate();
  const bool a = big >= rnd + 0.15 - 1e-12 && old >= rnd + 0.15 - 1e-12;
  const bool o = old >= big - 0.05 - 1e-12;
  return {a && o, fmt("frac_moving 0.2: biggest %.2f, oldest %.2f, random %.2f; (a) margin >= 0.15: %s, (b) "
                      "oldest >= biggest - 0.05: %s",
                      big, old, rnd, a ? "PASS" : "FAIL", o ? "PASS" : "FAIL")};
}

Result criterion_9(Batches& b) {
  long frames = 0;
  long bad = 0;
  for (auto* slot : {&b.static_biggest, &b.static_oldest, &b.dynamic_biggest, &b.dynamic_oldest}) {
    if (!*slot) continue;
    for (const auto& log : (*slot)->logs) {
      for (const auto& f : log.frames) {
        if (!f.target || f.target->r < 1.0) continue;
        ++frames;
        const auto rc = eval::risk_counts(f.target->circle(), f.actors);
        bad += rc.danger > rc.warning;
      }
    }
  }
  world::ScenarioConfig sc;
  sc.actors_min = sc.actors_max = 0;
  const auto empty = eval::summarize(world::simulate_mission(sc, world::PipelineConfig{}));
  const auto& m = empty.metrics;
  const bool zero_ok = m.warning.avg == 0.0 && m.danger.avg == 0.0 && m.best_iou.count > 0 && m.best_iou.avg >= 0.9;
  return {bad == 0 && frames > 0 && zero_ok,
          fmt("%ld target frames with r >= 1 m, %ld with danger > warning; zero-actor mission warning %.3g, danger "
              "%.3g, best IoU %.3f",
              frames, bad, m.warning.avg, m.danger.avg, m.best_iou.avg)};
}

Result criterion_10() {
  const auto dir = scratch_dir("determinism");
  cli::RunConfig cfg;
  cfg.runs = 100;
  cfg.scenario.seed = 500;
  cfg.scenario.frac_moving = 0.2;
  std::ostringstream msg;
  cfg.out_dir = dir / "first";
  cli::cmd_batch(cfg, msg);
  cfg.out_dir = dir / "second";
  cli::cmd_batch(cfg, msg);
  const bool summary = slurp(dir / "first" / "summary.csv") == slurp(dir / "second" / "summary.csv");
  const bool report = slurp(dir / "first" / "report.csv") == slurp(dir / "second" / "report.csv");
  const auto text = slurp(dir / "first" / "summary.csv");
  const bool rows = std::count(text.begin(), text.end(), '\n') == 101;
  return {summary && report && rows, fmt("100-run batch twice: summary.csv identical %s, report.csv identical %s, rows %s",
                                         summary ? "yes" : "no", report ? "yes" : "no", rows ? "101" : "wrong")};
}

Result criterion_11() {
  const auto dir = scratch_dir("round_trips");
  world::ScenarioConfig sc;
  sc.seed = 77;
  sc.frac_moving = 0.2;
  const world::PipelineConfig pc;
  density::DensityMap dmap;
  const auto log = world::simulate_mission(sc, pc, [&](const world::FrameView& v) {
    if (v.perception && dmap.values.empty()) dmap = v.perception->density;
  });

  std::vector<std::string> failed;
  const auto twice = [&](const char* name, const std::function<void(const std::filesystem::path&)>& write,
                         const std::function<void(const std::filesystem::path&, const std::filesystem::path&)>& rw) {
    const auto a = dir / (std::string(name) + ".1");
    const auto b = dir / (std::string(name) + ".2");
    write(a);
    rw(a, b);
    if (slurp(a) != slurp(b) || slurp(a).empty()) failed.push_back(name);
  };

  twice("density", [&](const auto& p) { density::save_density(p, dmap); },
        [](const auto& a, const auto& b) { density::save_density(b, density::load_density(a)); });

  std::vector<eval::HeadAnnotation> heads;
  std::vector<world::FramePose> poses;
  eval::export_ground_truth(log, heads, poses);
  twice("annotations", [&](const auto& p) { eval::write_annotations(p, heads); },
        [](const auto& a, const auto& b) { eval::write_annotations(b, eval::read_annotations(a)); });
  twice("poses", [&](const auto& p) { eval::write_poses(p, poses); },
        [](const auto& a, const auto& b) { eval::write_poses(b, eval::read_poses(a)); });
  twice("mission_log", [&](const auto& p) { world::write_mission_log(p, log); },
        [](const auto& a, const auto& b) { world::write_mission_log(b, world::read_mission_log(a)); });

  std::string names;
  for (const auto& f : failed) names += " " + f;
  return {failed.empty(), failed.empty() ? fmt("density, annotation, pose and mission-log files byte-identical "
                                               "after write-read-write (%zu frames, %zu heads)",
                                               log.frames.size(), heads.size())
                                         : "differs:" + names};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto wanted = [&](int k) { return only.empty() || only.count(k) > 0; };

  Batches batches;
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"distance transform exactness", criterion_1},
      {"largest empty circle agreement", criterion_2},
      {"Hungarian optimality", criterion_3},
      {"circle IoU", criterion_4},
      {"Kalman filter correctness", criterion_5},
      {"pipeline safety invariant", criterion_6},
      {"landing success, static", [&] { return criterion_7(batches); }},
      {"landing success ordering, dynamic", [&] { return criterion_8(batches); }},
      {"metric sanity", [&] {
         ensure(batches.static_biggest, world::Criterion::Biggest, 0.0);
         ensure(batches.dynamic_biggest, world::Criterion::Biggest, 0.2);
         return criterion_9(batches);
       }},
      {"batch determinism", criterion_10},
      {"file round trips", criterion_11},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (!wanted(k)) continue;
    const auto t0 = Clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::printf("%s %2d %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", k, criteria[i].first, r.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
