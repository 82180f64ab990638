#include "slz/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "slz/error.hpp"
#include "slz/format.hpp"
#include "slz/mission_log.hpp"
#include "slz/render.hpp"

namespace slz::cli {

namespace {

namespace fs = std::filesystem;
using text::format_double;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string timing_header() { return "seed,exec_time_avg,exec_time_max,exec_time_min\n"; }

std::string timing_row(std::uint64_t seed, const eval::Stat& s) {
  return std::to_string(seed) + "," + format_double(s.avg) + "," + format_double(s.max) + "," +
         format_double(s.min) + "\n";
}

std::string report_csv(const eval::MetricsReport& r) {
  std::ostringstream out;
  out << "metric,avg,std,max,min,count\n";
  const auto row = [&](const char* name, const eval::Stat& s) {
    out << name << ',' << format_double(s.avg) << ',' << format_double(s.std) << ',' << format_double(s.max)
        << ',' << format_double(s.min) << ',' << s.count << '\n';
  };
  row("warning", r.warning);
  row("danger", r.danger);
  row("slz_area", r.slz_area);
  row("best_iou", r.best_iou);
  row("nearest_person", r.nearest_person);
  out << "success_rate," << format_double(r.success_rate) << ",0," << format_double(r.success_rate) << ','
      << format_double(r.success_rate) << ',' << r.missions << '\n';
  return out.str();
}

std::string frame_name(int frame, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.%s", frame, ext);
  return buf;
}

}  // namespace

int exit_code(world::Outcome o) {
  switch (o) {
    case world::Outcome::LandedSafe: return 0;
    case world::Outcome::Collision: return kExitCollision;
    case world::Outcome::Timeout: return kExitTimeout;
    case world::Outcome::Aborted: return kExitAborted;
  }
  return kExitSoftware;
}

RunConfig resolve_config(const std::optional<fs::path>& config, const Overrides& o) {
  RunConfig cfg = config ? load_config(*config) : RunConfig{};
  apply_overrides(cfg, o);
  return cfg;
}

std::string summary_header() {
  return "seed,outcome,frames,warning_avg,danger_avg,slz_area_avg,best_iou_avg,nearest_person_avg\n";
}

std::string summary_row(const eval::MissionSummary& s) {
  const auto& m = s.metrics;
  return std::to_string(s.seed) + "," + world::to_string(s.outcome) + "," + std::to_string(s.frames) + "," +
         format_double(m.warning.avg) + "," + format_double(m.danger.avg) + "," + format_double(m.slz_area.avg) +
         "," + format_double(m.best_iou.avg) + "," + format_double(m.nearest_person.avg) + "\n";
}

int cmd_run(const RunConfig& cfg, std::ostream& msg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  const fs::path frames_dir = cfg.out_dir / "frames";
  if (cfg.render) ensure_dir(frames_dir);

  world::FrameObserver observer;
  if (cfg.render) {
    const auto roi = cfg.scenario.roi();
    observer = [&](const world::FrameView& v) {
      render::write_ppm(frames_dir / frame_name(v.record.frame, "ppm"), render::composite(v, roi));
      if (v.perception) {
        render::write_pgm(frames_dir / frame_name(v.record.frame, "pgm"),
                          render::occupancy_image(v.perception->grid));
      }
    };
  }
  const auto log = world::simulate_mission(cfg.scenario, cfg.pipeline, observer);
  world::write_mission_log(cfg.out_dir / "mission.jsonl", log);

  const auto summary = eval::summarize(log);
  write_text(cfg.out_dir / "summary.csv", summary_header() + summary_row(summary));
  write_text(cfg.out_dir / "timing.csv", timing_header() + timing_row(log.seed, summary.metrics.exec_time));

  msg << "seed " << log.seed << ": " << world::to_string(log.outcome) << " after " << log.frames.size()
      << " frames, t=" << format_double(log.end_time) << " s\n";
  return exit_code(log.outcome);
}

int cmd_batch(const RunConfig& cfg, std::ostream& msg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  const int runs = cfg.runs;
  std::vector<world::MissionLog> logs(static_cast<std::size_t>(runs));
  std::vector<std::string> errors(static_cast<std::size_t>(runs));

  // One mission per worker; rows are collected afterwards in seed order.
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < runs; ++i) {
    world::ScenarioConfig sc = cfg.scenario;
    sc.seed = cfg.scenario.seed + static_cast<std::uint64_t>(i);
    try {
      logs[static_cast<std::size_t>(i)] = world::simulate_mission(sc, cfg.pipeline);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (int i = 0; i < runs; ++i) {
    if (!errors[static_cast<std::size_t>(i)].empty()) {
      throw Error("seed " + std::to_string(cfg.scenario.seed + static_cast<std::uint64_t>(i)) + ": " +
                  errors[static_cast<std::size_t>(i)]);
    }
  }

  std::string summary = summary_header();
  std::string timing = timing_header();
  for (const auto& log : logs) {
    const auto s = eval::summarize(log);
    summary += summary_row(s);
    timing += timing_row(log.seed, s.metrics.exec_time);
  }
  const auto report = eval::aggregate(logs);
  write_text(cfg.out_dir / "summary.csv", summary);
  write_text(cfg.out_dir / "report.csv", report_csv(report));
  write_text(cfg.out_dir / "timing.csv", timing);

  msg << runs << " missions, criterion " << world::to_string(cfg.scenario.criterion) << ", success rate "
      << format_double(report.success_rate) << "\n";
  return 0;
}

int cmd_replay(const fs::path& annotations, const fs::path& poses, const RunConfig& cfg, std::ostream& msg) {
  cfg.validate();
  if (cfg.scenario.criterion == world::Criterion::Random) {
    throw ConfigError("replay needs the biggest or oldest criterion");
  }
  const auto heads = eval::read_annotations(annotations);
  const auto pose_list = eval::read_poses(poses);

  // Same perception settings a simulated mission with this scenario uses.
  world::PipelineConfig pc = cfg.pipeline;
  pc.region = cfg.scenario.roi();
  pc.noise.seed = world::mission_noise_seed(cfg.scenario, cfg.pipeline);
  const auto result = eval::replay_annotations(heads, pose_list, pc, cfg.scenario.criterion,
                                               cfg.scenario.dt_sim, cfg.scenario.retarget_margin);

  ensure_dir(cfg.out_dir);
  std::ostringstream frames;
  frames << "frame,heads,proposals,has_target,target_x,target_y,target_r,warning,danger,slz_area,best_iou\n";
  std::ostringstream timing;
  timing << "frame,exec_time\n";
  for (std::size_t i = 0; i < result.frames.size(); ++i) {
    const auto& f = result.frames[i];
    const auto& m = result.metrics[i];
    frames << f.frame << ',' << f.actors.size() << ',' << f.proposals.size() << ',' << (m.has_target ? 1 : 0)
           << ',' << (f.target ? format_double(f.target->x) : "") << ','
           << (f.target ? format_double(f.target->y) : "") << ','
           << (f.target ? format_double(f.target->r) : "") << ',' << m.warning << ',' << m.danger << ','
           << format_double(m.slz_area) << ',' << (m.best_iou ? format_double(*m.best_iou) : "") << '\n';
    timing << f.frame << ',' << format_double(m.exec_time) << '\n';
  }
  const auto& r = result.report;
  std::ostringstream summary;
  summary << "frames,annotated_frames,no_annotations,warning_avg,warning_std,danger_avg,danger_std,"
             "slz_area_avg,best_iou_avg\n"
          << result.frames.size() << ',' << result.annotated_frames << ','
          << (result.annotated_frames == 0 ? 1 : 0) << ',' << format_double(r.warning.avg) << ','
          << format_double(r.warning.std) << ',' << format_double(r.danger.avg) << ','
          << format_double(r.danger.std) << ',' << format_double(r.slz_area.avg) << ','
          << format_double(r.best_iou.avg) << '\n';
  write_text(cfg.out_dir / "frames.csv", frames.str());
  write_text(cfg.out_dir / "summary.csv", summary.str());
  write_text(cfg.out_dir / "timing.csv", timing.str());

  msg << result.frames.size() << " frames replayed, " << result.annotated_frames << " with heads\n";
  if (result.annotated_frames == 0) msg << "warning: no annotated heads in " << annotations.string() << "\n";
  return 0;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Safe landing zone simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config;
  Overrides o;
  std::string criterion;
  std::string out_dir;
  bool render_flag = false;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "INI configuration file");
    sub->add_option("--seed", o.seed, "scenario seed (batch: first seed)");
    sub->add_option("--criterion", criterion, "biggest, oldest or random");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--frac-moving", o.frac_moving, "fraction of walking actors");
    sub->add_option("--actors", o.actors, "exact number of actors");
  };

  auto* run = app.add_subcommand("run", "simulate one landing mission");
  common(run);
  run->add_flag("--render", render_flag, "write per-frame PPM/PGM renders");

  auto* batch = app.add_subcommand("batch", "simulate seeds seed..seed+runs-1");
  common(batch);
  batch->add_option("--runs", o.runs, "number of missions")->check(CLI::PositiveNumber);

  std::string annotations;
  std::string poses;
  auto* replay = app.add_subcommand("replay", "evaluate annotated head positions");
  common(replay);
  replay->add_option("annotations", annotations, "HEADS v1 file")->required();
  replay->add_option("poses", poses, "POSE v1 file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!criterion.empty()) {
      try {
        o.criterion = world::parse_criterion(criterion);
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    if (!out_dir.empty()) o.out_dir = out_dir;
    if (render_flag) o.render = true;
    const auto path = config ? std::optional<fs::path>(*config) : std::nullopt;
    const RunConfig cfg = resolve_config(path, o);

    if (run->parsed()) return cmd_run(cfg, std::cout);
    if (batch->parsed()) return cmd_batch(cfg, std::cout);
    return cmd_replay(annotations, poses, cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MalformedFile& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSoftware;
  }
}

}  // namespace slz::cli
