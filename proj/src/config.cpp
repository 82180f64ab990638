#include "slz/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>
#include <vector>

#include "slz/error.hpp"
#include "slz/format.hpp"

namespace slz::cli {

namespace {

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

double to_double(const std::string& v) {
  const auto d = text::parse_double(v);
  if (!d) throw ConfigError("expected a number, got '" + v + "'");
  return *d;
}

long long to_int(const std::string& v) {
  const auto i = text::parse_int(v);
  if (!i) throw ConfigError("expected an integer, got '" + v + "'");
  return *i;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

template <class T>
Key real(const char* section, const char* name, T RunConfig::*outer, double T::*field) {
  return {section, name, [=](RunConfig& c, const std::string& v) { (c.*outer).*field = to_double(v); },
          [=](const RunConfig& c) { return text::format_double((c.*outer).*field); }};
}

template <class T>
Key integer(const char* section, const char* name, T RunConfig::*outer, int T::*field) {
  return {section, name,
          [=](RunConfig& c, const std::string& v) { (c.*outer).*field = static_cast<int>(to_int(v)); },
          [=](const RunConfig& c) { return std::to_string((c.*outer).*field); }};
}

// Pipeline sub-structs are nested one level deeper.
template <class S, class T>
Key nested(const char* section, const char* name, S world::PipelineConfig::*sub, T S::*field) {
  return {section, name,
          [=](RunConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, int>) {
              c.pipeline.*sub.*field = static_cast<int>(to_int(v));
            } else {
              c.pipeline.*sub.*field = to_double(v);
            }
          },
          [=](const RunConfig& c) {
            if constexpr (std::is_same_v<T, int>) {
              return std::to_string(c.pipeline.*sub.*field);
            } else {
              return text::format_double(c.pipeline.*sub.*field);
            }
          }};
}

Key r_diag(const char* name, int i) {
  return {"tracker", name,
          [=](RunConfig& c, const std::string& v) { c.pipeline.tracker.r_meas(i, i) = to_double(v); },
          [=](const RunConfig& c) { return text::format_double(c.pipeline.tracker.r_meas(i, i)); }};
}

const std::vector<Key>& keys() {
  using world::PipelineConfig;
  using world::ScenarioConfig;
  static const std::vector<Key> table = {
      real("scenario", "roi_side", &RunConfig::scenario, &ScenarioConfig::roi_side),
      integer("scenario", "actors_min", &RunConfig::scenario, &ScenarioConfig::actors_min),
      integer("scenario", "actors_max", &RunConfig::scenario, &ScenarioConfig::actors_max),
      real("scenario", "frac_moving", &RunConfig::scenario, &ScenarioConfig::frac_moving),
      {"scenario", "seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t s = 0;
         const auto res = std::from_chars(v.data(), v.data() + v.size(), s);
         if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
           throw ConfigError("expected an unsigned integer, got '" + v + "'");
         }
         c.scenario.seed = s;
       },
       [](const RunConfig& c) { return std::to_string(c.scenario.seed); }},
      real("scenario", "dt", &RunConfig::scenario, &ScenarioConfig::dt_sim),
      {"scenario", "criterion",
       [](RunConfig& c, const std::string& v) {
         try {
           c.scenario.criterion = world::parse_criterion(v);
         } catch (const InvalidArgument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return world::to_string(c.scenario.criterion); }},
      real("scenario", "max_mission_time", &RunConfig::scenario, &ScenarioConfig::max_mission_time),
      real("scenario", "start_altitude", &RunConfig::scenario, &ScenarioConfig::start_altitude),
      real("scenario", "ceiling", &RunConfig::scenario, &ScenarioConfig::ceiling),
      real("scenario", "speed_xy", &RunConfig::scenario, &ScenarioConfig::speed_xy),
      real("scenario", "speed_z", &RunConfig::scenario, &ScenarioConfig::speed_z),
      real("scenario", "body_radius", &RunConfig::scenario, &ScenarioConfig::body_radius),
      real("scenario", "drone_radius", &RunConfig::scenario, &ScenarioConfig::drone_radius),
      real("scenario", "land_altitude", &RunConfig::scenario, &ScenarioConfig::land_altitude),
      real("scenario", "land_xy_tolerance", &RunConfig::scenario, &ScenarioConfig::land_xy_tolerance),
      real("scenario", "waypoint_margin", &RunConfig::scenario, &ScenarioConfig::waypoint_margin),
      real("scenario", "abort_after", &RunConfig::scenario, &ScenarioConfig::abort_after),
      real("scenario", "retarget_margin", &RunConfig::scenario, &ScenarioConfig::retarget_margin),

      nested("camera", "fx", &PipelineConfig::camera, &geometry::CameraModel::fx),
      nested("camera", "fy", &PipelineConfig::camera, &geometry::CameraModel::fy),
      nested("camera", "cx", &PipelineConfig::camera, &geometry::CameraModel::cx),
      nested("camera", "cy", &PipelineConfig::camera, &geometry::CameraModel::cy),
      nested("camera", "width", &PipelineConfig::camera, &geometry::CameraModel::width),
      nested("camera", "height", &PipelineConfig::camera, &geometry::CameraModel::height),

      nested("plane", "head_height", &PipelineConfig::plane, &geometry::HeadPlane::height),

      {"grid", "cell_size", [](RunConfig& c, const std::string& v) { c.pipeline.cell_size = to_double(v); },
       [](const RunConfig& c) { return text::format_double(c.pipeline.cell_size); }},
      {"grid", "margin", [](RunConfig& c, const std::string& v) { c.pipeline.margin = to_double(v); },
       [](const RunConfig& c) { return text::format_double(c.pipeline.margin); }},

      nested("slz", "n_p", &PipelineConfig::slz, &zones::SlzConfig::n_p),
      nested("slz", "r0", &PipelineConfig::slz, &zones::SlzConfig::r0),

      nested("tracker", "sigma_a", &PipelineConfig::tracker, &tracking::TrackerConfig::sigma_a),
      r_diag("r_x", 0),
      r_diag("r_y", 1),
      r_diag("r_r", 2),
      nested("tracker", "n_p", &PipelineConfig::tracker, &tracking::TrackerConfig::n_p),
      nested("tracker", "iou_gate", &PipelineConfig::tracker, &tracking::TrackerConfig::iou_gate),
      nested("tracker", "mu1", &PipelineConfig::tracker, &tracking::TrackerConfig::mu1),
      nested("tracker", "mu2", &PipelineConfig::tracker, &tracking::TrackerConfig::mu2),
      nested("tracker", "min_radius", &PipelineConfig::tracker, &tracking::TrackerConfig::min_radius),

      nested("noise", "sigma_px", &PipelineConfig::noise, &density::OracleNoiseConfig::sigma_px),
      nested("noise", "fp_rate", &PipelineConfig::noise, &density::OracleNoiseConfig::fp_rate),
      nested("noise", "fn_rate", &PipelineConfig::noise, &density::OracleNoiseConfig::fn_rate),
      {"noise", "seed",
       [](RunConfig& c, const std::string& v) {
         const auto i = to_int(v);
         if (i < 0) throw ConfigError("noise seed must be non-negative");
         c.pipeline.noise.seed = static_cast<std::uint64_t>(i);
       },
       [](const RunConfig& c) { return std::to_string(c.pipeline.noise.seed); }},
      {"noise", "head_sigma_m", [](RunConfig& c, const std::string& v) { c.pipeline.head_sigma_m = to_double(v); },
       [](const RunConfig& c) { return text::format_double(c.pipeline.head_sigma_m); }},

      {"output", "dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir.string(); }},
      {"output", "render", [](RunConfig& c, const std::string& v) { c.render = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.render ? "true" : "false"); }},
      {"output", "runs", [](RunConfig& c, const std::string& v) { c.runs = static_cast<int>(to_int(v)); },
       [](const RunConfig& c) { return std::to_string(c.runs); }},
  };
  return table;
}

RunConfig from_tree(const boost::property_tree::ptree& tree) {
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' is outside any section");
    }
    for (const auto& [name, value] : body) {
      const Key* key = nullptr;
      for (const auto& k : keys()) {
        if (section == k.section && name == k.name) key = &k;
      }
      if (!key) throw ConfigError("unknown key [" + section + "] " + name);
      try {
        key->set(cfg, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError("[" + section + "] " + name + ": " + e.what());
      }
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  try {
    scenario.validate();
    pipeline.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (out_dir.empty()) throw ConfigError("output directory must not be empty");
}

RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.scenario.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  if (o.criterion) cfg.scenario.criterion = *o.criterion;
  if (o.render) cfg.render = *o.render;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.frac_moving) cfg.scenario.frac_moving = *o.frac_moving;
  if (o.actors) {
    cfg.scenario.actors_min = *o.actors;
    cfg.scenario.actors_max = *o.actors;
  }
  cfg.validate();
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace slz::cli
