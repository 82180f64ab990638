#include "slz/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "slz/error.hpp"

namespace slz::world {

geometry::RigidTransform nadir_mount() {
  return geometry::RigidTransform(Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal().toDenseMatrix(),
                                  Eigen::Vector3d::Zero());
}

void PipelineConfig::validate() const {
  camera.validate();
  if (!(plane.height > 0.0)) throw InvalidArgument("head plane height must be positive");
  if (!(cell_size > 0.0)) throw InvalidArgument("cell_size must be positive");
  if (!(margin >= 0.0)) throw InvalidArgument("margin must be non-negative");
  if (!(head_sigma_m >= 0.0)) throw InvalidArgument("head_sigma_m must be non-negative");
  slz.validate();
  tracker.validate();
  noise.validate();
  if (region && !(region->max_x > region->min_x && region->max_y > region->min_y)) {
    throw InvalidArgument("region is empty");
  }
}

std::uint64_t frame_seed(std::uint64_t base, int frame_id) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = base ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(frame_id) + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double frame_sigma_px(const PipelineConfig& cfg, const geometry::RigidTransform& world_to_camera) {
  const double depth = geometry::camera_center(world_to_camera).z() - cfg.plane.height;
  if (cfg.head_sigma_m <= 0.0 || !(depth > 0.0)) return cfg.noise.sigma_px;
  return std::max(cfg.noise.sigma_px, cfg.head_sigma_m * std::max(cfg.camera.fx, cfg.camera.fy) / depth);
}

density::DensityMap render_heads(std::span<const Eigen::Vector2d> heads,
                                 const geometry::RigidTransform& world_to_camera,
                                 const PipelineConfig& cfg, std::uint64_t seed) {
  density::OracleNoiseConfig noise = cfg.noise;
  noise.seed = seed;
  noise.sigma_px = frame_sigma_px(cfg, world_to_camera);
  const double reach = density::kBlobSupportSigmas * noise.sigma_px;

  std::vector<density::PixelPoint> pixels;
  pixels.reserve(heads.size());
  for (const auto& h : heads) {
    const auto p = geometry::try_project(Eigen::Vector3d(h.x(), h.y(), cfg.plane.height),
                                         world_to_camera, cfg.camera);
    if (!p) continue;
    if (p->x < -reach || p->x > cfg.camera.width + reach || p->y < -reach ||
        p->y > cfg.camera.height + reach) {
      continue;
    }
    pixels.push_back({p->x, p->y});
  }
  return density::render_oracle_density(pixels, noise, cfg.camera.width, cfg.camera.height);
}

PerceptionPipeline::PerceptionPipeline(PipelineConfig cfg)
    : cfg_(std::move(cfg)), tracker_(cfg_.tracker) {
  cfg_.validate();
}

PerceptionFrame PerceptionPipeline::process(const FramePose& pose,
                                            std::span<const Eigen::Vector2d> heads) {
  const auto world_to_camera = geometry::compose(cfg_.body_to_camera, pose.world_to_body());
  auto d = render_heads(heads, world_to_camera, cfg_, frame_seed(cfg_.noise.seed, pose.frame_id));
  return process_density(pose, std::move(d));
}

PerceptionFrame PerceptionPipeline::process_density(const FramePose& pose,
                                                    density::DensityMap density) {
  PerceptionFrame f;
  f.frame_id = pose.frame_id;
  f.world_to_camera = geometry::compose(cfg_.body_to_camera, pose.world_to_body());

  const auto start = std::chrono::steady_clock::now();
  const auto occupancy = density::occupancy_from_density(density);
  const auto empty = geometry::grid_footprint(cfg_.camera, f.world_to_camera, cfg_.plane,
                                              cfg_.cell_size, cfg_.margin);
  f.grid = geometry::sample_occupancy_to_plane(occupancy, empty, f.world_to_camera, cfg_.camera,
                                               cfg_.plane);
  if (cfg_.region) {
    geometry::mask_outside_region(f.grid, cfg_.region->min_x, cfg_.region->min_y,
                                  cfg_.region->max_x, cfg_.region->max_y);
  }
  f.proposals = zones::extract_slz(f.grid, cfg_.slz, pose.frame_id);
  f.events = tracker_.step(f.proposals);
  f.perception_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  f.mapped = geometry::visibility_mask(empty, f.world_to_camera, cfg_.camera, cfg_.plane);
  if (cfg_.region) {
    geometry::mask_outside_region(f.mapped, cfg_.region->min_x, cfg_.region->min_y,
                                  cfg_.region->max_x, cfg_.region->max_y);
  }
  f.density = std::move(density);
  return f;
}

}  // namespace slz::world
