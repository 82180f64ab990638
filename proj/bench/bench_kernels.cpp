// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "slz/kernels.hpp"
#include "slz/world.hpp"
#include "slz/zones.hpp"

namespace {

using namespace slz;

std::vector<kernels::Blob> random_blobs(int n, int w, int h) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h);
  std::vector<kernels::Blob> out(n);
  for (auto& b : out) b = {ux(rng), uy(rng)};
  return out;
}

std::vector<std::uint8_t> random_mask(int w, int h, double p, std::uint8_t on, std::uint8_t off) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution hit(p);
  std::vector<std::uint8_t> m(static_cast<std::size_t>(w) * h);
  for (auto& v : m) v = hit(rng) ? on : off;
  return m;
}

template <auto Fn>
void BM_render(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto blobs = random_blobs(100, side, side);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(blobs, 2.0, side, side));
}

template <auto Fn>
void BM_dilate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto mask = random_mask(side, side, 0.02, 255, 0);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(mask, side, side, 3));
}

template <auto Fn>
void BM_edt(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto g = random_mask(side, side, 0.01, density::kOccupied, density::kFree);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, side, side));
}

template <auto Fn>
void BM_sample(benchmark::State& state) {
  world::PipelineConfig cfg;
  world::FramePose pose;
  pose.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ()));
  pose.translation = -(pose.rotation.toRotationMatrix() * Eigen::Vector3d(10, 12, 9));
  const auto w2c = geometry::compose(cfg.body_to_camera, pose.world_to_body());
  const auto grid = geometry::grid_footprint(cfg.camera, w2c, cfg.plane, 0.1, 1.0);
  density::OccupancyGrid o(cfg.camera.width, cfg.camera.height, density::kFree);
  o.values = random_mask(o.width, o.height, 0.3, density::kOccupied, density::kFree);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(o, grid, w2c, cfg.camera, 1.7));
}

template <auto Fn>
void BM_extract(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  geometry::PlaneGrid grid(0.0, 0.0, 0.1, side, side, density::kFree);
  grid.values = random_mask(side, side, 0.003, density::kOccupied, density::kFree);
  const zones::SlzConfig cfg{10, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(grid, cfg, 0));
}

}  // namespace

BENCHMARK(BM_render<kernels::serial::render_blobs>)->Name("render_blobs/serial")->Arg(256);
BENCHMARK(BM_render<kernels::parallel::render_blobs>)->Name("render_blobs/parallel")->Arg(256);
BENCHMARK(BM_dilate<kernels::serial::dilate_box>)->Name("dilate_box/serial")->Arg(256)->Arg(512);
BENCHMARK(BM_dilate<kernels::parallel::dilate_box>)->Name("dilate_box/parallel")->Arg(256)->Arg(512);
BENCHMARK(BM_sample<kernels::serial::sample_plane>)->Name("sample_plane/serial");
BENCHMARK(BM_sample<kernels::parallel::sample_plane>)->Name("sample_plane/parallel");
BENCHMARK(BM_edt<kernels::serial::edt_squared>)->Name("edt/serial")->Arg(300)->Arg(600);
BENCHMARK(BM_edt<kernels::parallel::edt_squared>)->Name("edt/parallel")->Arg(300)->Arg(600);
BENCHMARK(BM_extract<zones::reference::extract_slz>)->Name("extract_slz/reference")->Arg(300);
BENCHMARK(BM_extract<zones::extract_slz>)->Name("extract_slz/incremental")->Arg(300);

BENCHMARK_MAIN();
