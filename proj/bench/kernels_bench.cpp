// Serial reference loops against the OpenMP kernels on the room scene.

#include <filesystem>

#include <benchmark/benchmark.h>

#include "sdftrack/losses.hpp"
#include "sdftrack/rendering.hpp"
#include "sdftrack/sampling.hpp"
#include "sdftrack/scene_file.hpp"
#include "sdftrack/synth.hpp"

using namespace sdftrack;

namespace {

struct Room {
  FieldPtr field = load_scene(std::filesystem::path(SDFTRACK_SOURCE_DIR) / "scenes" / "room.txt").build_field();
  Intrinsics k = intrinsics_from_fov(64, 48, 60.0);
  Pose pose = look_at(Vec3(1.0, 0.0, 0.3), Vec3::Zero(), Vec3::UnitZ());
  RgbdFrame frame = render_frame(*field, pose, k, RenderParams{});
  Pose offset{pose.t + Vec3(0.01, -0.005, 0.003), pose.q};
};

const Room& room() {
  static const Room r;
  return r;
}

void BM_RenderFrame(benchmark::State& state) {
  const Room& r = room();
  for (auto _ : state) benchmark::DoNotOptimize(render_frame(*r.field, r.pose, r.k, RenderParams{}));
}

void BM_RenderFrameReference(benchmark::State& state) {
  const Room& r = room();
  for (auto _ : state) benchmark::DoNotOptimize(reference::render_frame(*r.field, r.pose, r.k, RenderParams{}));
}

std::vector<PointSample> points(int n) {
  const Room& r = room();
  Rng rng(1);
  return build_point_set(r.frame, r.k, sample_pixels(r.frame, n, rng));
}

void BM_SdfLoss(benchmark::State& state) {
  const Room& r = room();
  const auto pts = points(static_cast<int>(state.range(0)));
  const TrackerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(sdf_loss(*r.field, r.offset, pts, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SdfLossReference(benchmark::State& state) {
  const Room& r = room();
  const auto pts = points(static_cast<int>(state.range(0)));
  const TrackerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(reference::sdf_loss(*r.field, r.offset, pts, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct VrInputs {
  std::vector<PixelCoord> pixels;
  std::vector<double> offsets;
};

VrInputs vr_inputs(int m, const TrackerConfig& cfg) {
  const Room& r = room();
  Rng rng(2);
  VrInputs in;
  in.pixels = sample_pixels(r.frame, m, rng);
  in.offsets = draw_vr_offsets(in.pixels.size(), cfg.vr.render, rng);
  return in;
}

void BM_VrLoss(benchmark::State& state) {
  const Room& r = room();
  const TrackerConfig cfg;
  const VrInputs in = vr_inputs(static_cast<int>(state.range(0)), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(vr_loss(*r.field, r.offset, r.k, r.frame, in.pixels, cfg, in.offsets));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VrLossReference(benchmark::State& state) {
  const Room& r = room();
  const TrackerConfig cfg;
  const VrInputs in = vr_inputs(static_cast<int>(state.range(0)), cfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::vr_loss(*r.field, r.offset, r.k, r.frame, in.pixels, cfg, in.offsets));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RenderFrame)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderFrameReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SdfLoss)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SdfLossReference)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VrLoss)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VrLossReference)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
