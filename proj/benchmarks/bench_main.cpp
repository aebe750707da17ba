// Copyright 2026 The segaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "segaug/ensemble.hpp"
#include "segaug/kfc.hpp"
#include "segaug/metrics.hpp"
#include "segaug/sampling.hpp"

namespace
{

segaug::BinaryMask noisy_disk(std::mt19937_64 & rng, int w, int h)
{
  segaug::BinaryMask m(w, h);
  const int cx = static_cast<int>(rng() % w);
  const int cy = static_cast<int>(rng() % h);
  const int r = std::min(w, h) / 4;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.at(y, x) = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
  return m;
}

segaug::VideoMeta meta_of(int frames)
{
  segaug::VideoMeta meta;
  meta.video_id = "bench";
  meta.num_frames = frames;
  meta.width = 64;
  meta.height = 64;
  meta.frame_uris.assign(static_cast<std::size_t>(frames), "f.png");
  return meta;
}

void BM_SelectiveAverage(benchmark::State & state)
{
  std::mt19937_64 rng(1);
  const int side = static_cast<int>(state.range(0));
  std::vector<segaug::BinaryMask> masks;
  for (int i = 0; i < 15; ++i) masks.push_back(noisy_disk(rng, side, side));
  std::vector<segaug::WeightedMask> in;
  for (std::size_t i = 0; i < masks.size(); ++i) in.push_back({&masks[i], i % 2 ? 1.5 : 2.5});
  for (auto _ : state) benchmark::DoNotOptimize(segaug::selective_average(in));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_SelectiveAverage)->Arg(256)->Arg(720);

void BM_BoundaryF(benchmark::State & state)
{
  std::mt19937_64 rng(2);
  const int side = static_cast<int>(state.range(0));
  const segaug::BinaryMask a = noisy_disk(rng, side, side);
  const segaug::BinaryMask b = noisy_disk(rng, side, side);
  const int tol = segaug::ToleranceRule{}.pixels(side, side);
  for (auto _ : state) benchmark::DoNotOptimize(segaug::boundary_f(a, b, tol));
}
BENCHMARK(BM_BoundaryF)->Arg(256)->Arg(720);

void BM_PlanAllStrategies(benchmark::State & state)
{
  const segaug::VideoMeta meta = meta_of(static_cast<int>(state.range(0)));
  std::vector<double> scores(static_cast<std::size_t>(meta.num_frames));
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = static_cast<double>((i * 37) % 101);
  for (auto _ : state) {
    for (segaug::Strategy s : segaug::kAllStrategies) {
      benchmark::DoNotOptimize(segaug::make_plan(s, meta, 10, 10, scores));
    }
  }
}
BENCHMARK(BM_PlanAllStrategies)->Arg(30)->Arg(300);

void BM_CompressClip(benchmark::State & state)
{
  std::mt19937_64 rng(3);
  const int grid = static_cast<int>(state.range(0));
  std::vector<segaug::Frame> frames;
  for (int i = 0; i < grid * grid + 1; ++i) {
    segaug::RgbImage img(320, 180);
    for (auto & p : img.pixels) p = static_cast<std::uint8_t>(rng());
    frames.push_back({i, std::move(img), {}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(segaug::compress_clip(frames, grid));
}
BENCHMARK(BM_CompressClip)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
