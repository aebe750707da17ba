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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "segaug/error.hpp"
#include "segaug/kfc.hpp"
#include "segaug/sampling.hpp"

using namespace segaug;
using namespace segaug::testing;

namespace
{

std::vector<Frame> frames_of(std::vector<RgbImage> images, int first_index = 0)
{
  std::vector<Frame> out;
  for (auto & img : images) out.push_back({first_index++, std::move(img), {}});
  return out;
}

RgbImage cell(const RgbImage & grid, int r, int k, int h, int w)
{
  RgbImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < 3; ++ch) out.at(y, x, ch) = grid.at(r * h + y, k * w + x, ch);
  return out;
}

}  // namespace

TEST_CASE("tile_grid: four coloured frames fill the quadrants row-major")
{
  const auto frames = frames_of({constant_image(2, 2, 255, 0, 0), constant_image(2, 2, 0, 255, 0),
                                 constant_image(2, 2, 0, 0, 255), constant_image(2, 2, 255, 255, 255)});
  const RgbImage grid = tile_grid(frames, 2);
  REQUIRE(grid.width == 4);
  REQUIRE(grid.height == 4);
  CHECK(cell(grid, 0, 0, 2, 2) == constant_image(2, 2, 255, 0, 0));
  CHECK(cell(grid, 0, 1, 2, 2) == constant_image(2, 2, 0, 255, 0));
  CHECK(cell(grid, 1, 0, 2, 2) == constant_image(2, 2, 0, 0, 255));
  CHECK(cell(grid, 1, 1, 2, 2) == constant_image(2, 2, 255, 255, 255));
}

TEST_CASE("tile_grid: shapes and identity")
{
  std::mt19937_64 rng(1);
  std::vector<RgbImage> nine;
  for (int i = 0; i < 9; ++i) nine.push_back(random_image(rng, 5, 3));
  const RgbImage g3 = tile_grid(frames_of(nine), 3);
  CHECK(g3.width == 15);
  CHECK(g3.height == 9);

  const RgbImage one = random_image(rng, 4, 7);
  CHECK(tile_grid(frames_of({one}), 1) == one);
}

TEST_CASE("tile_grid: wrong count or mismatched sizes are rejected")
{
  std::mt19937_64 rng(2);
  CHECK_THROWS_AS(tile_grid(frames_of({random_image(rng, 2, 2)}), 2), ValidationError);
  CHECK_THROWS_AS(
    tile_grid(frames_of({random_image(rng, 2, 2), random_image(rng, 2, 2), random_image(rng, 2, 2),
                         random_image(rng, 3, 2)}),
              2),
    ValidationError);
}

TEST_CASE("tile_grid: every cell round-trips bit-exactly")
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int g = 1 + trial % 3;
    std::vector<RgbImage> imgs;
    for (int i = 0; i < g * g; ++i) imgs.push_back(random_image(rng, 6, 4));
    const RgbImage grid = tile_grid(frames_of(imgs), g);
    for (int r = 0; r < g; ++r)
      for (int k = 0; k < g; ++k) CHECK(cell(grid, r, k, 4, 6) == imgs[r * g + k]);
  }
}

TEST_CASE("resize_to: constants stay constant")
{
  const RgbImage c = constant_image(4, 4, 17, 99, 200);
  CHECK(resize_to(c, 2, 2) == constant_image(2, 2, 17, 99, 200));
  CHECK(resize_to(constant_image(5, 5, 42, 42, 42), 2, 2) == constant_image(2, 2, 42, 42, 42));
  CHECK(resize_to(constant_image(3, 3, 7, 8, 9), 5, 4) == constant_image(4, 5, 7, 8, 9));
}

TEST_CASE("resize_to: a quadrant grid shrinks to its block constants")
{
  const auto frames = frames_of({constant_image(2, 2, 255, 0, 0), constant_image(2, 2, 0, 255, 0),
                                 constant_image(2, 2, 0, 0, 255), constant_image(2, 2, 255, 255, 255)});
  const RgbImage small = resize_to(tile_grid(frames, 2), 2, 2);
  CHECK(small == oracle::box_downscale(tile_grid(frames, 2), 2, 2));
  CHECK(small.at(0, 0, 0) == 255);
  CHECK(small.at(0, 1, 1) == 255);
  CHECK(small.at(1, 0, 2) == 255);
  CHECK(small.at(1, 1, 0) == 255);
  CHECK(small.at(1, 1, 1) == 255);
}

TEST_CASE("resize_to: 3x3 blocks with k bright pixels average to round(255k/9)")
{
  RgbImage img(6, 6);
  const int counts[2][2] = {{0, 1}, {4, 9}};
  for (int by = 0; by < 2; ++by) {
    for (int bx = 0; bx < 2; ++bx) {
      for (int k = 0; k < counts[by][bx]; ++k) {
        const int y = by * 3 + k / 3;
        const int x = bx * 3 + k % 3;
        for (int ch = 0; ch < 3; ++ch) img.at(y, x, ch) = 255;
      }
    }
  }
  const RgbImage out = resize_to(img, 2, 2);
  CHECK(out == oracle::box_downscale(img, 2, 2));
  for (int by = 0; by < 2; ++by) {
    for (int bx = 0; bx < 2; ++bx) {
      const int expected = static_cast<int>(std::floor(255.0 * counts[by][bx] / 9.0 + 0.5));
      CHECK(out.at(by, bx, 0) == expected);
    }
  }
  CHECK(out.at(0, 1, 0) == 28);
  CHECK(out.at(1, 0, 0) == 113);
}

TEST_CASE("resize_to: integer factors match the box oracle, mean preserved within 1")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int g = 1 + trial % 3;
    const int h = 2 + trial % 5;
    const int w = 3 + trial % 4;
    const RgbImage src = random_image(rng, w * g, h * g);
    const RgbImage out = resize_to(src, h, w);
    CHECK(out == oracle::box_downscale(src, h, w));

    for (int ch = 0; ch < 3; ++ch) {
      double in_mean = 0;
      double out_mean = 0;
      for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) in_mean += src.at(y, x, ch);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out_mean += out.at(y, x, ch);
      in_mean /= src.height * src.width;
      out_mean /= h * w;
      CHECK(std::fabs(in_mean - out_mean) <= 1.0);
    }
  }
}

TEST_CASE("resize_to: non-integer factors stay within the source range")
{
  std::mt19937_64 rng(5);
  const RgbImage src = random_image(rng, 7, 5);
  const RgbImage out = resize_to(src, 3, 4);
  CHECK(out.width == 4);
  CHECK(out.height == 3);
  CHECK_THROWS_AS(resize_to(src, 0, 3), ValidationError);
}

TEST_CASE("compress_clip: clip length picks the grid")
{
  std::mt19937_64 rng(6);
  std::vector<RgbImage> five;
  for (int i = 0; i < 5; ++i) five.push_back(random_image(rng, 8, 6));
  const auto clip5 = frames_of(five, 20);
  const CompressedClip c5 = compress_clip(clip5, ClipGeometry::from_clip_len(5).grid());
  CHECK(ClipGeometry::from_clip_len(5).grid() == 2);
  CHECK(c5.key_frame.index == 20);
  CHECK(c5.key_frame.image == five[0]);
  CHECK(c5.source_indices == std::vector<int>{21, 22, 23, 24});
  const std::vector<Frame> rest(clip5.begin() + 1, clip5.end());
  CHECK(c5.compressed.image == oracle::box_downscale(tile_grid(rest, 2), 6, 8));

  std::vector<RgbImage> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(random_image(rng, 9, 6));
  const CompressedClip c10 = compress_clip(frames_of(ten), ClipGeometry::from_clip_len(10).grid());
  CHECK(ClipGeometry::from_clip_len(10).grid() == 3);
  CHECK(c10.source_indices.size() == 9);
  CHECK(c10.compressed.image.width == 9);
  CHECK(c10.compressed.image.height == 6);

  const auto two = frames_of({random_image(rng, 4, 4), random_image(rng, 4, 4)});
  CHECK(compress_clip(two, 1).compressed.image == two[1].image);

  CHECK_THROWS_AS(compress_clip(two, 2), ValidationError);
}

TEST_CASE("compress_plan: one compressed clip per planned clip")
{
  const VideoMeta meta = make_meta(23);
  const SamplingPlan plan = plan_uniform(meta, 2, 5);
  const auto clips = compress_plan(plan, [](int i) { return Frame{i, synthetic_frame(i, 8, 6), {}}; });
  REQUIRE(clips.size() == 2);
  for (std::size_t k = 0; k < clips.size(); ++k) {
    CHECK(clips[k].key_frame.index == plan.clips[k].members[0]);
    const std::vector<int> rest(plan.clips[k].members.begin() + 1, plan.clips[k].members.end());
    CHECK(clips[k].source_indices == rest);
    CHECK(clips[k].compressed.image.width == 8);
    CHECK(clips[k].compressed.image.height == 6);
  }
}
