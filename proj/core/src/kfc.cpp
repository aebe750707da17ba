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

#include "segaug/kfc.hpp"

#include <algorithm>
#include <cstdint>

#include "segaug/error.hpp"

namespace segaug
{

RgbImage tile_grid(std::span<const Frame> frames, int grid)
{
  if (grid < 1) {
    throw ValidationError("grid side must be >= 1");
  }
  const auto expected = static_cast<std::size_t>(grid) * grid;
  if (frames.size() != expected) {
    throw ValidationError(
      "tile_grid: expected " + std::to_string(expected) + " frames, got " +
      std::to_string(frames.size()));
  }
  const int h = frames.front().image.height;
  const int w = frames.front().image.width;
  if (h < 1 || w < 1) {
    throw ValidationError("tile_grid: empty frame");
  }
  for (const Frame & f : frames) {
    if (f.image.height != h || f.image.width != w ||
        f.image.pixels.size() != static_cast<std::size_t>(w) * h * 3) {
      throw ValidationError(
        "tile_grid: frame " + std::to_string(f.index) + " does not match " + std::to_string(w) +
        "x" + std::to_string(h));
    }
  }

  RgbImage out(w * grid, h * grid);
  const auto row_bytes = static_cast<std::size_t>(w) * 3;
  for (int r = 0; r < grid; ++r) {
    for (int k = 0; k < grid; ++k) {
      const RgbImage & cell = frames[static_cast<std::size_t>(r) * grid + k].image;
      for (int y = 0; y < h; ++y) {
        std::copy_n(
          cell.pixels.begin() + static_cast<std::ptrdiff_t>(y * row_bytes), row_bytes,
          out.pixels.begin() +
            static_cast<std::ptrdiff_t>(
              (static_cast<std::size_t>(r * h + y) * out.width + k * w) * 3));
      }
    }
  }
  return out;
}

RgbImage resize_to(const RgbImage & src, int height, int width)
{
  if (height < 1 || width < 1) {
    throw ValidationError("resize_to: target dimensions must be positive");
  }
  if (src.height < 1 || src.width < 1) {
    throw ValidationError("resize_to: empty source raster");
  }
  if (src.height == height && src.width == width) {
    return src;
  }

  // Work in units where a source pixel spans (height x width) and an output
  // pixel spans (src.height x src.width); overlaps are then exact integers.
  struct Span
  {
    int first;
    std::vector<std::int64_t> weights;
  };
  auto spans = [](int src_len, int dst_len) {
    std::vector<Span> out(static_cast<std::size_t>(dst_len));
    for (int o = 0; o < dst_len; ++o) {
      const std::int64_t lo = static_cast<std::int64_t>(o) * src_len;
      const std::int64_t hi = lo + src_len;
      Span s;
      s.first = static_cast<int>(lo / dst_len);
      for (std::int64_t i = s.first; i * dst_len < hi; ++i) {
        const std::int64_t a = std::max(lo, i * dst_len);
        const std::int64_t b = std::min(hi, (i + 1) * dst_len);
        s.weights.push_back(b - a);
      }
      out[o] = std::move(s);
    }
    return out;
  };
  const std::vector<Span> ys = spans(src.height, height);
  const std::vector<Span> xs = spans(src.width, width);
  const std::int64_t total = static_cast<std::int64_t>(src.height) * src.width;

  RgbImage out(width, height);
  for (int oy = 0; oy < height; ++oy) {
    const Span & sy = ys[oy];
    for (int ox = 0; ox < width; ++ox) {
      const Span & sx = xs[ox];
      std::int64_t acc[3] = {0, 0, 0};
      for (std::size_t dy = 0; dy < sy.weights.size(); ++dy) {
        const int y = sy.first + static_cast<int>(dy);
        for (std::size_t dx = 0; dx < sx.weights.size(); ++dx) {
          const int x = sx.first + static_cast<int>(dx);
          const std::int64_t wgt = sy.weights[dy] * sx.weights[dx];
          for (int ch = 0; ch < 3; ++ch) acc[ch] += wgt * src.at(y, x, ch);
        }
      }
      for (int ch = 0; ch < 3; ++ch) {
        out.at(oy, ox, ch) = static_cast<std::uint8_t>((2 * acc[ch] + total) / (2 * total));
      }
    }
  }
  return out;
}

CompressedClip compress_clip(std::span<const Frame> clip_frames, int grid)
{
  const ClipGeometry geom = ClipGeometry::from_grid(grid);
  if (clip_frames.size() != static_cast<std::size_t>(geom.clip_len())) {
    throw ValidationError(
      "compress_clip: expected c=" + std::to_string(geom.clip_len()) + " frames, got " +
      std::to_string(clip_frames.size()));
  }
  const Frame & key = clip_frames.front();
  const std::span<const Frame> rest = clip_frames.subspan(1);
  for (const Frame & f : rest) {
    if (f.image.width != key.image.width || f.image.height != key.image.height) {
      throw ValidationError(
        "compress_clip: frame " + std::to_string(f.index) + " differs in size from key frame " +
        std::to_string(key.index));
    }
  }

  CompressedClip out;
  out.key_frame = key;
  out.compressed.index = key.index;
  out.compressed.image = resize_to(tile_grid(rest, grid), key.image.height, key.image.width);
  for (const Frame & f : rest) out.source_indices.push_back(f.index);
  return out;
}

}  // namespace segaug
