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

#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "segaug/mask_io.hpp"
#include "segaug/segmenter.hpp"
#include "segaug/types.hpp"

namespace segaug::testing
{

inline VideoMeta make_meta(int num_frames, int width = 8, int height = 6, std::string id = "vid")
{
  VideoMeta m;
  m.video_id = std::move(id);
  m.num_frames = num_frames;
  m.width = width;
  m.height = height;
  for (int i = 0; i < num_frames; ++i) m.frame_uris.push_back("frames/" + frame_file_name(i));
  return m;
}

inline BinaryMask random_mask(std::mt19937_64 & rng, int w, int h, double density = 0.5)
{
  std::bernoulli_distribution bit(density);
  BinaryMask m(w, h);
  for (auto & b : m.bits) b = bit(rng) ? 1 : 0;
  return m;
}

/// Random blob-like mask: union of a few rectangles, so boundaries are realistic.
inline BinaryMask random_blobs(std::mt19937_64 & rng, int w, int h)
{
  BinaryMask m(w, h);
  std::uniform_int_distribution<int> count(0, 3);
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    std::uniform_int_distribution<int> xs(0, w - 1);
    std::uniform_int_distribution<int> ys(0, h - 1);
    int x0 = xs(rng), x1 = xs(rng), y0 = ys(rng), y1 = ys(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) m.at(y, x) = 1;
  }
  return m;
}

inline RgbImage random_image(std::mt19937_64 & rng, int w, int h)
{
  std::uniform_int_distribution<int> v(0, 255);
  RgbImage img(w, h);
  for (auto & p : img.pixels) p = static_cast<std::uint8_t>(v(rng));
  return img;
}

inline RgbImage constant_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(y, x, 0) = r;
      img.at(y, x, 1) = g;
      img.at(y, x, 2) = b;
    }
  }
  return img;
}

/// Deterministic synthetic frame: a gradient with the index stamped into it.
inline RgbImage synthetic_frame(int index, int w, int h)
{
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(y, x, 0) = static_cast<std::uint8_t>((x * 255) / std::max(1, w - 1));
      img.at(y, x, 1) = static_cast<std::uint8_t>((y * 255) / std::max(1, h - 1));
      img.at(y, x, 2) = static_cast<std::uint8_t>((index * 37) % 256);
    }
  }
  return img;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  explicit TempDir(const std::string & tag = "segaug")
  {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Writes synthetic PNG frames for each video and returns a manifest for them.
struct FixtureVideo
{
  std::string video_id;
  int num_frames;
  std::vector<Expression> expressions;
};

inline Manifest write_fixture(
  const std::filesystem::path & root, const std::vector<FixtureVideo> & videos, int width = 32,
  int height = 24)
{
  Manifest manifest;
  manifest.base_dir = root;
  for (const FixtureVideo & v : videos) {
    ManifestVideo mv;
    mv.meta.video_id = v.video_id;
    mv.meta.num_frames = v.num_frames;
    mv.meta.width = width;
    mv.meta.height = height;
    for (int i = 0; i < v.num_frames; ++i) {
      const std::string rel = "frames/" + v.video_id + "/" + frame_file_name(i);
      write_rgb_png(root / rel, synthetic_frame(i, width, height));
      mv.meta.frame_uris.push_back(rel);
    }
    mv.expressions = v.expressions;
    manifest.videos.push_back(std::move(mv));
  }
  save_manifest(root / "manifest.json", manifest);
  return manifest;
}

/// Ground truth the stub backend is built around, as a prediction directory.
inline void write_stub_ground_truth(const std::filesystem::path & dir, const Manifest & manifest)
{
  PredictionSource gt;
  gt.source_id = "gt";
  for (const ManifestVideo & v : manifest.videos) {
    for (const Expression & e : v.expressions) {
      auto & seq = gt.masks[v.meta.video_id][e.exp_id];
      const StreamContext ctx{v.meta.video_id, e.exp_id, e.text};
      for (int f = 0; f < v.meta.num_frames; ++f) {
        seq.push_back(stub_ground_truth(ctx, f, v.meta.width, v.meta.height));
      }
    }
  }
  write_prediction_source(dir, gt);
}

}  // namespace segaug::testing
