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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "segaug/error.hpp"
#include "segaug/segmenter.hpp"

namespace segaug
{
namespace
{

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL)
{
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv_fields(std::initializer_list<std::string_view> fields)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (std::string_view f : fields) {
    h = fnv1a(f, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  return h;
}

std::uint64_t splitmix(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// k-th uniform draw in [0,1) from a seed.
double unit(std::uint64_t seed, int k)
{
  return static_cast<double>(splitmix(seed + static_cast<std::uint64_t>(k) * 0x632BE59BD9B4E019ULL) >> 11) *
         0x1.0p-53;
}

// Bounce `v` between lo and hi.
double reflect(double v, double lo, double hi)
{
  if (hi <= lo) return (lo + hi) / 2.0;
  const double span = hi - lo;
  double t = std::fmod(v - lo, 2.0 * span);
  if (t < 0) t += 2.0 * span;
  return lo + (t <= span ? t : 2.0 * span - t);
}

struct Disk
{
  double cx;
  double cy;
  double r;
};

Disk true_object(const StreamContext & ctx, int frame_index, int width, int height)
{
  const std::uint64_t h = fnv_fields({ctx.video_id, ctx.expression});
  const double r = std::min(width, height) * (0.12 + 0.12 * unit(h, 2));
  const double cx0 = width * (0.25 + 0.5 * unit(h, 0));
  const double cy0 = height * (0.25 + 0.5 * unit(h, 1));
  const double vx = (unit(h, 3) - 0.5) * 0.04 * width;
  const double vy = (unit(h, 4) - 0.5) * 0.04 * height;
  return {reflect(cx0 + vx * frame_index, r, width - r), reflect(cy0 + vy * frame_index, r, height - r), r};
}

SoftMask render(const Disk & d, int width, int height)
{
  SoftMask m(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - d.cx;
      const double dy = y + 0.5 - d.cy;
      const double v = d.r - std::sqrt(dx * dx + dy * dy) + 0.5;
      m.at(y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return m;
}

}  // namespace

StubBackend::StubBackend(std::uint64_t seed, std::string model_tag)
: seed_(seed), model_tag_(std::move(model_tag))
{
}

std::string StubBackend::identity() const
{
  return "stub:" + model_tag_ + "/seed=" + std::to_string(seed_);
}

std::string StubBackend::prompt_payload(const std::string & expression, int clip_index)
{
  char hex[17];
  std::snprintf(
    hex, sizeof hex, "%016llx",
    static_cast<unsigned long long>(fnv_fields({expression, std::to_string(clip_index)})));
  return hex;
}

std::vector<SegPrompt> StubBackend::generate(
  const StreamContext & ctx, std::span<const CompressedClip> clips)
{
  std::vector<SegPrompt> out;
  out.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    out.push_back({static_cast<int>(i), prompt_payload(ctx.expression, static_cast<int>(i))});
  }
  return out;
}

std::vector<SoftMask> StubBackend::decode(
  const StreamContext & ctx, std::span<const Frame> frames, const SegPrompt & prompt, bool)
{
  const std::uint64_t h = fnv_fields(
    {ctx.video_id, prompt.payload, std::to_string(prompt.clip_index), model_tag_,
     std::to_string(seed_)});
  std::vector<SoftMask> out;
  out.reserve(frames.size());
  for (const Frame & f : frames) {
    const int w = f.image.width;
    const int ht = f.image.height;
    Disk d = true_object(ctx, f.index, w, ht);
    d.cx += (unit(h, 0) - 0.5) * 0.1 * w;
    d.cy += (unit(h, 1) - 0.5) * 0.1 * ht;
    d.r *= 1.0 + (unit(h, 2) - 0.5) * 0.2;
    out.push_back(render(d, w, ht));
  }
  return out;
}

BinaryMask stub_ground_truth(const StreamContext & ctx, int frame_index, int width, int height)
{
  return binarize(render(true_object(ctx, frame_index, width, height), width, height));
}

}  // namespace segaug
