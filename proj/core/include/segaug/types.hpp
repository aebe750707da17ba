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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace segaug
{

/// Interleaved 8-bit RGB raster, row-major.
struct RgbImage
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h);

  std::uint8_t & at(int y, int x, int ch) { return pixels[offset(y, x) + ch]; }
  std::uint8_t at(int y, int x, int ch) const { return pixels[offset(y, x) + ch]; }

  bool operator==(const RgbImage &) const = default;

private:
  std::size_t offset(int y, int x) const
  {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

/// One video frame together with its original temporal index (0-based).
/// `uri` is the on-disk location when the frame came from a manifest.
struct Frame
{
  int index = 0;
  RgbImage image;
  std::string uri;
};

/// H x W mask with values in {0,1}.
struct BinaryMask
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h);

  std::uint8_t & at(int y, int x) { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int y, int x) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return bits.size(); }

  bool operator==(const BinaryMask &) const = default;
};

/// H x W mask with values in [0,1].
struct SoftMask
{
  int width = 0;
  int height = 0;
  std::vector<float> values;

  SoftMask() = default;
  SoftMask(int w, int h);

  float & at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  float at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const SoftMask &) const = default;
};

/// Binarize at `value >= threshold`.
BinaryMask binarize(const SoftMask & soft, float threshold = 0.5F);

/// Throws ValidationError when any value lies outside [0,1] or is not finite.
void check_soft_mask(const SoftMask & soft);

struct VideoMeta
{
  std::string video_id;
  int num_frames = 0;  // T_ori
  int width = 0;
  int height = 0;
  std::vector<std::string> frame_uris;

  bool operator==(const VideoMeta &) const = default;
};

/// Throws ValidationError if the meta's invariants do not hold.
void validate_meta(const VideoMeta & meta);

enum class Strategy
{
  Uniform,
  UniformPlus,
  QFrame,
  WrapAround,
  WrapAroundPlus,
};

inline constexpr Strategy kAllStrategies[] = {
  Strategy::Uniform, Strategy::UniformPlus, Strategy::QFrame, Strategy::WrapAround,
  Strategy::WrapAroundPlus};

/// Canonical names: uniform, uniform_plus, qframe, wrap_around, wrap_around_plus.
std::string_view to_string(Strategy s);

/// Accepts canonical names plus "uniform+" and "wrap_around+" spellings.
std::optional<Strategy> parse_strategy(std::string_view name);

/// Clip length c together with its grid side g, where c = g*g + 1.
class ClipGeometry
{
public:
  /// Throws ValidationError unless c = g*g + 1 for an integer g >= 1.
  static ClipGeometry from_clip_len(int clip_len);
  static ClipGeometry from_grid(int grid);

  int clip_len() const { return clip_len_; }
  int grid() const { return grid_; }

private:
  ClipGeometry(int clip_len, int grid) : clip_len_(clip_len), grid_(grid) {}
  int clip_len_;
  int grid_;
};

struct ClipSpec
{
  int clip_index = 0;
  std::vector<int> members;  // original frame indices, members[0] is the key frame

  int key_index() const { return members.empty() ? -1 : members.front(); }

  bool operator==(const ClipSpec &) const = default;
};

struct SamplingPlan
{
  Strategy strategy = Strategy::Uniform;
  int num_clips = 0;  // N
  int clip_len = 0;   // c
  int grid = 0;       // g
  int budget = 0;     // T = N * c
  int num_frames = 0; // T_ori the plan was built for
  std::vector<ClipSpec> clips;
  // frame_tokens[f] lists the clip indices whose prompt decodes frame f.
  std::vector<std::vector<int>> frame_tokens;
  bool tail_propagation = false;

  bool operator==(const SamplingPlan &) const = default;
};

/// Returns a human-readable list of invariant violations; empty iff the plan is valid for `meta`.
std::vector<std::string> validate_plan(const SamplingPlan & plan, const VideoMeta & meta);

/// Per-(video, expression) ordered mask sequences.
using MaskSet = std::map<std::string, std::map<std::string, std::vector<BinaryMask>>>;

/// Predictions of one (model, strategy) pair.
struct PredictionSource
{
  std::string source_id;
  MaskSet masks;
  double weight = 1.0;

  bool operator==(const PredictionSource &) const = default;
};

struct WeightConfig
{
  std::map<std::string, double> entries;
  double threshold = 0.5;
};

/// Throws ValidationError: negative or non-finite weights, no positive weight,
/// threshold outside (0,1).
void validate_weights(const WeightConfig & config);

}  // namespace segaug
