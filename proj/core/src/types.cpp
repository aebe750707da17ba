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

#include "segaug/types.hpp"

#include <cmath>
#include <sstream>

#include "segaug/error.hpp"

namespace segaug
{

RgbImage::RgbImage(int w, int h)
: width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0)
{
}

BinaryMask::BinaryMask(int w, int h)
: width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0)
{
}

SoftMask::SoftMask(int w, int h)
: width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0F)
{
}

BinaryMask binarize(const SoftMask & soft, float threshold)
{
  BinaryMask out(soft.width, soft.height);
  for (std::size_t i = 0; i < soft.values.size(); ++i) {
    out.bits[i] = soft.values[i] >= threshold ? 1 : 0;
  }
  return out;
}

void check_soft_mask(const SoftMask & soft)
{
  if (soft.values.size() != static_cast<std::size_t>(soft.width) * soft.height) {
    throw ValidationError("soft mask buffer does not match its dimensions");
  }
  for (float v : soft.values) {
    if (!std::isfinite(v) || v < 0.0F || v > 1.0F) {
      throw ValidationError("soft mask value outside [0,1]");
    }
  }
}

void validate_meta(const VideoMeta & meta)
{
  if (meta.video_id.empty()) {
    throw ValidationError("video_id must not be empty");
  }
  if (meta.num_frames < 1) {
    throw ValidationError("video '" + meta.video_id + "': T_ori must be positive");
  }
  if (meta.width < 1 || meta.height < 1) {
    throw ValidationError("video '" + meta.video_id + "': width and height must be >= 1");
  }
  if (meta.frame_uris.size() != static_cast<std::size_t>(meta.num_frames)) {
    throw ValidationError(
      "video '" + meta.video_id + "': frame list length " +
      std::to_string(meta.frame_uris.size()) + " != T_ori " + std::to_string(meta.num_frames));
  }
}

std::string_view to_string(Strategy s)
{
  switch (s) {
    case Strategy::Uniform:
      return "uniform";
    case Strategy::UniformPlus:
      return "uniform_plus";
    case Strategy::QFrame:
      return "qframe";
    case Strategy::WrapAround:
      return "wrap_around";
    case Strategy::WrapAroundPlus:
      return "wrap_around_plus";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name)
{
  for (Strategy s : kAllStrategies) {
    if (name == to_string(s)) {
      return s;
    }
  }
  if (name == "uniform+") return Strategy::UniformPlus;
  if (name == "wrap_around+") return Strategy::WrapAroundPlus;
  if (name == "q_frame") return Strategy::QFrame;
  return std::nullopt;
}

ClipGeometry ClipGeometry::from_clip_len(int clip_len)
{
  if (clip_len >= 2) {
    int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(clip_len - 1))));
    if (g >= 1 && g * g + 1 == clip_len) {
      return ClipGeometry(clip_len, g);
    }
  }
  throw ValidationError(
    "clip length " + std::to_string(clip_len) + " is not of the form g*g+1 with g >= 1");
}

ClipGeometry ClipGeometry::from_grid(int grid)
{
  if (grid < 1) {
    throw ValidationError("grid side must be >= 1");
  }
  return ClipGeometry(grid * grid + 1, grid);
}

namespace
{

bool may_carry_two_tokens(const SamplingPlan & plan, int num_frames)
{
  return (plan.strategy == Strategy::UniformPlus || plan.strategy == Strategy::QFrame) &&
         num_frames < plan.budget;
}

}  // namespace

std::vector<std::string> validate_plan(const SamplingPlan & plan, const VideoMeta & meta)
{
  std::vector<std::string> out;
  auto add = [&out](const std::string & msg) { out.push_back(msg); };

  if (plan.grid < 1 || plan.clip_len != plan.grid * plan.grid + 1) {
    add(
      "c != g^2+1 (c=" + std::to_string(plan.clip_len) + ", g=" + std::to_string(plan.grid) + ")");
  }
  if (plan.num_clips < 1) {
    add("N must be >= 1");
  }
  if (plan.budget != plan.num_clips * plan.clip_len) {
    add("T != N*c (T=" + std::to_string(plan.budget) + ")");
  }
  if (plan.num_frames != meta.num_frames) {
    add(
      "plan built for T_ori=" + std::to_string(plan.num_frames) + " but video has " +
      std::to_string(meta.num_frames));
  }
  if (plan.clips.size() != static_cast<std::size_t>(std::max(plan.num_clips, 0))) {
    add("expected " + std::to_string(plan.num_clips) + " clips, got " +
        std::to_string(plan.clips.size()));
  }

  for (std::size_t i = 0; i < plan.clips.size(); ++i) {
    const ClipSpec & clip = plan.clips[i];
    const std::string tag = "clip " + std::to_string(i) + ": ";
    if (clip.clip_index != static_cast<int>(i)) {
      add(tag + "clip_index " + std::to_string(clip.clip_index) + " out of order");
    }
    if (clip.members.size() != static_cast<std::size_t>(std::max(plan.clip_len, 0))) {
      add(tag + "has " + std::to_string(clip.members.size()) + " members, expected c=" +
          std::to_string(plan.clip_len));
    }
    for (std::size_t k = 0; k < clip.members.size(); ++k) {
      int m = clip.members[k];
      if (m < 0 || m >= meta.num_frames) {
        add(tag + "member " + std::to_string(m) + " outside [0, T_ori)");
      }
      if (k > 0 && m < clip.members[k - 1]) {
        add(tag + "members decrease at position " + std::to_string(k));
      }
    }
  }

  const bool dual_ok = may_carry_two_tokens(plan, meta.num_frames);
  if (plan.frame_tokens.size() != static_cast<std::size_t>(std::max(meta.num_frames, 0))) {
    add("frame_token_map has " + std::to_string(plan.frame_tokens.size()) +
        " entries, expected T_ori=" + std::to_string(meta.num_frames));
  }
  for (std::size_t f = 0; f < plan.frame_tokens.size(); ++f) {
    const auto & tokens = plan.frame_tokens[f];
    const std::string tag = "frame " + std::to_string(f) + ": ";
    if (tokens.empty()) {
      add(tag + "not covered by any [SEG] token");
      continue;
    }
    if (tokens.size() > 2) {
      add(tag + "maps to more than 2 tokens");
    } else if (tokens.size() == 2 && !dual_ok) {
      add(tag + "maps to 2 tokens but strategy " + std::string(to_string(plan.strategy)) +
          " allows exactly 1 here");
    }
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k] < 0 || tokens[k] >= plan.num_clips) {
        add(tag + "token " + std::to_string(tokens[k]) + " outside [0, N)");
      }
      if (k > 0 && tokens[k] != tokens[k - 1] + 1) {
        add(tag + "token indices are not adjacent");
      }
    }
  }

  if (plan.tail_propagation &&
      !(plan.strategy == Strategy::WrapAround && meta.num_frames > plan.budget)) {
    add("tail_propagation set but the plan is not a wrap-around plan with T_ori > T");
  }
  return out;
}

void validate_weights(const WeightConfig & config)
{
  bool any_positive = false;
  for (const auto & [id, w] : config.entries) {
    if (id.empty()) {
      throw ValidationError("weight config: empty source id");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("weight config: source '" + id + "' has invalid weight");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw ValidationError("weight config: at least one source needs a positive weight");
  }
  if (!std::isfinite(config.threshold) || config.threshold <= 0.0 || config.threshold >= 1.0) {
    throw ValidationError("weight config: threshold must lie in (0,1)");
  }
}

}  // namespace segaug
