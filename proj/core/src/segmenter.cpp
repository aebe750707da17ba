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

#include <map>
#include <sstream>

#include "segaug/error.hpp"
#include "segaug/segmenter.hpp"

namespace segaug
{
namespace
{

std::string stream_tag(const StreamContext & ctx)
{
  return ctx.video_id + "/" + ctx.exp_id;
}

void require_valid_plan(const SamplingPlan & plan, const VideoMeta & meta, const StreamContext & ctx)
{
  const std::vector<std::string> violations = validate_plan(plan, meta);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << stream_tag(ctx) << ": invalid sampling plan:";
    for (const auto & v : violations) msg << "\n  " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

std::vector<SegPrompt> generate_prompts(
  SegmenterBackend & backend, std::span<const CompressedClip> compressed, const StreamContext & ctx)
{
  if (ctx.expression.empty()) {
    throw ValidationError(stream_tag(ctx) + ": referring expression must not be empty");
  }
  if (compressed.empty()) {
    throw ValidationError(stream_tag(ctx) + ": no clips to prompt");
  }
  std::vector<SegPrompt> prompts;
  try {
    prompts = backend.generate(ctx, compressed);
  } catch (const ValidationError &) {
    throw;
  } catch (const std::exception & e) {
    throw BackendError(stream_tag(ctx) + ": prompt generation failed: " + e.what());
  }
  if (prompts.size() != compressed.size()) {
    throw BackendError(
      stream_tag(ctx) + ": backend returned " + std::to_string(prompts.size()) + " prompts for " +
      std::to_string(compressed.size()) + " clips");
  }
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    if (prompts[i].clip_index != static_cast<int>(i)) {
      throw BackendError(
        stream_tag(ctx) + ": prompt " + std::to_string(i) + " carries clip_index " +
        std::to_string(prompts[i].clip_index));
    }
  }
  return prompts;
}

std::vector<SoftMask> decode_clip(
  SegmenterBackend & backend, const StreamContext & ctx, std::span<const Frame> frames,
  const SegPrompt & prompt, bool propagate)
{
  if (frames.empty()) return {};
  const int w = frames.front().image.width;
  const int h = frames.front().image.height;
  for (const Frame & f : frames) {
    if (f.image.width != w || f.image.height != h) {
      throw ValidationError(
        stream_tag(ctx) + ": frame " + std::to_string(f.index) + " is " +
        std::to_string(f.image.width) + "x" + std::to_string(f.image.height) + ", expected " +
        std::to_string(w) + "x" + std::to_string(h));
    }
  }

  const std::string where = stream_tag(ctx) + " clip " + std::to_string(prompt.clip_index) +
                            " frames " + std::to_string(frames.front().index) + ".." +
                            std::to_string(frames.back().index);
  std::vector<SoftMask> masks;
  try {
    masks = backend.decode(ctx, frames, prompt, propagate);
  } catch (const std::exception & e) {
    throw BackendError(where + ": decode failed: " + e.what());
  }
  if (masks.size() != frames.size()) {
    throw BackendError(
      where + ": backend returned " + std::to_string(masks.size()) + " masks for " +
      std::to_string(frames.size()) + " frames");
  }
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (masks[i].width != w || masks[i].height != h) {
      throw BackendError(
        where + ": mask for frame " + std::to_string(frames[i].index) + " has wrong dimensions");
    }
    try {
      check_soft_mask(masks[i]);
    } catch (const ValidationError & e) {
      throw BackendError(where + ": frame " + std::to_string(frames[i].index) + ": " + e.what());
    }
  }
  return masks;
}

std::vector<SoftMask> decode_video(
  SegmenterBackend & backend, const SamplingPlan & plan, const VideoMeta & meta,
  const StreamContext & ctx, std::span<const SegPrompt> prompts, const FrameLoader & load)
{
  require_valid_plan(plan, meta, ctx);

  std::map<int, const SegPrompt *> by_clip;
  for (const SegPrompt & p : prompts) by_clip[p.clip_index] = &p;

  std::vector<std::vector<int>> clip_frames(static_cast<std::size_t>(plan.num_clips));
  for (int f = 0; f < meta.num_frames; ++f) {
    for (int c : plan.frame_tokens[f]) clip_frames[c].push_back(f);
  }

  std::vector<SoftMask> sum(static_cast<std::size_t>(meta.num_frames));
  std::vector<int> hits(static_cast<std::size_t>(meta.num_frames), 0);
  for (int c = 0; c < plan.num_clips; ++c) {
    const std::vector<int> & indices = clip_frames[c];
    if (indices.empty()) continue;
    auto it = by_clip.find(c);
    if (it == by_clip.end()) {
      throw ValidationError(stream_tag(ctx) + ": missing prompt for clip " + std::to_string(c));
    }

    std::vector<Frame> frames;
    frames.reserve(indices.size());
    for (int f : indices) {
      Frame frame = load(f);
      if (frame.image.width != meta.width || frame.image.height != meta.height) {
        throw ValidationError(
          stream_tag(ctx) + ": frame " + std::to_string(f) + " is " +
          std::to_string(frame.image.width) + "x" + std::to_string(frame.image.height) +
          " but the video is " + std::to_string(meta.width) + "x" + std::to_string(meta.height));
      }
      frames.push_back(std::move(frame));
    }
    const bool propagate = plan.tail_propagation && indices.back() >= plan.budget;
    std::vector<SoftMask> masks = decode_clip(backend, ctx, frames, *it->second, propagate);

    for (std::size_t k = 0; k < indices.size(); ++k) {
      const int f = indices[k];
      if (hits[f] == 0) {
        sum[f] = std::move(masks[k]);
      } else {
        for (std::size_t p = 0; p < sum[f].values.size(); ++p) sum[f].values[p] += masks[k].values[p];
      }
      ++hits[f];
    }
  }

  for (int f = 0; f < meta.num_frames; ++f) {
    if (hits[f] > 1) {
      const float scale = 1.0F / static_cast<float>(hits[f]);
      for (float & v : sum[f].values) v *= scale;
    }
  }
  return sum;
}

std::vector<SoftMask> segment_video(
  SegmenterBackend & backend, const SamplingPlan & plan, const VideoMeta & meta,
  const StreamContext & ctx, const FrameLoader & load)
{
  require_valid_plan(plan, meta, ctx);
  const std::vector<CompressedClip> compressed = compress_plan(plan, load);
  const std::vector<SegPrompt> prompts = generate_prompts(backend, compressed, ctx);
  return decode_video(backend, plan, meta, ctx, prompts, load);
}

}  // namespace segaug
