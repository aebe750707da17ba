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

#include <span>
#include <vector>

#include "segaug/types.hpp"

namespace segaug
{

/// What a clip contributes to the language model: its key frame plus one image
/// holding the remaining g*g frames tiled and shrunk back to frame size.
struct CompressedClip
{
  Frame key_frame;
  Frame compressed;
  std::vector<int> source_indices;  // the g*g tiled frames, row-major
};

/// Tile g*g equally sized frames into a (g*H) x (g*W) grid, row-major
/// (left to right, top to bottom).
RgbImage tile_grid(std::span<const Frame> frames, int grid);

/// Area (box) resampling. For integer shrink factors each output pixel is the
/// rounded mean of its source block; non-integer factors weight partial overlap.
RgbImage resize_to(const RgbImage & src, int height, int width);

/// frames[0] is the key frame; frames[1..c) are tiled and resized.
CompressedClip compress_clip(std::span<const Frame> clip_frames, int grid);

/// Gather clip frames from `plan` and compress every clip. `frame_at(i)` must
/// return the frame with original index i.
template <typename FrameLookup>
std::vector<CompressedClip> compress_plan(const SamplingPlan & plan, FrameLookup && frame_at)
{
  std::vector<CompressedClip> out;
  out.reserve(plan.clips.size());
  for (const ClipSpec & clip : plan.clips) {
    std::vector<Frame> frames;
    frames.reserve(clip.members.size());
    for (int m : clip.members) frames.push_back(frame_at(m));
    out.push_back(compress_clip(frames, plan.grid));
  }
  return out;
}

}  // namespace segaug
