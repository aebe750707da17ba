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

#include <optional>
#include <span>
#include <vector>

#include "segaug/types.hpp"

namespace segaug
{

// Frame-sampling strategies for test-time augmentation. Every builder returns a
// plan of N clips with c members each (T = N * c); indices are 0-based.
//
// Uniform       ori-clip i covers [ceil(i*T_ori/N), ceil((i+1)*T_ori/N)); c members are
//               linearly spaced inside it (endpoints included, round half up). Every
//               frame of ori-clip i is decoded with token i.
// UniformPlus   Uniform when T_ori >= T. For shorter videos the T samples are spaced over
//               the whole video, so frames at clip boundaries belong to two clips and
//               are decoded with both tokens.
// QFrame        top-T frames by relevance, in temporal order, then UniformPlus.
// WrapAround    indices i mod T_ori for i < T, sorted. Frames past T (long videos) ride
//               on the last clip with tracker propagation.
// WrapAroundPlus  WrapAround when T_ori < T, otherwise Uniform.

SamplingPlan plan_uniform(const VideoMeta & meta, int num_clips, int clip_len);
SamplingPlan plan_uniform_plus(const VideoMeta & meta, int num_clips, int clip_len);
SamplingPlan plan_qframe(
  const VideoMeta & meta, int num_clips, int clip_len, std::span<const double> scores);
SamplingPlan plan_wrap_around(const VideoMeta & meta, int num_clips, int clip_len);
SamplingPlan plan_wrap_around_plus(const VideoMeta & meta, int num_clips, int clip_len);

/// Dispatch on `strategy`. `scores` is required for QFrame and ignored otherwise.
SamplingPlan make_plan(
  Strategy strategy, const VideoMeta & meta, int num_clips, int clip_len,
  std::optional<std::span<const double>> scores = std::nullopt);

/// The raw cyclic index list [i mod T_ori for i in 0..T).
std::vector<int> wrap_around_indices(int num_frames, int budget);

/// Indices of the `count` highest scores (ties to the lower index), ascending.
std::vector<int> select_top_frames(std::span<const double> scores, int count);

}  // namespace segaug
