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

#include "segaug/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "segaug/error.hpp"

namespace segaug
{
namespace
{

struct Shape
{
  int num_clips;
  int clip_len;
  int grid;
  int budget;
};

Shape check_inputs(const VideoMeta & meta, int num_clips, int clip_len)
{
  if (meta.num_frames < 1) {
    throw ValidationError("video '" + meta.video_id + "': T_ori must be >= 1");
  }
  if (num_clips < 1) {
    throw ValidationError("number of clips N must be >= 1");
  }
  const ClipGeometry geom = ClipGeometry::from_clip_len(clip_len);
  return {num_clips, geom.clip_len(), geom.grid(), num_clips * geom.clip_len()};
}

SamplingPlan empty_plan(Strategy strategy, const Shape & shape, int num_frames)
{
  SamplingPlan plan;
  plan.strategy = strategy;
  plan.num_clips = shape.num_clips;
  plan.clip_len = shape.clip_len;
  plan.grid = shape.grid;
  plan.budget = shape.budget;
  plan.num_frames = num_frames;
  plan.frame_tokens.assign(static_cast<std::size_t>(num_frames), {});
  return plan;
}

// start + floor(k * (len - 1) / (c - 1) + 1/2), evaluated exactly in integers.
int spaced_index(long long start, long long len, long long k, long long count)
{
  const long long den = 2 * (count - 1);
  return static_cast<int>(start + (2 * k * (len - 1) + (count - 1)) / den);
}

int ori_clip_start(int i, int num_frames, int num_clips)
{
  return static_cast<int>(
    (static_cast<long long>(i) * num_frames + num_clips - 1) / num_clips);
}

// Chunk a sorted index sequence of length T into N clips of c.
void fill_clips(SamplingPlan & plan, const std::vector<int> & sequence)
{
  plan.clips.clear();
  for (int i = 0; i < plan.num_clips; ++i) {
    ClipSpec clip;
    clip.clip_index = i;
    auto first = sequence.begin() + static_cast<std::ptrdiff_t>(i) * plan.clip_len;
    clip.members.assign(first, first + plan.clip_len);
    plan.clips.push_back(std::move(clip));
  }
}

SamplingPlan build_uniform(Strategy tag, const VideoMeta & meta, const Shape & shape)
{
  SamplingPlan plan = empty_plan(tag, shape, meta.num_frames);
  for (int i = 0; i < shape.num_clips; ++i) {
    const int start = ori_clip_start(i, meta.num_frames, shape.num_clips);
    const int end = ori_clip_start(i + 1, meta.num_frames, shape.num_clips);
    ClipSpec clip;
    clip.clip_index = i;
    if (end > start) {
      for (int k = 0; k < shape.clip_len; ++k) {
        clip.members.push_back(spaced_index(start, end - start, k, shape.clip_len));
      }
      for (int f = start; f < end; ++f) {
        plan.frame_tokens[f] = {i};
      }
    } else {
      // Fewer frames than clips: this ori-clip is empty, so the clip repeats
      // the nearest existing frame and decodes nothing by itself.
      clip.members.assign(shape.clip_len, std::min(start, meta.num_frames - 1));
    }
    plan.clips.push_back(std::move(clip));
  }
  return plan;
}

// Samples spaced over the whole (short) video; a frame whose run of samples
// straddles a clip boundary is decoded by both neighbouring tokens.
SamplingPlan build_dense_uniform(Strategy tag, const VideoMeta & meta, const Shape & shape)
{
  SamplingPlan plan = empty_plan(tag, shape, meta.num_frames);
  std::vector<int> sequence(static_cast<std::size_t>(shape.budget));
  for (int p = 0; p < shape.budget; ++p) {
    sequence[p] = spaced_index(0, meta.num_frames, p, shape.budget);
  }
  fill_clips(plan, sequence);

  int pos = 0;
  for (int f = 0; f < meta.num_frames; ++f) {
    const int first = pos;
    while (pos < shape.budget && sequence[pos] == f) {
      ++pos;
    }
    const int last = pos - 1;
    if (last < first) {
      continue;  // unreachable for T_ori < T: every frame is sampled
    }
    const int lo = first / shape.clip_len;
    const int hi = last / shape.clip_len;
    auto & tokens = plan.frame_tokens[f];
    if (hi - lo <= 1) {
      for (int t = lo; t <= hi; ++t) tokens.push_back(t);
    } else {
      // Run spans 3+ clips (T_ori < N). Keep the clip(s) at its centre.
      const int a = (first + last) / 2 / shape.clip_len;
      const int b = (first + last + 1) / 2 / shape.clip_len;
      tokens.push_back(a);
      if (b != a) tokens.push_back(b);
    }
  }
  return plan;
}

SamplingPlan build_uniform_plus(Strategy tag, const VideoMeta & meta, const Shape & shape)
{
  if (meta.num_frames >= shape.budget) {
    return build_uniform(tag, meta, shape);
  }
  return build_dense_uniform(tag, meta, shape);
}

SamplingPlan build_wrap_around(Strategy tag, const VideoMeta & meta, const Shape & shape)
{
  SamplingPlan plan = empty_plan(tag, shape, meta.num_frames);
  std::vector<int> sequence = wrap_around_indices(meta.num_frames, shape.budget);
  std::sort(sequence.begin(), sequence.end());
  fill_clips(plan, sequence);

  // One token per frame: the clip holding its first occurrence.
  for (int p = shape.budget - 1; p >= 0; --p) {
    plan.frame_tokens[sequence[p]] = {p / shape.clip_len};
  }
  if (meta.num_frames > shape.budget) {
    plan.tail_propagation = true;
    for (int f = shape.budget; f < meta.num_frames; ++f) {
      plan.frame_tokens[f] = {shape.num_clips - 1};
    }
  }
  return plan;
}

}  // namespace

std::vector<int> wrap_around_indices(int num_frames, int budget)
{
  if (num_frames < 1) {
    throw ValidationError("T_ori must be >= 1");
  }
  std::vector<int> out(static_cast<std::size_t>(std::max(budget, 0)));
  for (int i = 0; i < budget; ++i) {
    out[i] = i % num_frames;
  }
  return out;
}

std::vector<int> select_top_frames(std::span<const double> scores, int count)
{
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&scores](int a, int b) {
    return scores[a] > scores[b];
  });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(count, 0))));
  std::sort(order.begin(), order.end());
  return order;
}

SamplingPlan plan_uniform(const VideoMeta & meta, int num_clips, int clip_len)
{
  return build_uniform(Strategy::Uniform, meta, check_inputs(meta, num_clips, clip_len));
}

SamplingPlan plan_uniform_plus(const VideoMeta & meta, int num_clips, int clip_len)
{
  return build_uniform_plus(
    Strategy::UniformPlus, meta, check_inputs(meta, num_clips, clip_len));
}

SamplingPlan plan_qframe(
  const VideoMeta & meta, int num_clips, int clip_len, std::span<const double> scores)
{
  const Shape shape = check_inputs(meta, num_clips, clip_len);
  if (scores.size() != static_cast<std::size_t>(meta.num_frames)) {
    throw ValidationError(
      "video '" + meta.video_id + "': expected " + std::to_string(meta.num_frames) +
      " relevance scores, got " + std::to_string(scores.size()));
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw ValidationError("video '" + meta.video_id + "': non-finite relevance score");
    }
  }

  const std::vector<int> selected =
    select_top_frames(scores, std::min(shape.budget, meta.num_frames));

  VideoMeta sub;
  sub.video_id = meta.video_id;
  sub.num_frames = static_cast<int>(selected.size());
  const SamplingPlan inner = build_uniform_plus(Strategy::QFrame, sub, shape);

  SamplingPlan plan = empty_plan(Strategy::QFrame, shape, meta.num_frames);
  for (const ClipSpec & clip : inner.clips) {
    ClipSpec mapped{clip.clip_index, {}};
    for (int m : clip.members) mapped.members.push_back(selected[m]);
    plan.clips.push_back(std::move(mapped));
  }
  for (std::size_t j = 0; j < selected.size(); ++j) {
    plan.frame_tokens[selected[j]] = inner.frame_tokens[j];
  }

  // Unselected frames borrow the tokens of the nearest selected frame (earlier on tie).
  std::size_t next = 0;
  for (int f = 0; f < meta.num_frames; ++f) {
    while (next < selected.size() && selected[next] < f) ++next;
    if (next < selected.size() && selected[next] == f) continue;
    const bool has_prev = next > 0;
    const bool has_next = next < selected.size();
    int source;
    if (has_prev && has_next) {
      const int before = selected[next - 1];
      const int after = selected[next];
      source = (f - before <= after - f) ? before : after;
    } else {
      source = has_prev ? selected[next - 1] : selected[next];
    }
    plan.frame_tokens[f] = plan.frame_tokens[source];
  }
  return plan;
}

SamplingPlan plan_wrap_around(const VideoMeta & meta, int num_clips, int clip_len)
{
  return build_wrap_around(Strategy::WrapAround, meta, check_inputs(meta, num_clips, clip_len));
}

SamplingPlan plan_wrap_around_plus(const VideoMeta & meta, int num_clips, int clip_len)
{
  const Shape shape = check_inputs(meta, num_clips, clip_len);
  if (meta.num_frames < shape.budget) {
    return build_wrap_around(Strategy::WrapAroundPlus, meta, shape);
  }
  return build_uniform(Strategy::WrapAroundPlus, meta, shape);
}

SamplingPlan make_plan(
  Strategy strategy, const VideoMeta & meta, int num_clips, int clip_len,
  std::optional<std::span<const double>> scores)
{
  switch (strategy) {
    case Strategy::Uniform:
      return plan_uniform(meta, num_clips, clip_len);
    case Strategy::UniformPlus:
      return plan_uniform_plus(meta, num_clips, clip_len);
    case Strategy::QFrame:
      if (!scores) {
        throw ValidationError("qframe sampling requires relevance scores");
      }
      return plan_qframe(meta, num_clips, clip_len, *scores);
    case Strategy::WrapAround:
      return plan_wrap_around(meta, num_clips, clip_len);
    case Strategy::WrapAroundPlus:
      return plan_wrap_around_plus(meta, num_clips, clip_len);
  }
  throw ValidationError("unknown sampling strategy");
}

}  // namespace segaug
