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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "segaug/kfc.hpp"
#include "segaug/types.hpp"

namespace segaug
{

/// Opaque per-clip segmentation prompt (the hidden state of one [SEG] token).
struct SegPrompt
{
  int clip_index = 0;
  std::string payload;

  bool operator==(const SegPrompt &) const = default;
};

/// The (video, expression) stream a request belongs to.
struct StreamContext
{
  std::string video_id;
  std::string exp_id;
  std::string expression;
};

/// Model boundary: a language model that turns 2N images into N prompts, and a
/// mask decoder that turns (frames, prompt) into soft masks. Implementations must
/// be deterministic for identical inputs. One instance serves one stream at a time.
class SegmenterBackend
{
public:
  virtual ~SegmenterBackend() = default;

  virtual std::string identity() const = 0;
  virtual bool supports_tail_propagation() const = 0;

  /// One prompt per clip, in clip order.
  virtual std::vector<SegPrompt> generate(
    const StreamContext & ctx, std::span<const CompressedClip> clips) = 0;

  /// One mask per frame. `propagate` is set when the call carries frames past the
  /// sampled budget that a tracker may fill from memory.
  virtual std::vector<SoftMask> decode(
    const StreamContext & ctx, std::span<const Frame> frames, const SegPrompt & prompt,
    bool propagate) = 0;
};

using BackendFactory = std::function<std::unique_ptr<SegmenterBackend>()>;

/// Returns the frame with the given original index.
using FrameLoader = std::function<Frame(int)>;

std::vector<SegPrompt> generate_prompts(
  SegmenterBackend & backend, std::span<const CompressedClip> compressed,
  const StreamContext & ctx);

std::vector<SoftMask> decode_clip(
  SegmenterBackend & backend, const StreamContext & ctx, std::span<const Frame> frames,
  const SegPrompt & prompt, bool propagate = false);

/// Decode all T_ori frames: each clip's prompt decodes the frames mapped to it, and
/// frames carrying two tokens get the pixelwise mean of both results.
std::vector<SoftMask> decode_video(
  SegmenterBackend & backend, const SamplingPlan & plan, const VideoMeta & meta,
  const StreamContext & ctx, std::span<const SegPrompt> prompts, const FrameLoader & load);

/// compress -> prompts -> decode for one stream.
std::vector<SoftMask> segment_video(
  SegmenterBackend & backend, const SamplingPlan & plan, const VideoMeta & meta,
  const StreamContext & ctx, const FrameLoader & load);

// ---------------------------------------------------------------------------
// Stub backend

/// Deterministic synthetic segmenter. Each (video, expression) has a moving disk
/// as its "true" object; each clip's prompt sees that disk with a small offset
/// derived from the prompt, the clip index, the model tag, and the seed.
class StubBackend : public SegmenterBackend
{
public:
  explicit StubBackend(std::uint64_t seed = 0, std::string model_tag = "stub");

  std::string identity() const override;
  bool supports_tail_propagation() const override { return false; }

  std::vector<SegPrompt> generate(
    const StreamContext & ctx, std::span<const CompressedClip> clips) override;
  std::vector<SoftMask> decode(
    const StreamContext & ctx, std::span<const Frame> frames, const SegPrompt & prompt,
    bool propagate) override;

  /// Payload the stub emits for a clip: hex FNV-1a of (expression, clip_index).
  static std::string prompt_payload(const std::string & expression, int clip_index);

private:
  std::uint64_t seed_;
  std::string model_tag_;
};

/// The unperturbed object of a stub stream at `frame_index`, binarized at 0.5.
BinaryMask stub_ground_truth(
  const StreamContext & ctx, int frame_index, int width, int height);

// ---------------------------------------------------------------------------
// Subprocess backend

/// Talks to an external worker over stdin/stdout, one JSON object per line.
///
///   -> {"kind":"hello"}
///   <- {"identity":"...","supports_tail_propagation":false}
///   -> {"kind":"prompt","video_id":..,"exp_id":..,"expression":..,"clip_index":i,
///       "image_paths":[key_0, com_0, ..., key_{N-1}, com_{N-1}]}
///   <- {"prompt_b64":"..."}
///   -> {"kind":"decode", ...,"clip_index":i,"prompt_b64":"...","image_paths":[...],
///       "frame_indices":[...],"width":W,"height":H,"propagate":false}
///   <- {"mask_paths":[...]}           8-bit grayscale PNG, value/255
///
/// A worker may answer any request with {"error":"..."}. Anything else that does
/// not parse aborts the stream with a protocol error.
class SubprocessBackend : public SegmenterBackend
{
public:
  SubprocessBackend(std::string command, std::filesystem::path work_dir);
  ~SubprocessBackend() override;

  SubprocessBackend(const SubprocessBackend &) = delete;
  SubprocessBackend & operator=(const SubprocessBackend &) = delete;

  std::string identity() const override;
  bool supports_tail_propagation() const override;

  std::vector<SegPrompt> generate(
    const StreamContext & ctx, std::span<const CompressedClip> clips) override;
  std::vector<SoftMask> decode(
    const StreamContext & ctx, std::span<const Frame> frames, const SegPrompt & prompt,
    bool propagate) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "stub", "stub:<tag>" or "cmd:<shell command>". Each call to the factory builds a
/// fresh backend; subprocess backends get their own scratch directory under `work_dir`.
BackendFactory make_backend_factory(
  const std::string & spec, std::uint64_t seed, const std::filesystem::path & work_dir);

}  // namespace segaug
