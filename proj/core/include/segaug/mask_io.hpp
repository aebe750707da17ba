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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "segaug/types.hpp"

namespace segaug
{

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Run-length masks

/// Alternating background/foreground run lengths over the mask in column-major
/// order, always starting with a (possibly empty) background run.
struct RleMask
{
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;

  bool operator==(const RleMask &) const = default;
};

RleMask rle_encode(const BinaryMask & mask);
BinaryMask rle_decode(const RleMask & rle);

void save_rle_masks(const std::filesystem::path & path, const std::vector<BinaryMask> & masks);
std::vector<BinaryMask> load_rle_masks(const std::filesystem::path & path);

// ---------------------------------------------------------------------------
// Rasters (PNG)

RgbImage read_rgb_png(const std::filesystem::path & path);
void write_rgb_png(const std::filesystem::path & path, const RgbImage & image);

/// Single-channel 8-bit mask image, foreground 255. Any other value is rejected.
BinaryMask read_mask_png(const std::filesystem::path & path);
void write_mask_png(const std::filesystem::path & path, const BinaryMask & mask);

/// Single-channel 8-bit image read as value / 255.
SoftMask read_soft_mask_png(const std::filesystem::path & path);
void write_soft_mask_png(const std::filesystem::path & path, const SoftMask & mask);

// ---------------------------------------------------------------------------
// Manifests

struct Expression
{
  std::string exp_id;
  std::string text;

  bool operator==(const Expression &) const = default;
};

struct ManifestVideo
{
  VideoMeta meta;
  std::vector<Expression> expressions;

  bool operator==(const ManifestVideo &) const = default;
};

struct Manifest
{
  std::vector<ManifestVideo> videos;
  std::filesystem::path base_dir;  // relative frame uris resolve against this; not serialized

  /// Location of frame `index` of `meta`, with relative uris resolved.
  std::filesystem::path frame_path(const VideoMeta & meta, int index) const;

  bool operator==(const Manifest & other) const { return videos == other.videos; }
};

std::string manifest_to_text(const Manifest & manifest);
Manifest manifest_from_text(std::string_view text, const std::string & origin = "<manifest>");
Manifest load_manifest(const std::filesystem::path & path);
void save_manifest(const std::filesystem::path & path, const Manifest & manifest);

/// Relevance scores for frame selection: video_id -> exp_id -> one score per frame.
using ScoreTable = std::map<std::string, std::map<std::string, std::vector<double>>>;
ScoreTable load_scores(const std::filesystem::path & path);
void save_scores(const std::filesystem::path & path, const ScoreTable & scores);

// ---------------------------------------------------------------------------
// Plans

struct PlanDocument
{
  std::string video_id;
  std::string exp_id;
  SamplingPlan plan;

  bool operator==(const PlanDocument &) const = default;
};

std::string plan_to_text(const PlanDocument & doc);
PlanDocument plan_from_text(std::string_view text, const std::string & origin = "<plan>");
void save_plan(const std::filesystem::path & path, const PlanDocument & doc);
PlanDocument load_plan(const std::filesystem::path & path);

/// <root>/<video_id>/<exp_id>.json
std::filesystem::path plan_path(
  const std::filesystem::path & root, const std::string & video_id, const std::string & exp_id);

// ---------------------------------------------------------------------------
// Weight configs

/// {"schema_version":1,"threshold":0.5,"weights":{"<source_id>":w,...}}
WeightConfig weight_config_from_text(std::string_view text, const std::string & origin = "<weights>");
WeightConfig load_weight_config(const std::filesystem::path & path);
std::string weight_config_to_text(const WeightConfig & config);

// ---------------------------------------------------------------------------
// Prediction sets

enum class MaskFormat
{
  Png,  // <dir>/<video_id>/<exp_id>/<frame:05>.png
  Rle,  // <dir>/<video_id>/<exp_id>.rle.json
};

/// Writes one (video, expression) sequence under a source directory.
void write_sequence(
  const std::filesystem::path & source_dir, const std::string & video_id,
  const std::string & exp_id, const std::vector<BinaryMask> & masks,
  MaskFormat format = MaskFormat::Png);

std::vector<BinaryMask> read_sequence(
  const std::filesystem::path & source_dir, const std::string & video_id,
  const std::string & exp_id);

void write_prediction_source(
  const std::filesystem::path & source_dir, const PredictionSource & source,
  MaskFormat format = MaskFormat::Png);

/// Loads every sequence found under `source_dir`. Frame files must be numbered
/// contiguously from 0.
PredictionSource read_prediction_source(
  const std::filesystem::path & source_dir, const std::string & source_id);

/// Zero-padded frame file name, e.g. 00042.png.
std::string frame_file_name(int index);

std::string read_text_file(const std::filesystem::path & path);
void write_text_file(const std::filesystem::path & path, std::string_view text);

}  // namespace segaug
