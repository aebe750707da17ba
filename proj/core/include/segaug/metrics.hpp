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
#include <string>
#include <vector>

#include "segaug/types.hpp"

namespace segaug
{

/// Region similarity of one frame. Both masks empty scores 1.
double jaccard(const BinaryMask & pred, const BinaryMask & gt);

/// Mean per-frame region similarity.
double jaccard(std::span<const BinaryMask> pred, std::span<const BinaryMask> gt);

/// Foreground pixels with a 4-neighbour in the background or on the image edge.
BinaryMask boundary_map(const BinaryMask & mask);

/// Contour accuracy: F-measure of boundary precision and recall, where a boundary
/// pixel counts as matched when the other boundary has a pixel within Chebyshev
/// distance `tolerance`. Both boundaries empty scores 1, exactly one empty scores 0.
double boundary_f(const BinaryMask & pred, const BinaryMask & gt, int tolerance);

/// How to pick the boundary tolerance for a W x H frame.
struct ToleranceRule
{
  double diagonal_fraction = 0.008;
  std::optional<int> fixed_pixels;

  /// fixed_pixels if set, else max(1, round(diagonal_fraction * diagonal)).
  int pixels(int width, int height) const;
};

struct SequenceScore
{
  std::string video_id;
  std::string exp_id;
  int frames = 0;
  double j = 0.0;
  double f = 0.0;
};

struct EvalResult
{
  std::vector<SequenceScore> sequences;
  double j = 0.0;
  double f = 0.0;
  double jf = 0.0;
};

/// (J + F) / 2
double jf_score(double j, double f);

/// Score every ground-truth sequence. Throws ValidationError naming every
/// (video, expression) missing from `pred` or differing in length.
EvalResult evaluate(
  const PredictionSource & pred, const PredictionSource & gt, const ToleranceRule & rule = {});

/// Aligned text table with per-sequence rows and the global means in percent.
std::string format_report(const EvalResult & result);

/// Machine-readable summary.
std::string report_to_json(const EvalResult & result);

}  // namespace segaug
