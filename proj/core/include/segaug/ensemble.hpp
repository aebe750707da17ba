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

struct WeightedMask
{
  const BinaryMask * mask;
  double weight;
};

/// Selective averaging: a pixel is foreground iff the weighted mean of the
/// votes strictly exceeds `threshold`. Ties go to background.
///
/// Weights with a short decimal expansion (up to 9 places) are scaled to
/// integers so ties such as 0.1 + 0.2 vs 0.3 are decided exactly; other
/// weights are compared through their exact binary values.
BinaryMask selective_average(std::span<const WeightedMask> inputs, double threshold = 0.5);

/// Fuse the configured sources over their shared (video, expression, frame)
/// keys. Sources not named in `config` are ignored, and so are zero weights.
PredictionSource ensemble_run(
  std::span<const PredictionSource> sources, const WeightConfig & config,
  const std::string & output_id = "ensemble");

}  // namespace segaug
