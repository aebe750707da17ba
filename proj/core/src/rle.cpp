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

#include "segaug/error.hpp"
#include "segaug/mask_io.hpp"

namespace segaug
{

RleMask rle_encode(const BinaryMask & mask)
{
  RleMask rle{mask.width, mask.height, {}};
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (int x = 0; x < mask.width; ++x) {
    for (int y = 0; y < mask.height; ++y) {
      const std::uint8_t v = mask.at(y, x) != 0 ? 1 : 0;
      if (v != current) {
        rle.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask rle_decode(const RleMask & rle)
{
  if (rle.width < 0 || rle.height < 0) {
    throw ValidationError("rle: negative dimensions");
  }
  const std::uint64_t expected = static_cast<std::uint64_t>(rle.width) * rle.height;
  std::uint64_t sum = 0;
  for (std::uint32_t c : rle.counts) sum += c;
  if (sum != expected) {
    throw ValidationError(
      "rle: counts sum to " + std::to_string(sum) + ", expected " + std::to_string(expected));
  }
  BinaryMask mask(rle.width, rle.height);
  std::uint64_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t c : rle.counts) {
    for (std::uint32_t k = 0; k < c; ++k, ++pos) {
      const auto x = static_cast<int>(pos / rle.height);
      const auto y = static_cast<int>(pos % rle.height);
      mask.at(y, x) = value;
    }
    value ^= 1;
  }
  return mask;
}

}  // namespace segaug
