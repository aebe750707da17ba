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

// Brute-force reference computations used only by tests. Each one follows the
// textbook definition directly and shares no code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "segaug/types.hpp"

namespace segaug::oracle
{

/// floor(start + k*(len-1)/(count-1) + 0.5), evaluated in floating point.
inline std::vector<int> linspace_members(int start, int len, int count)
{
  std::vector<int> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<int>(std::floor(start + k * static_cast<double>(len - 1) / (count - 1) + 0.5)));
  }
  return out;
}

/// Direct loop: i mod T_ori for i in [0, T).
inline std::vector<int> wrap_loop(int num_frames, int budget)
{
  std::vector<int> out;
  for (int i = 0; i < budget; ++i) {
    int v = i;
    while (v >= num_frames) v -= num_frames;
    out.push_back(v);
  }
  return out;
}

/// Top-k by repeated linear scans: highest score, lowest index first.
inline std::vector<int> top_k(const std::vector<double> & scores, int k)
{
  std::vector<bool> taken(scores.size(), false);
  std::vector<int> out;
  for (int round = 0; round < k && round < static_cast<int>(scores.size()); ++round) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
      if (taken[i]) continue;
      if (best < 0 || scores[i] > scores[best]) best = i;
    }
    taken[best] = true;
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Mean of each (fy x fx) block, rounded half up; requires exact integer factors.
inline RgbImage box_downscale(const RgbImage & src, int height, int width)
{
  const int fy = src.height / height;
  const int fx = src.width / width;
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        double sum = 0;
        for (int dy = 0; dy < fy; ++dy) {
          for (int dx = 0; dx < fx; ++dx) sum += src.at(y * fy + dy, x * fx + dx, ch);
        }
        out.at(y, x, ch) = static_cast<std::uint8_t>(std::floor(sum / (fy * fx) + 0.5));
      }
    }
  }
  return out;
}

/// Weighted vote with integer weights: foreground iff sum(w*m) / sum(w) > num/den.
inline BinaryMask integer_vote(
  const std::vector<BinaryMask> & masks, const std::vector<std::int64_t> & weights,
  std::int64_t thr_num = 1, std::int64_t thr_den = 2)
{
  BinaryMask out(masks[0].width, masks[0].height);
  std::int64_t total = 0;
  for (auto w : weights) total += w;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      std::int64_t votes = 0;
      for (std::size_t s = 0; s < masks.size(); ++s) votes += weights[s] * masks[s].at(y, x);
      out.at(y, x) = votes * thr_den > thr_num * total ? 1 : 0;
    }
  }
  return out;
}

/// Weighted vote in long double for weights without ties.
inline BinaryMask real_vote(const std::vector<BinaryMask> & masks, const std::vector<double> & weights)
{
  BinaryMask out(masks[0].width, masks[0].height);
  long double total = 0;
  for (double w : weights) total += w;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      long double votes = 0;
      for (std::size_t s = 0; s < masks.size(); ++s) votes += weights[s] * masks[s].at(y, x);
      out.at(y, x) = votes / total > 0.5L ? 1 : 0;
    }
  }
  return out;
}

inline double jaccard_count(const BinaryMask & a, const BinaryMask & b)
{
  long inter = 0;
  long uni = 0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      const int p = a.at(y, x);
      const int g = b.at(y, x);
      if (p == 1 && g == 1) ++inter;
      if (p == 1 || g == 1) ++uni;
    }
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

inline bool is_boundary(const BinaryMask & m, int y, int x)
{
  if (m.at(y, x) == 0) return false;
  const int dy[4] = {-1, 1, 0, 0};
  const int dx[4] = {0, 0, -1, 1};
  for (int k = 0; k < 4; ++k) {
    const int ny = y + dy[k];
    const int nx = x + dx[k];
    if (ny < 0 || nx < 0 || ny >= m.height || nx >= m.width) return true;
    if (m.at(ny, nx) == 0) return true;
  }
  return false;
}

/// For every boundary pixel of one mask, scan every boundary pixel of the other.
inline double boundary_f_brute(const BinaryMask & pred, const BinaryMask & gt, int tol)
{
  std::vector<std::pair<int, int>> pb;
  std::vector<std::pair<int, int>> gb;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      if (is_boundary(pred, y, x)) pb.emplace_back(y, x);
      if (is_boundary(gt, y, x)) gb.emplace_back(y, x);
    }
  }
  if (pb.empty() && gb.empty()) return 1.0;
  if (pb.empty() || gb.empty()) return 0.0;
  auto matched = [tol](const std::vector<std::pair<int, int>> & from, const std::vector<std::pair<int, int>> & to) {
    long hit = 0;
    for (auto [y, x] : from) {
      for (auto [v, u] : to) {
        if (std::max(std::abs(y - v), std::abs(x - u)) <= tol) {
          ++hit;
          break;
        }
      }
    }
    return static_cast<double>(hit) / static_cast<double>(from.size());
  };
  const double p = matched(pb, gb);
  const double r = matched(gb, pb);
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

}  // namespace segaug::oracle
