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

#include "segaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "segaug/error.hpp"

namespace segaug
{
namespace
{

void require_same_shape(const BinaryMask & a, const BinaryMask & b, const char * what)
{
  if (a.width != b.width || a.height != b.height || a.bits.size() != b.bits.size()) {
    throw ValidationError(
      std::string(what) + ": mask dimensions differ (" + std::to_string(a.width) + "x" +
      std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
      std::to_string(b.height) + ")");
  }
}

// Summed-area table over a 0/1 map, (h+1) x (w+1).
class CountTable
{
public:
  explicit CountTable(const BinaryMask & m)
  : w_(m.width), h_(m.height), sums_(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0)
  {
    for (int y = 0; y < h_; ++y) {
      std::int64_t row = 0;
      for (int x = 0; x < w_; ++x) {
        row += m.at(y, x);
        at(y + 1, x + 1) = at(y, x + 1) + row;
      }
    }
  }

  // Count of set pixels in the clipped window [y0, y1] x [x0, x1].
  std::int64_t count(int y0, int x0, int y1, int x1) const
  {
    y0 = std::max(y0, 0);
    x0 = std::max(x0, 0);
    y1 = std::min(y1, h_ - 1);
    x1 = std::min(x1, w_ - 1);
    if (y0 > y1 || x0 > x1) return 0;
    return at(y1 + 1, x1 + 1) - at(y0, x1 + 1) - at(y1 + 1, x0) + at(y0, x0);
  }

private:
  std::int64_t & at(int y, int x) { return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
  std::int64_t at(int y, int x) const
  {
    return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x];
  }

  int w_;
  int h_;
  std::vector<std::int64_t> sums_;
};

// (matched, total) boundary pixels of `from` within `tolerance` of `to`.
std::pair<std::int64_t, std::int64_t> match_boundary(
  const BinaryMask & from, const CountTable & to, int tolerance)
{
  std::int64_t matched = 0;
  std::int64_t total = 0;
  for (int y = 0; y < from.height; ++y) {
    for (int x = 0; x < from.width; ++x) {
      if (from.at(y, x) == 0) continue;
      ++total;
      if (to.count(y - tolerance, x - tolerance, y + tolerance, x + tolerance) > 0) ++matched;
    }
  }
  return {matched, total};
}

}  // namespace

double jaccard(const BinaryMask & pred, const BinaryMask & gt)
{
  require_same_shape(pred, gt, "jaccard");
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    const bool p = pred.bits[i] != 0;
    const bool g = gt.bits[i] != 0;
    inter += (p && g) ? 1 : 0;
    uni += (p || g) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard(std::span<const BinaryMask> pred, std::span<const BinaryMask> gt)
{
  if (pred.size() != gt.size()) {
    throw ValidationError(
      "jaccard: sequence lengths differ (" + std::to_string(pred.size()) + " vs " +
      std::to_string(gt.size()) + ")");
  }
  if (pred.empty()) {
    throw ValidationError("jaccard: empty sequence");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += jaccard(pred[i], gt[i]);
  return sum / static_cast<double>(pred.size());
}

BinaryMask boundary_map(const BinaryMask & mask)
{
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(y, x) == 0) continue;
      const bool edge = y == 0 || x == 0 || y == mask.height - 1 || x == mask.width - 1;
      if (edge || mask.at(y - 1, x) == 0 || mask.at(y + 1, x) == 0 || mask.at(y, x - 1) == 0 ||
          mask.at(y, x + 1) == 0) {
        out.at(y, x) = 1;
      }
    }
  }
  return out;
}

double boundary_f(const BinaryMask & pred, const BinaryMask & gt, int tolerance)
{
  require_same_shape(pred, gt, "boundary_f");
  if (tolerance < 0) {
    throw ValidationError("boundary_f: tolerance must be >= 0");
  }
  const BinaryMask pb = boundary_map(pred);
  const BinaryMask gb = boundary_map(gt);
  const CountTable pt(pb);
  const CountTable gt_table(gb);

  const auto [p_hit, p_total] = match_boundary(pb, gt_table, tolerance);
  const auto [g_hit, g_total] = match_boundary(gb, pt, tolerance);
  if (p_total == 0 && g_total == 0) return 1.0;
  if (p_total == 0 || g_total == 0) return 0.0;

  const double precision = static_cast<double>(p_hit) / static_cast<double>(p_total);
  const double recall = static_cast<double>(g_hit) / static_cast<double>(g_total);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

int ToleranceRule::pixels(int width, int height) const
{
  if (fixed_pixels) return *fixed_pixels;
  const double diag = std::sqrt(static_cast<double>(width) * width + static_cast<double>(height) * height);
  return std::max(1, static_cast<int>(std::lround(diagonal_fraction * diag)));
}

double jf_score(double j, double f) { return (j + f) / 2.0; }

EvalResult evaluate(const PredictionSource & pred, const PredictionSource & gt, const ToleranceRule & rule)
{
  std::vector<std::string> missing;
  for (const auto & [video, exps] : gt.masks) {
    for (const auto & [exp, seq] : exps) {
      auto v = pred.masks.find(video);
      if (v == pred.masks.end() || v->second.find(exp) == v->second.end()) {
        missing.push_back(video + "/" + exp);
      } else if (v->second.at(exp).size() != seq.size()) {
        missing.push_back(
          video + "/" + exp + " (" + std::to_string(v->second.at(exp).size()) + " of " +
          std::to_string(seq.size()) + " frames)");
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "predictions '" << pred.source_id << "' are missing:";
    for (const auto & m : missing) msg << ' ' << m;
    throw ValidationError(msg.str());
  }

  EvalResult result;
  for (const auto & [video, exps] : gt.masks) {
    for (const auto & [exp, gt_seq] : exps) {
      const auto & pred_seq = pred.masks.at(video).at(exp);
      if (gt_seq.empty()) {
        throw ValidationError("ground truth " + video + "/" + exp + " has no frames");
      }
      SequenceScore score{video, exp, static_cast<int>(gt_seq.size()), 0.0, 0.0};
      score.j = jaccard(pred_seq, gt_seq);
      double f_sum = 0.0;
      for (std::size_t i = 0; i < gt_seq.size(); ++i) {
        f_sum += boundary_f(pred_seq[i], gt_seq[i], rule.pixels(gt_seq[i].width, gt_seq[i].height));
      }
      score.f = f_sum / static_cast<double>(gt_seq.size());
      result.sequences.push_back(std::move(score));
    }
  }
  if (result.sequences.empty()) {
    throw ValidationError("ground truth '" + gt.source_id + "' has no sequences");
  }
  for (const SequenceScore & s : result.sequences) {
    result.j += s.j;
    result.f += s.f;
  }
  result.j /= static_cast<double>(result.sequences.size());
  result.f /= static_cast<double>(result.sequences.size());
  result.jf = jf_score(result.j, result.f);
  return result;
}

std::string format_report(const EvalResult & result)
{
  std::size_t width = 8;
  for (const SequenceScore & s : result.sequences) {
    width = std::max(width, s.video_id.size() + s.exp_id.size() + 1);
  }
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %7s %7s %7s %6s\n", static_cast<int>(width), "sequence", "J&F", "J", "F", "frames");
  out << line;
  for (const SequenceScore & s : result.sequences) {
    const std::string name = s.video_id + "/" + s.exp_id;
    std::snprintf(
      line, sizeof line, "%-*s %7.2f %7.2f %7.2f %6d\n", static_cast<int>(width), name.c_str(),
      100.0 * jf_score(s.j, s.f), 100.0 * s.j, 100.0 * s.f, s.frames);
    out << line;
  }
  std::snprintf(
    line, sizeof line, "%-*s %7.2f %7.2f %7.2f %6zu\n", static_cast<int>(width), "mean",
    100.0 * result.jf, 100.0 * result.j, 100.0 * result.f, result.sequences.size());
  out << line;
  return out.str();
}

std::string report_to_json(const EvalResult & result)
{
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["J"] = result.j;
  doc["F"] = result.f;
  doc["JF"] = result.jf;
  auto & seqs = doc["sequences"] = nlohmann::ordered_json::array();
  for (const SequenceScore & s : result.sequences) {
    seqs.push_back({{"video_id", s.video_id}, {"exp_id", s.exp_id}, {"frames", s.frames},
                    {"J", s.j}, {"F", s.f}, {"JF", jf_score(s.j, s.f)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace segaug
