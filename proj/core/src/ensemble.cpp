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

#include "segaug/ensemble.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>

#include "segaug/error.hpp"

namespace segaug
{
namespace
{

__extension__ typedef __int128 Wide;

// Pixel rule: foreground iff (sum of active weights) * lhs > rhs_total.
struct VoteRule
{
  std::vector<Wide> weights;
  Wide lhs = 1;
  Wide rhs_total = 0;
  // Used only when neither exact route fits in 128 bits.
  bool inexact = false;
  std::vector<double> fweights;
  double fthreshold_total = 0.0;
};

int bit_width(Wide v)
{
  int bits = 0;
  while (v > 0) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

// w = value / 10^places exactly (within representation error), or nullopt.
std::optional<std::pair<std::int64_t, int>> as_decimal(double w)
{
  double scale = 1.0;
  for (int places = 0; places <= 9; ++places, scale *= 10.0) {
    const double s = w * scale;
    if (s > 9.0e15) {
      return std::nullopt;
    }
    const double r = std::round(s);
    if (std::fabs(s - r) <= 1e-9 * std::max(1.0, s)) {
      return std::make_pair(static_cast<std::int64_t>(r), places);
    }
  }
  return std::nullopt;
}

Wide pow10(int n)
{
  Wide v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

bool fits(const VoteRule & rule)
{
  Wide total = 0;
  for (Wide w : rule.weights) total += w;
  // Leave headroom for the two products below.
  return bit_width(total) + bit_width(rule.lhs) <= 124 &&
         bit_width(total) + bit_width(rule.rhs_total) <= 124;
}

std::optional<VoteRule> decimal_rule(std::span<const double> weights, double threshold)
{
  std::vector<std::pair<std::int64_t, int>> dec;
  int places = 0;
  for (double w : weights) {
    auto d = as_decimal(w);
    if (!d) return std::nullopt;
    places = std::max(places, d->second);
    dec.push_back(*d);
  }
  const auto t = as_decimal(threshold);
  if (!t) return std::nullopt;

  VoteRule rule;
  Wide total = 0;
  for (const auto & [value, p] : dec) {
    rule.weights.push_back(static_cast<Wide>(value) * pow10(places - p));
    total += rule.weights.back();
  }
  // num / total > t_value / 10^t_places  <=>  num * 10^t_places > t_value * total
  rule.lhs = pow10(t->second);
  rule.rhs_total = static_cast<Wide>(t->first);
  if (bit_width(total) > 100 || !fits(rule)) return std::nullopt;
  rule.rhs_total *= total;
  return rule;
}

// Exact binary expansion: w = mantissa * 2^exponent.
std::pair<std::int64_t, int> as_dyadic(double w)
{
  int e = 0;
  const double frac = std::frexp(w, &e);
  auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
  e -= 53;
  while (m != 0 && (m & 1) == 0) {
    m >>= 1;
    ++e;
  }
  return {m, e};
}

std::optional<VoteRule> dyadic_rule(std::span<const double> weights, double threshold)
{
  std::vector<std::pair<std::int64_t, int>> dy;
  int min_e = 0;
  bool first = true;
  for (double w : weights) {
    if (w == 0.0) {
      dy.emplace_back(0, 0);
      continue;
    }
    dy.push_back(as_dyadic(w));
    min_e = first ? dy.back().second : std::min(min_e, dy.back().second);
    first = false;
  }
  VoteRule rule;
  Wide total = 0;
  for (const auto & [m, e] : dy) {
    const int shift = m == 0 ? 0 : e - min_e;
    if (shift > 64) return std::nullopt;
    rule.weights.push_back(static_cast<Wide>(m) << shift);
    total += rule.weights.back();
  }
  const auto [tm, te] = as_dyadic(threshold);
  // threshold = tm * 2^te with te < 0 for thresholds below 1.
  if (te >= 0 || -te > 60) return std::nullopt;
  rule.lhs = static_cast<Wide>(1) << (-te);
  rule.rhs_total = static_cast<Wide>(tm);
  if (bit_width(total) > 100 || !fits(rule)) return std::nullopt;
  rule.rhs_total *= total;
  return rule;
}

VoteRule make_rule(std::span<const double> weights, double threshold)
{
  if (auto r = decimal_rule(weights, threshold)) return *r;
  if (auto r = dyadic_rule(weights, threshold)) return *r;
  VoteRule rule;
  rule.inexact = true;
  rule.fweights.assign(weights.begin(), weights.end());
  double total = 0.0;
  for (double w : weights) total += w;
  rule.fthreshold_total = threshold * total;
  return rule;
}

void check_inputs(std::span<const WeightedMask> inputs, double threshold)
{
  if (inputs.empty()) {
    throw ValidationError("selective_average: no inputs");
  }
  if (!std::isfinite(threshold) || threshold <= 0.0 || threshold >= 1.0) {
    throw ValidationError("selective_average: threshold must lie in (0,1)");
  }
  const BinaryMask & ref = *inputs.front().mask;
  double total = 0.0;
  for (const WeightedMask & in : inputs) {
    if (in.mask->width != ref.width || in.mask->height != ref.height ||
        in.mask->bits.size() != ref.bits.size()) {
      throw ValidationError(
        "selective_average: mask dimensions differ (" + std::to_string(in.mask->width) + "x" +
        std::to_string(in.mask->height) + " vs " + std::to_string(ref.width) + "x" +
        std::to_string(ref.height) + ")");
    }
    if (!std::isfinite(in.weight) || in.weight < 0.0) {
      throw ValidationError("selective_average: weights must be finite and non-negative");
    }
    total += in.weight;
  }
  if (!(total > 0.0)) {
    throw ValidationError("selective_average: all weights are zero");
  }
}

}  // namespace

BinaryMask selective_average(std::span<const WeightedMask> inputs, double threshold)
{
  check_inputs(inputs, threshold);

  std::vector<const BinaryMask *> masks;
  std::vector<double> weights;
  for (const WeightedMask & in : inputs) {
    if (in.weight > 0.0) {
      masks.push_back(in.mask);
      weights.push_back(in.weight);
    }
  }
  const VoteRule rule = make_rule(weights, threshold);

  const BinaryMask & ref = *inputs.front().mask;
  BinaryMask out(ref.width, ref.height);
  const std::size_t n = ref.bits.size();
  if (rule.inexact) {
    for (std::size_t p = 0; p < n; ++p) {
      double num = 0.0;
      for (std::size_t s = 0; s < masks.size(); ++s) {
        if (masks[s]->bits[p] != 0) num += rule.fweights[s];
      }
      out.bits[p] = num > rule.fthreshold_total ? 1 : 0;
    }
    return out;
  }
  for (std::size_t p = 0; p < n; ++p) {
    Wide num = 0;
    for (std::size_t s = 0; s < masks.size(); ++s) {
      if (masks[s]->bits[p] != 0) num += rule.weights[s];
    }
    out.bits[p] = num * rule.lhs > rule.rhs_total ? 1 : 0;
  }
  return out;
}

PredictionSource ensemble_run(
  std::span<const PredictionSource> sources, const WeightConfig & config,
  const std::string & output_id)
{
  validate_weights(config);

  std::vector<const PredictionSource *> active;
  std::vector<double> weights;
  for (const auto & [id, w] : config.entries) {
    const PredictionSource * found = nullptr;
    for (const PredictionSource & s : sources) {
      if (s.source_id == id) {
        found = &s;
        break;
      }
    }
    if (found == nullptr) {
      throw ValidationError("weight config names unknown source '" + id + "'");
    }
    if (w > 0.0) {
      active.push_back(found);
      weights.push_back(w);
    }
  }

  std::set<std::pair<std::string, std::string>> keys;
  for (const PredictionSource * s : active) {
    for (const auto & [video, exps] : s->masks) {
      for (const auto & [exp, seq] : exps) keys.emplace(video, exp);
    }
  }

  std::vector<std::string> problems;
  for (const auto & [video, exp] : keys) {
    std::size_t length = 0;
    bool have_length = false;
    for (const PredictionSource * s : active) {
      auto v = s->masks.find(video);
      if (v == s->masks.end() || v->second.find(exp) == v->second.end()) {
        problems.push_back("source '" + s->source_id + "' is missing " + video + "/" + exp);
        continue;
      }
      const std::size_t len = v->second.at(exp).size();
      if (have_length && len != length) {
        problems.push_back(
          "source '" + s->source_id + "' has " + std::to_string(len) + " frames for " + video +
          "/" + exp + ", expected " + std::to_string(length));
      }
      if (!have_length) {
        length = len;
        have_length = true;
      }
    }
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "ensemble key-space mismatch:";
    for (const auto & p : problems) msg << "\n  " << p;
    throw ValidationError(msg.str());
  }

  PredictionSource out;
  out.source_id = output_id;
  std::vector<WeightedMask> frame_inputs(active.size());
  for (const auto & [video, exp] : keys) {
    const std::size_t length = active.front()->masks.at(video).at(exp).size();
    std::vector<BinaryMask> fused;
    fused.reserve(length);
    for (std::size_t f = 0; f < length; ++f) {
      for (std::size_t s = 0; s < active.size(); ++s) {
        frame_inputs[s] = {&active[s]->masks.at(video).at(exp)[f], weights[s]};
      }
      fused.push_back(selective_average(frame_inputs, config.threshold));
    }
    out.masks[video][exp] = std::move(fused);
  }
  return out;
}

}  // namespace segaug
