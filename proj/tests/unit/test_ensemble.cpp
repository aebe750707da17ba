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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "segaug/ensemble.hpp"
#include "segaug/error.hpp"
#include "segaug/mask_io.hpp"

using namespace segaug;
using namespace segaug::testing;

namespace
{

BinaryMask row(std::initializer_list<int> bits)
{
  BinaryMask m(static_cast<int>(bits.size()), 1);
  int i = 0;
  for (int b : bits) m.bits[i++] = static_cast<std::uint8_t>(b);
  return m;
}

BinaryMask vote(const std::vector<BinaryMask> & masks, const std::vector<double> & weights, double thr = 0.5)
{
  std::vector<WeightedMask> in;
  for (std::size_t i = 0; i < masks.size(); ++i) in.push_back({&masks[i], weights[i]});
  return selective_average(in, thr);
}

PredictionSource source(const std::string & id, std::vector<BinaryMask> frames)
{
  PredictionSource s;
  s.source_id = id;
  s.masks["vid"]["0"] = std::move(frames);
  return s;
}

}  // namespace

TEST_CASE("selective_average: an exact half is background")
{
  const std::vector<BinaryMask> m = {row({1, 1, 0}), row({1, 0, 0})};
  CHECK(vote(m, {1, 1}) == row({1, 0, 0}));
}

TEST_CASE("selective_average: two of three equal votes carry a pixel")
{
  const std::vector<BinaryMask> m = {row({1, 1, 0, 0}), row({1, 0, 1, 0}), row({0, 1, 1, 0})};
  CHECK(vote(m, {1, 1, 1}) == row({1, 1, 1, 0}));
}

TEST_CASE("selective_average: a single source is returned unchanged")
{
  std::mt19937_64 rng(1);
  const BinaryMask m = random_mask(rng, 9, 7);
  CHECK(vote({m}, {2.5}) == m);
}

TEST_CASE("selective_average: unanimity and identical inputs")
{
  std::mt19937_64 rng(2);
  const BinaryMask m = random_mask(rng, 11, 5);
  CHECK(vote({m, m, m}, {0.3, 1.7, 4}) == m);
  const BinaryMask zero(11, 5);
  CHECK(vote({zero, zero}, {1, 2}) == zero);
}

TEST_CASE("selective_average: decimal weights tie exactly")
{
  // 0.1 + 0.2 against 0.3: equal in exact arithmetic, not in binary floating point.
  const std::vector<BinaryMask> m = {row({1, 0}), row({1, 0}), row({0, 1})};
  CHECK(vote(m, {0.1, 0.2, 0.3}) == row({0, 0}));
  CHECK(vote(m, {0.1, 0.2, 0.29}) == row({1, 0}));
}

TEST_CASE("selective_average: matches the integer oracle on random instances")
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<BinaryMask> masks;
    std::vector<std::int64_t> iw;
    std::vector<double> dw;
    for (int i = 0; i < k; ++i) {
      masks.push_back(random_mask(rng, 6, 5));
      iw.push_back(1 + static_cast<std::int64_t>(rng() % 5));
      dw.push_back(static_cast<double>(iw.back()));
    }
    CHECK(vote(masks, dw) == oracle::integer_vote(masks, iw));
  }
}

TEST_CASE("selective_average: scaling every weight leaves the result unchanged")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BinaryMask> masks;
    std::vector<double> w;
    std::vector<double> w10;
    for (int i = 0; i < 4; ++i) {
      masks.push_back(random_mask(rng, 5, 5));
      w.push_back(0.5 * (1 + static_cast<int>(rng() % 6)));
      w10.push_back(w.back() * 10);
    }
    CHECK(vote(masks, w) == vote(masks, w10));
  }
}

TEST_CASE("selective_average: adding foreground to one input never removes foreground")
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BinaryMask> masks;
    std::vector<double> w;
    for (int i = 0; i < 3; ++i) {
      masks.push_back(random_mask(rng, 6, 4));
      w.push_back(1.0 + static_cast<double>(rng() % 3));
    }
    const BinaryMask before = vote(masks, w);
    for (auto & b : masks[0].bits) b = b || (rng() % 3 == 0);
    const BinaryMask after = vote(masks, w);
    for (std::size_t p = 0; p < before.size(); ++p) CHECK(after.bits[p] >= before.bits[p]);
  }
}

TEST_CASE("selective_average: irregular weights agree with the long double oracle")
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BinaryMask> masks;
    std::vector<double> w;
    for (int i = 0; i < 5; ++i) {
      masks.push_back(random_mask(rng, 4, 4));
      w.push_back(u(rng));
    }
    CHECK(vote(masks, w) == oracle::real_vote(masks, w));
  }
}

TEST_CASE("selective_average: zero weights drop out")
{
  const std::vector<BinaryMask> m = {row({1, 0}), row({0, 1})};
  CHECK(vote(m, {1, 0}) == row({1, 0}));
}

TEST_CASE("selective_average: invalid inputs")
{
  const std::vector<BinaryMask> m = {row({1, 0}), row({0, 1, 1})};
  CHECK_THROWS_AS(vote(m, {1, 1}), ValidationError);
  CHECK_THROWS_AS(vote({row({1})}, {-1}), ValidationError);
  CHECK_THROWS_AS(vote({row({1})}, {0}), ValidationError);
  CHECK_THROWS_AS(vote({row({1})}, {1}, 1.0), ValidationError);
  CHECK_THROWS_AS(selective_average({}), ValidationError);
}

TEST_CASE("ensemble_run: fuses configured sources frame by frame")
{
  const std::vector<PredictionSource> sources = {
    source("a", {row({1, 1, 0}), row({0, 0, 1})}),
    source("b", {row({1, 0, 0}), row({0, 1, 1})}),
    source("c", {row({0, 1, 1}), row({1, 1, 1})}),
    source("unused", {row({0, 0, 0}), row({0, 0, 0})}),
  };
  WeightConfig cfg;
  cfg.entries = {{"a", 1}, {"b", 1}, {"c", 1}};
  const PredictionSource out = ensemble_run(sources, cfg, "fused");
  CHECK(out.source_id == "fused");
  const auto & seq = out.masks.at("vid").at("0");
  REQUIRE(seq.size() == 2);
  CHECK(seq[0] == row({1, 1, 0}));
  CHECK(seq[1] == row({0, 1, 1}));
}

TEST_CASE("ensemble_run: configuration errors")
{
  const std::vector<PredictionSource> sources = {
    source("a", {row({1})}),
    source("b", {row({1}), row({0})}),
  };
  WeightConfig unknown;
  unknown.entries = {{"a", 1}, {"zzz", 1}};
  CHECK_THROWS_AS(ensemble_run(sources, unknown), ValidationError);

  WeightConfig mismatch;
  mismatch.entries = {{"a", 1}, {"b", 1}};
  CHECK_THROWS_AS(ensemble_run(sources, mismatch), ValidationError);

  PredictionSource other = source("c", {row({1})});
  other.masks["vid2"]["0"] = {row({1})};
  WeightConfig keys;
  keys.entries = {{"a", 1}, {"c", 1}};
  try {
    (void)ensemble_run(std::vector<PredictionSource>{sources[0], other}, keys);
    FAIL("expected a key-space error");
  } catch (const ValidationError & e) {
    CHECK(std::string(e.what()).find("vid2") != std::string::npos);
  }
}

TEST_CASE("ensemble_run: zero-weight sources need not share the key space")
{
  PredictionSource other = source("c", {row({0})});
  other.masks["vid2"]["0"] = {row({1})};
  WeightConfig cfg;
  cfg.entries = {{"a", 1}, {"c", 0}};
  const PredictionSource out = ensemble_run(std::vector<PredictionSource>{source("a", {row({1})}), other}, cfg);
  CHECK(out.masks.size() == 1);
  CHECK(out.masks.at("vid").at("0")[0] == row({1}));
}

TEST_CASE("weight configs shipped with the project load and validate")
{
  const std::filesystem::path dir = std::filesystem::path(SEGAUG_DATA_DIR) / "weights";
  int count = 0;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const WeightConfig cfg = load_weight_config(entry.path());
    CHECK_NOTHROW(validate_weights(cfg));
    CHECK(cfg.threshold == 0.5);
    ++count;
  }
  CHECK(count == 7);

  const WeightConfig best = load_weight_config(dir / "best.json");
  CHECK(best.entries.at("14B/uniform") == 2.0);
  CHECK(best.entries.at("14B/uniform_plus") == 2.5);
  CHECK(best.entries.at("26B_norefimg/wrap_around") == 2.0);
}
