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
#include "segaug/error.hpp"
#include "segaug/mask_io.hpp"
#include "segaug/sampling.hpp"

using namespace segaug;
using namespace segaug::testing;

namespace
{

std::string error_of(const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("rle: worked examples both ways")
{
  BinaryMask zero(2, 2);
  BinaryMask one(2, 2);
  std::fill(one.bits.begin(), one.bits.end(), 1);
  BinaryMask centre(3, 3);
  centre.at(1, 1) = 1;

  CHECK(rle_encode(zero).counts == std::vector<std::uint32_t>{4});
  CHECK(rle_encode(one).counts == std::vector<std::uint32_t>{0, 4});
  CHECK(rle_encode(centre).counts == std::vector<std::uint32_t>{4, 1, 4});
  CHECK(rle_decode({2, 2, {4}}) == zero);
  CHECK(rle_decode({2, 2, {0, 4}}) == one);
  CHECK(rle_decode({3, 3, {4, 1, 4}}) == centre);
}

TEST_CASE("rle: order is column-major")
{
  BinaryMask m(3, 2);
  m.at(0, 1) = 1;  // column 1, row 0 -> position 2
  CHECK(rle_encode(m).counts == std::vector<std::uint32_t>{2, 1, 3});
}

TEST_CASE("rle: sums must match the raster")
{
  CHECK_THROWS_AS(rle_decode({2, 2, {3}}), ValidationError);
  CHECK_THROWS_AS(rle_decode({2, 2, {2, 3}}), ValidationError);
}

TEST_CASE("rle: random masks round-trip")
{
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 20);
    const int h = 1 + static_cast<int>(rng() % 20);
    const BinaryMask m = trial % 2 ? random_mask(rng, w, h, 0.1 * (trial % 10)) : random_blobs(rng, w, h);
    const RleMask r = rle_encode(m);
    std::uint64_t sum = 0;
    for (auto c : r.counts) sum += c;
    CHECK(sum == m.size());
    CHECK(rle_decode(r) == m);
  }
}

TEST_CASE("rle files round-trip")
{
  TempDir tmp;
  std::mt19937_64 rng(2);
  std::vector<BinaryMask> masks;
  for (int i = 0; i < 5; ++i) masks.push_back(random_blobs(rng, 13, 9));
  save_rle_masks(tmp.path() / "seq.rle.json", masks);
  CHECK(load_rle_masks(tmp.path() / "seq.rle.json") == masks);
}

TEST_CASE("png: rgb and mask images round-trip")
{
  TempDir tmp;
  std::mt19937_64 rng(3);
  const RgbImage img = random_image(rng, 17, 11);
  write_rgb_png(tmp.path() / "a.png", img);
  CHECK(read_rgb_png(tmp.path() / "a.png") == img);

  const BinaryMask m = random_blobs(rng, 17, 11);
  write_mask_png(tmp.path() / "m.png", m);
  CHECK(read_mask_png(tmp.path() / "m.png") == m);

  SoftMask s(4, 1);
  s.values = {0.0F, 0.25F, 0.5F, 1.0F};
  write_soft_mask_png(tmp.path() / "s.png", s);
  const SoftMask back = read_soft_mask_png(tmp.path() / "s.png");
  for (std::size_t i = 0; i < 4; ++i) CHECK(back.values[i] == doctest::Approx(s.values[i]).epsilon(0.003));
  CHECK_THROWS_AS(read_mask_png(tmp.path() / "s.png"), ValidationError);
  CHECK_THROWS_AS(read_rgb_png(tmp.path() / "missing.png"), IoError);
}

TEST_CASE("manifest: minimal document round-trips")
{
  Manifest m;
  ManifestVideo v;
  v.meta = make_meta(1, 4, 3, "v0");
  v.meta.frame_uris = {"v0/00000.png"};
  v.expressions = {{"0", "the cat"}};
  m.videos.push_back(v);
  const Manifest back = manifest_from_text(manifest_to_text(m));
  CHECK(back == m);
  CHECK(back.videos[0].meta == v.meta);
}

TEST_CASE("manifest: random documents round-trip")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    Manifest m;
    const int nv = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < nv; ++i) {
      ManifestVideo v;
      v.meta = make_meta(1 + static_cast<int>(rng() % 30), 1 + static_cast<int>(rng() % 50),
                         1 + static_cast<int>(rng() % 50), "video_" + std::to_string(i));
      v.meta.frame_uris.clear();
      for (int f = 0; f < v.meta.num_frames; ++f) v.meta.frame_uris.push_back("f/" + std::to_string(rng()) + ".png");
      const int ne = 1 + static_cast<int>(rng() % 3);
      for (int e = 0; e < ne; ++e) v.expressions.push_back({std::to_string(e), "obj \"" + std::to_string(rng()) + "\" ü"});
      m.videos.push_back(v);
    }
    CHECK(manifest_from_text(manifest_to_text(m)) == m);
  }
}

TEST_CASE("manifest: schema errors name the origin and the field")
{
  const std::string missing = error_of([] {
    (void)manifest_from_text(
      R"({"schema_version":1,"videos":[{"video_id":"a","width":4,"frames":["x.png"],"expressions":[]}]})",
      "m.json");
  });
  CHECK(missing.find("m.json") != std::string::npos);
  CHECK(missing.find("$.videos[0].height") != std::string::npos);

  const std::string version = error_of([] { (void)manifest_from_text(R"({"schema_version":2,"videos":[]})"); });
  CHECK(version.find("schema_version") != std::string::npos);

  const std::string type = error_of([] {
    (void)manifest_from_text(
      R"({"schema_version":1,"videos":[{"video_id":"a","width":"4","height":3,"frames":["x.png"],"expressions":[]}]})");
  });
  CHECK(type.find("$.videos[0].width") != std::string::npos);

  CHECK_THROWS_AS(manifest_from_text("{not json"), ValidationError);
}

TEST_CASE("plan documents round-trip for every strategy")
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 150);
    const VideoMeta meta = make_meta(t);
    std::vector<double> scores(t);
    for (double & s : scores) s = static_cast<double>(rng() % 1000) / 7.0;
    const Strategy s = kAllStrategies[trial % std::size(kAllStrategies)];
    const int n = 1 + static_cast<int>(rng() % 12);
    const int g = 1 + static_cast<int>(rng() % 3);
    const PlanDocument doc{"v", "e" + std::to_string(trial), make_plan(s, meta, n, g * g + 1, scores)};
    CHECK(plan_from_text(plan_to_text(doc)) == doc);
  }
}

TEST_CASE("plan documents are validated on load")
{
  const PlanDocument doc{"v", "0", plan_uniform(make_meta(23), 2, 5)};
  std::string text = plan_to_text(doc);
  const auto pos = text.find("\"clip_len\": 5");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 13, "\"clip_len\": 6");
  CHECK_THROWS_AS(plan_from_text(text), ValidationError);
}

TEST_CASE("weight configs: parse, round-trip, reject bad values")
{
  const WeightConfig cfg = weight_config_from_text(
    R"({"schema_version":1,"threshold":0.5,"weights":{"14B/uniform":2,"26B/uniform_plus":1.5}})");
  CHECK(cfg.entries.size() == 2);
  CHECK(cfg.entries.at("14B/uniform") == 2.0);
  const WeightConfig back = weight_config_from_text(weight_config_to_text(cfg));
  CHECK(back.entries == cfg.entries);
  CHECK(back.threshold == cfg.threshold);

  CHECK_THROWS_AS(weight_config_from_text(R"({"schema_version":1,"weights":{"a":-1}})"), ValidationError);
  CHECK_THROWS_AS(weight_config_from_text(R"({"schema_version":1,"weights":{"a":"x"}})"), ValidationError);
  CHECK_THROWS_AS(weight_config_from_text(R"({"schema_version":1,"weights":{}})"), ValidationError);
}

TEST_CASE("prediction sources round-trip in both mask formats")
{
  std::mt19937_64 rng(6);
  PredictionSource src;
  src.source_id = "s";
  src.masks["v1"]["0"] = {random_blobs(rng, 9, 7), random_blobs(rng, 9, 7)};
  src.masks["v1"]["1"] = {random_blobs(rng, 9, 7)};
  src.masks["v2"]["0"] = {random_blobs(rng, 5, 5), random_blobs(rng, 5, 5), random_blobs(rng, 5, 5)};
  for (MaskFormat fmt : {MaskFormat::Png, MaskFormat::Rle}) {
    TempDir tmp;
    write_prediction_source(tmp.path(), src, fmt);
    CHECK(read_prediction_source(tmp.path(), "s") == src);
    CHECK(read_sequence(tmp.path(), "v2", "0") == src.masks["v2"]["0"]);
  }
  CHECK(frame_file_name(42) == "00042.png");
}

TEST_CASE("prediction sources: gaps in frame numbering are rejected")
{
  TempDir tmp;
  BinaryMask m(3, 3);
  write_mask_png(tmp.path() / "v" / "0" / "00000.png", m);
  write_mask_png(tmp.path() / "v" / "0" / "00002.png", m);
  CHECK_THROWS_AS(read_prediction_source(tmp.path(), "s"), ValidationError);
}
