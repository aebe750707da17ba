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

// Line-protocol worker serving the stub segmenter over stdin/stdout.
//
//   segaug_stub_worker [--seed N] [--tag T] [--out-dir DIR] [--fault error|garbage]
//
// --fault makes every decode request fail, for exercising error paths.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <unistd.h>

#include "json.hpp"
#include "segaug/base64.hpp"
#include "segaug/mask_io.hpp"
#include "segaug/segmenter.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace
{

std::string hex_of(const std::string & bytes)
{
  static const char * digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

}  // namespace

int main(int argc, char ** argv)
{
  std::uint64_t seed = 0;
  std::string tag = "stub";
  fs::path out_dir = fs::temp_directory_path() / ("segaug_worker_" + std::to_string(::getpid()));
  std::string fault;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (key == "--tag") tag = argv[i + 1];
    else if (key == "--out-dir") out_dir = argv[i + 1];
    else if (key == "--fault") fault = argv[i + 1];
  }

  segaug::StubBackend stub(seed, tag);
  std::string line;
  std::size_t counter = 0;
  while (std::getline(std::cin, line)) {
    Json reply;
    try {
      const Json req = Json::parse(line);
      const std::string kind = req.at("kind").get<std::string>();
      if (kind == "hello") {
        reply = {{"identity", stub.identity() + "/worker"}, {"supports_tail_propagation", false}};
      } else if (kind == "prompt") {
        const int clip = req.at("clip_index").get<int>();
        reply = {{"prompt_b64", segaug::base64_encode(segaug::StubBackend::prompt_payload(req.at("expression").get<std::string>(), clip))}};
      } else if (kind == "decode") {
        if (fault == "garbage") {
          std::cout << "this is not json\n" << std::flush;
          continue;
        }
        if (fault == "error") {
          reply = {{"error", "injected failure"}};
        } else {
          const segaug::StreamContext ctx{
            req.at("video_id").get<std::string>(), req.at("exp_id").get<std::string>(),
            req.at("expression").get<std::string>()};
          const segaug::SegPrompt prompt{
            req.at("clip_index").get<int>(), segaug::base64_decode(req.at("prompt_b64").get<std::string>())};
          const int w = req.at("width").get<int>();
          const int h = req.at("height").get<int>();
          std::vector<segaug::Frame> frames;
          for (int idx : req.at("frame_indices").get<std::vector<int>>()) {
            segaug::Frame f;
            f.index = idx;
            f.image = segaug::RgbImage(w, h);
            frames.push_back(std::move(f));
          }
          const auto masks = stub.decode(ctx, frames, prompt, req.value("propagate", false));
          Json paths = Json::array();
          for (std::size_t k = 0; k < masks.size(); ++k) {
            const fs::path p = out_dir / (hex_of(ctx.video_id) + "_" + std::to_string(counter++) + ".png");
            segaug::write_soft_mask_png(p, masks[k]);
            paths.push_back(p.string());
          }
          reply = {{"mask_paths", paths}};
        }
      } else {
        reply = {{"error", "unknown request kind '" + kind + "'"}};
      }
    } catch (const std::exception & e) {
      reply = {{"error", e.what()}};
    }
    std::cout << reply.dump() << "\n" << std::flush;
  }
  return 0;
}
