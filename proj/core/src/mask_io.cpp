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

#include "segaug/mask_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "segaug/error.hpp"

namespace segaug
{
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace
{

[[noreturn]] void schema_error(const std::string & origin, const std::string & where, const std::string & what)
{
  throw ValidationError(origin + ": " + where + ": " + what);
}

Json parse_document(std::string_view text, const std::string & origin)
{
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error & e) {
    throw ValidationError(origin + ": not valid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    schema_error(origin, "$", "expected an object");
  }
  if (!doc.contains("schema_version")) {
    schema_error(origin, "$.schema_version", "missing");
  }
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion) {
    schema_error(origin, "$.schema_version", "unsupported version (expected 1)");
  }
  return doc;
}

const Json & member(const Json & obj, const char * key, const std::string & origin, const std::string & where)
{
  if (!obj.is_object()) schema_error(origin, where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(origin, where + "." + key, "missing");
  return *it;
}

std::string get_string(const Json & obj, const char * key, const std::string & origin, const std::string & where)
{
  const Json & v = member(obj, key, origin, where);
  if (!v.is_string()) schema_error(origin, where + "." + key, "expected a string");
  return v.get<std::string>();
}

int get_int(const Json & obj, const char * key, const std::string & origin, const std::string & where)
{
  const Json & v = member(obj, key, origin, where);
  if (!v.is_number_integer()) schema_error(origin, where + "." + key, "expected an integer");
  const auto raw = v.get<long long>();
  if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max()) {
    schema_error(origin, where + "." + key, "integer out of range");
  }
  return static_cast<int>(raw);
}

bool get_bool(const Json & obj, const char * key, const std::string & origin, const std::string & where)
{
  const Json & v = member(obj, key, origin, where);
  if (!v.is_boolean()) schema_error(origin, where + "." + key, "expected a boolean");
  return v.get<bool>();
}

double get_number(const Json & v, const std::string & origin, const std::string & where)
{
  if (!v.is_number()) schema_error(origin, where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(origin, where, "expected a finite number");
  return d;
}

std::vector<int> get_int_array(const Json & v, const std::string & origin, const std::string & where)
{
  if (!v.is_array()) schema_error(origin, where, "expected an array");
  std::vector<int> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      schema_error(origin, where + "[" + std::to_string(i) + "]", "expected an integer");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

std::vector<double> get_number_array(const Json & v, const std::string & origin, const std::string & where)
{
  if (!v.is_array()) schema_error(origin, where, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], origin, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void ensure_parent(const fs::path & path)
{
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
}

bool parse_frame_name(const std::string & name, int & index)
{
  if (name.size() < 5 || name.substr(name.size() - 4) != ".png") return false;
  const std::string digits = name.substr(0, name.size() - 4);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  index = std::stoi(digits);
  return true;
}

const std::string kRleSuffix = ".rle.json";

}  // namespace

std::string read_text_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text_file(const fs::path & path, std::string_view text)
{
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing " + path.string());
}

// ---------------------------------------------------------------------------

void save_rle_masks(const fs::path & path, const std::vector<BinaryMask> & masks)
{
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json arr = Json::array();
  for (const BinaryMask & m : masks) {
    const RleMask rle = rle_encode(m);
    arr.push_back({{"size", {rle.height, rle.width}}, {"counts", rle.counts}});
  }
  doc["masks"] = std::move(arr);
  write_text_file(path, doc.dump() + "\n");
}

std::vector<BinaryMask> load_rle_masks(const fs::path & path)
{
  const std::string origin = path.string();
  const Json doc = parse_document(read_text_file(path), origin);
  const Json & arr = member(doc, "masks", origin, "$");
  if (!arr.is_array()) schema_error(origin, "$.masks", "expected an array");
  std::vector<BinaryMask> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "$.masks[" + std::to_string(i) + "]";
    const std::vector<int> size = get_int_array(member(arr[i], "size", origin, where), origin, where + ".size");
    if (size.size() != 2 || size[0] < 0 || size[1] < 0) schema_error(origin, where + ".size", "expected [height, width]");
    RleMask rle{size[1], size[0], {}};
    for (int c : get_int_array(member(arr[i], "counts", origin, where), origin, where + ".counts")) {
      if (c < 0) schema_error(origin, where + ".counts", "negative run length");
      rle.counts.push_back(static_cast<std::uint32_t>(c));
    }
    try {
      out.push_back(rle_decode(rle));
    } catch (const ValidationError & e) {
      schema_error(origin, where, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

fs::path Manifest::frame_path(const VideoMeta & meta, int index) const
{
  const fs::path uri = meta.frame_uris.at(static_cast<std::size_t>(index));
  if (uri.is_absolute() || base_dir.empty()) return uri;
  return base_dir / uri;
}

std::string manifest_to_text(const Manifest & manifest)
{
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json videos = Json::array();
  for (const ManifestVideo & v : manifest.videos) {
    Json exps = Json::array();
    for (const Expression & e : v.expressions) exps.push_back({{"exp_id", e.exp_id}, {"text", e.text}});
    videos.push_back({{"video_id", v.meta.video_id},
                      {"num_frames", v.meta.num_frames},
                      {"width", v.meta.width},
                      {"height", v.meta.height},
                      {"frames", v.meta.frame_uris},
                      {"expressions", std::move(exps)}});
  }
  doc["videos"] = std::move(videos);
  return doc.dump(2) + "\n";
}

Manifest manifest_from_text(std::string_view text, const std::string & origin)
{
  const Json doc = parse_document(text, origin);
  const Json & videos = member(doc, "videos", origin, "$");
  if (!videos.is_array()) schema_error(origin, "$.videos", "expected an array");

  Manifest manifest;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    const std::string where = "$.videos[" + std::to_string(i) + "]";
    const Json & v = videos[i];
    ManifestVideo mv;
    mv.meta.video_id = get_string(v, "video_id", origin, where);
    mv.meta.width = get_int(v, "width", origin, where);
    mv.meta.height = get_int(v, "height", origin, where);
    const Json & frames = member(v, "frames", origin, where);
    if (!frames.is_array()) schema_error(origin, where + ".frames", "expected an array");
    for (std::size_t k = 0; k < frames.size(); ++k) {
      if (!frames[k].is_string()) {
        schema_error(origin, where + ".frames[" + std::to_string(k) + "]", "expected a string");
      }
      mv.meta.frame_uris.push_back(frames[k].get<std::string>());
    }
    mv.meta.num_frames = static_cast<int>(mv.meta.frame_uris.size());
    if (v.contains("num_frames") && get_int(v, "num_frames", origin, where) != mv.meta.num_frames) {
      schema_error(origin, where + ".num_frames", "does not match the length of frames");
    }
    try {
      validate_meta(mv.meta);
    } catch (const ValidationError & e) {
      schema_error(origin, where, e.what());
    }
    const Json & exps = member(v, "expressions", origin, where);
    if (!exps.is_array()) schema_error(origin, where + ".expressions", "expected an array");
    for (std::size_t k = 0; k < exps.size(); ++k) {
      const std::string ew = where + ".expressions[" + std::to_string(k) + "]";
      Expression e{get_string(exps[k], "exp_id", origin, ew), get_string(exps[k], "text", origin, ew)};
      if (e.exp_id.empty()) schema_error(origin, ew + ".exp_id", "must not be empty");
      for (const Expression & prev : mv.expressions) {
        if (prev.exp_id == e.exp_id) schema_error(origin, ew + ".exp_id", "duplicate '" + e.exp_id + "'");
      }
      mv.expressions.push_back(std::move(e));
    }
    for (const ManifestVideo & prev : manifest.videos) {
      if (prev.meta.video_id == mv.meta.video_id) {
        schema_error(origin, where + ".video_id", "duplicate '" + mv.meta.video_id + "'");
      }
    }
    manifest.videos.push_back(std::move(mv));
  }
  return manifest;
}

Manifest load_manifest(const fs::path & path)
{
  Manifest m = manifest_from_text(read_text_file(path), path.string());
  m.base_dir = path.parent_path();
  return m;
}

void save_manifest(const fs::path & path, const Manifest & manifest)
{
  write_text_file(path, manifest_to_text(manifest));
}

ScoreTable load_scores(const fs::path & path)
{
  const std::string origin = path.string();
  const Json doc = parse_document(read_text_file(path), origin);
  const Json & scores = member(doc, "scores", origin, "$");
  if (!scores.is_object()) schema_error(origin, "$.scores", "expected an object");
  ScoreTable table;
  for (const auto & [video, exps] : scores.items()) {
    if (!exps.is_object()) schema_error(origin, "$.scores." + video, "expected an object");
    for (const auto & [exp, list] : exps.items()) {
      table[video][exp] = get_number_array(list, origin, "$.scores." + video + "." + exp);
    }
  }
  return table;
}

void save_scores(const fs::path & path, const ScoreTable & scores)
{
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json s = Json::object();
  for (const auto & [video, exps] : scores) {
    for (const auto & [exp, list] : exps) s[video][exp] = list;
  }
  doc["scores"] = std::move(s);
  write_text_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

std::string plan_to_text(const PlanDocument & doc)
{
  const SamplingPlan & p = doc.plan;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["video_id"] = doc.video_id;
  j["exp_id"] = doc.exp_id;
  j["strategy"] = std::string(to_string(p.strategy));
  j["num_clips"] = p.num_clips;
  j["clip_len"] = p.clip_len;
  j["grid"] = p.grid;
  j["budget"] = p.budget;
  j["num_frames"] = p.num_frames;
  j["tail_propagation"] = p.tail_propagation;
  Json clips = Json::array();
  for (const ClipSpec & c : p.clips) {
    clips.push_back({{"clip_index", c.clip_index}, {"key_index", c.key_index()}, {"members", c.members}});
  }
  j["clips"] = std::move(clips);
  j["frame_tokens"] = p.frame_tokens;

  // One clip or frame entry per line keeps plan files readable and diffable.
  Json head = j;
  head.erase("clips");
  head.erase("frame_tokens");
  std::string text = head.dump(2);
  text.pop_back();  // closing brace
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  text += ",\n  \"clips\": [";
  for (std::size_t i = 0; i < j["clips"].size(); ++i) {
    text += (i == 0 ? "\n    " : ",\n    ") + j["clips"][i].dump();
  }
  text += "\n  ],\n  \"frame_tokens\": [";
  for (std::size_t i = 0; i < p.frame_tokens.size(); ++i) {
    text += (i == 0 ? "\n    " : ",\n    ") + j["frame_tokens"][i].dump();
  }
  text += "\n  ]\n}\n";
  return text;
}

PlanDocument plan_from_text(std::string_view text, const std::string & origin)
{
  const Json j = parse_document(text, origin);
  PlanDocument doc;
  doc.video_id = get_string(j, "video_id", origin, "$");
  doc.exp_id = get_string(j, "exp_id", origin, "$");
  const std::string strategy = get_string(j, "strategy", origin, "$");
  const auto parsed = parse_strategy(strategy);
  if (!parsed) schema_error(origin, "$.strategy", "unknown strategy '" + strategy + "'");

  SamplingPlan & p = doc.plan;
  p.strategy = *parsed;
  p.num_clips = get_int(j, "num_clips", origin, "$");
  p.clip_len = get_int(j, "clip_len", origin, "$");
  p.grid = get_int(j, "grid", origin, "$");
  p.budget = get_int(j, "budget", origin, "$");
  p.num_frames = get_int(j, "num_frames", origin, "$");
  p.tail_propagation = get_bool(j, "tail_propagation", origin, "$");

  const Json & clips = member(j, "clips", origin, "$");
  if (!clips.is_array()) schema_error(origin, "$.clips", "expected an array");
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const std::string where = "$.clips[" + std::to_string(i) + "]";
    ClipSpec c;
    c.clip_index = get_int(clips[i], "clip_index", origin, where);
    c.members = get_int_array(member(clips[i], "members", origin, where), origin, where + ".members");
    if (clips[i].contains("key_index") && get_int(clips[i], "key_index", origin, where) != c.key_index()) {
      schema_error(origin, where + ".key_index", "must equal members[0]");
    }
    p.clips.push_back(std::move(c));
  }

  const Json & tokens = member(j, "frame_tokens", origin, "$");
  if (!tokens.is_array()) schema_error(origin, "$.frame_tokens", "expected an array");
  for (std::size_t f = 0; f < tokens.size(); ++f) {
    p.frame_tokens.push_back(get_int_array(tokens[f], origin, "$.frame_tokens[" + std::to_string(f) + "]"));
  }

  // Structural check only; the caller re-validates against the real video.
  VideoMeta shape;
  shape.video_id = doc.video_id;
  shape.num_frames = p.num_frames;
  const std::vector<std::string> problems = validate_plan(p, shape);
  if (!problems.empty()) schema_error(origin, "$", "invalid plan: " + problems.front());
  return doc;
}

void save_plan(const fs::path & path, const PlanDocument & doc)
{
  write_text_file(path, plan_to_text(doc));
}

PlanDocument load_plan(const fs::path & path)
{
  return plan_from_text(read_text_file(path), path.string());
}

fs::path plan_path(const fs::path & root, const std::string & video_id, const std::string & exp_id)
{
  return root / video_id / (exp_id + ".json");
}

// ---------------------------------------------------------------------------

WeightConfig weight_config_from_text(std::string_view text, const std::string & origin)
{
  const Json doc = parse_document(text, origin);
  WeightConfig config;
  if (doc.contains("threshold")) {
    config.threshold = get_number(doc["threshold"], origin, "$.threshold");
  }
  const Json & weights = member(doc, "weights", origin, "$");
  if (!weights.is_object()) schema_error(origin, "$.weights", "expected an object");
  for (const auto & [id, w] : weights.items()) {
    config.entries[id] = get_number(w, origin, "$.weights." + id);
  }
  try {
    validate_weights(config);
  } catch (const ValidationError & e) {
    schema_error(origin, "$", e.what());
  }
  return config;
}

WeightConfig load_weight_config(const fs::path & path)
{
  return weight_config_from_text(read_text_file(path), path.string());
}

std::string weight_config_to_text(const WeightConfig & config)
{
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["threshold"] = config.threshold;
  Json w = Json::object();
  for (const auto & [id, weight] : config.entries) w[id] = weight;
  doc["weights"] = std::move(w);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string frame_file_name(int index)
{
  char name[32];
  std::snprintf(name, sizeof name, "%05d.png", index);
  return name;
}

void write_sequence(
  const fs::path & source_dir, const std::string & video_id, const std::string & exp_id,
  const std::vector<BinaryMask> & masks, MaskFormat format)
{
  if (format == MaskFormat::Rle) {
    save_rle_masks(source_dir / video_id / (exp_id + kRleSuffix), masks);
    return;
  }
  const fs::path dir = source_dir / video_id / exp_id;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    write_mask_png(dir / frame_file_name(static_cast<int>(i)), masks[i]);
  }
}

std::vector<BinaryMask> read_sequence(
  const fs::path & source_dir, const std::string & video_id, const std::string & exp_id)
{
  const fs::path rle = source_dir / video_id / (exp_id + kRleSuffix);
  if (fs::is_regular_file(rle)) {
    return load_rle_masks(rle);
  }
  const fs::path dir = source_dir / video_id / exp_id;
  if (!fs::is_directory(dir)) {
    throw IoError("no masks for " + video_id + "/" + exp_id + " under " + source_dir.string());
  }
  std::vector<std::pair<int, fs::path>> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    int index = 0;
    if (entry.is_regular_file() && parse_frame_name(entry.path().filename().string(), index)) {
      files.emplace_back(index, entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].first != static_cast<int>(i)) {
      throw ValidationError(dir.string() + ": frame files are not numbered contiguously from 0 (missing " +
                            frame_file_name(static_cast<int>(i)) + ")");
    }
  }
  std::vector<BinaryMask> out;
  out.reserve(files.size());
  for (const auto & f : files) out.push_back(read_mask_png(f.second));
  return out;
}

void write_prediction_source(const fs::path & source_dir, const PredictionSource & source, MaskFormat format)
{
  for (const auto & [video, exps] : source.masks) {
    for (const auto & [exp, seq] : exps) write_sequence(source_dir, video, exp, seq, format);
  }
}

PredictionSource read_prediction_source(const fs::path & source_dir, const std::string & source_id)
{
  if (!fs::is_directory(source_dir)) {
    throw IoError("prediction directory " + source_dir.string() + " does not exist");
  }
  PredictionSource source;
  source.source_id = source_id;
  std::vector<fs::path> videos;
  for (const auto & entry : fs::directory_iterator(source_dir)) {
    if (entry.is_directory()) videos.push_back(entry.path());
  }
  std::sort(videos.begin(), videos.end());
  for (const fs::path & vdir : videos) {
    const std::string video = vdir.filename().string();
    std::vector<std::string> exps;
    for (const auto & entry : fs::directory_iterator(vdir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_directory()) {
        exps.push_back(name);
      } else if (entry.is_regular_file() && name.size() > kRleSuffix.size() &&
                 name.ends_with(kRleSuffix)) {
        exps.push_back(name.substr(0, name.size() - kRleSuffix.size()));
      }
    }
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    for (const std::string & exp : exps) {
      source.masks[video][exp] = read_sequence(source_dir, video, exp);
    }
  }
  return source;
}

}  // namespace segaug
