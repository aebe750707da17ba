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

#include "cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "segaug/ensemble.hpp"
#include "segaug/error.hpp"
#include "segaug/kfc.hpp"
#include "segaug/mask_io.hpp"
#include "segaug/metrics.hpp"
#include "segaug/sampling.hpp"
#include "segaug/segmenter.hpp"

namespace segaug::cli
{
namespace fs = std::filesystem;
namespace
{

constexpr const char * kBackendEnv = "SEGAUG_BACKEND";

struct WorkItem
{
  const ManifestVideo * video;
  const Expression * expression;
};

std::vector<WorkItem> work_items(const Manifest & manifest)
{
  std::vector<WorkItem> items;
  for (const ManifestVideo & v : manifest.videos) {
    for (const Expression & e : v.expressions) items.push_back({&v, &e});
  }
  return items;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn && fn)
{
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || stop.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto & t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

// Loads frames from the manifest on demand, keeping them for the stream's lifetime.
class FrameCache
{
public:
  FrameCache(const Manifest & manifest, const VideoMeta & meta) : manifest_(manifest), meta_(meta) {}

  Frame operator()(int index)
  {
    auto it = cache_.find(index);
    if (it != cache_.end()) return it->second;
    Frame f;
    f.index = index;
    const fs::path path = fs::absolute(manifest_.frame_path(meta_, index));
    f.image = read_rgb_png(path);
    f.uri = path.string();
    return cache_.emplace(index, std::move(f)).first->second;
  }

private:
  const Manifest & manifest_;
  const VideoMeta & meta_;
  std::map<int, Frame> cache_;
};

std::vector<double> scores_for(const ScoreTable & table, const WorkItem & item)
{
  auto v = table.find(item.video->meta.video_id);
  if (v != table.end()) {
    auto e = v->second.find(item.expression->exp_id);
    if (e != v->second.end()) return e->second;
  }
  throw ValidationError(
    "no relevance scores for " + item.video->meta.video_id + "/" + item.expression->exp_id);
}

struct PlanOptions
{
  std::string strategy = "uniform";
  int n_clips = 10;
  int clip_len = 10;
  std::string scores;
};

Strategy parse_strategy_or_throw(const std::string & name)
{
  auto s = parse_strategy(name);
  if (!s) {
    throw ValidationError(
      "unknown strategy '" + name + "' (expected uniform, uniform_plus, qframe, wrap_around, wrap_around_plus)");
  }
  return *s;
}

std::vector<PlanDocument> build_plans(const Manifest & manifest, const PlanOptions & opt)
{
  const Strategy strategy = parse_strategy_or_throw(opt.strategy);
  std::optional<ScoreTable> scores;
  if (strategy == Strategy::QFrame) {
    if (opt.scores.empty()) throw ValidationError("--scores is required for --strategy qframe");
    scores = load_scores(opt.scores);
  }

  std::vector<PlanDocument> docs;
  std::vector<std::string> violations;
  for (const WorkItem & item : work_items(manifest)) {
    const VideoMeta & meta = item.video->meta;
    PlanDocument doc{meta.video_id, item.expression->exp_id, {}};
    if (scores) {
      const std::vector<double> s = scores_for(*scores, item);
      doc.plan = make_plan(strategy, meta, opt.n_clips, opt.clip_len, std::span<const double>(s));
    } else {
      doc.plan = make_plan(strategy, meta, opt.n_clips, opt.clip_len);
    }
    for (const std::string & v : validate_plan(doc.plan, meta)) {
      violations.push_back(meta.video_id + "/" + doc.exp_id + ": " + v);
    }
    docs.push_back(std::move(doc));
  }
  if (!violations.empty()) {
    std::string msg = "plan validation failed:";
    for (const auto & v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return docs;
}

const PlanDocument & find_plan(const std::vector<PlanDocument> & plans, const WorkItem & item)
{
  for (const PlanDocument & d : plans) {
    if (d.video_id == item.video->meta.video_id && d.exp_id == item.expression->exp_id) return d;
  }
  throw ValidationError("no plan for " + item.video->meta.video_id + "/" + item.expression->exp_id);
}

std::vector<PlanDocument> load_plans(const Manifest & manifest, const fs::path & dir)
{
  std::vector<PlanDocument> plans;
  for (const WorkItem & item : work_items(manifest)) {
    const fs::path p = plan_path(dir, item.video->meta.video_id, item.expression->exp_id);
    if (!fs::exists(p)) throw IoError("missing plan file " + p.string());
    PlanDocument doc = load_plan(p);
    if (doc.video_id != item.video->meta.video_id || doc.exp_id != item.expression->exp_id) {
      throw ValidationError(p.string() + ": plan is for " + doc.video_id + "/" + doc.exp_id);
    }
    const auto violations = validate_plan(doc.plan, item.video->meta);
    if (!violations.empty()) {
      throw ValidationError(p.string() + ": " + violations.front());
    }
    plans.push_back(std::move(doc));
  }
  return plans;
}

MaskFormat parse_format(const std::string & name)
{
  if (name == "png") return MaskFormat::Png;
  if (name == "rle") return MaskFormat::Rle;
  throw ValidationError("unknown mask format '" + name + "' (expected png or rle)");
}

struct SegmentOptions
{
  std::string backend;
  std::string out;
  std::string work_dir;
  std::string mask_format = "png";
  int jobs = 1;
  std::uint64_t seed = 0;
};

void segment_all(
  const Manifest & manifest, const std::vector<PlanDocument> & plans, const SegmentOptions & opt)
{
  const fs::path out = opt.out;
  const fs::path work = opt.work_dir.empty() ? out.parent_path() / (out.filename().string() + ".work")
                                             : fs::path(opt.work_dir);
  const BackendFactory factory = make_backend_factory(opt.backend, opt.seed, work);
  const MaskFormat format = parse_format(opt.mask_format);
  const std::vector<WorkItem> items = work_items(manifest);

  parallel_for(items.size(), opt.jobs, [&](std::size_t i) {
    const WorkItem & item = items[i];
    const VideoMeta & meta = item.video->meta;
    const PlanDocument & doc = find_plan(plans, item);
    const StreamContext ctx{meta.video_id, item.expression->exp_id, item.expression->text};

    std::unique_ptr<SegmenterBackend> backend = factory();
    FrameCache cache(manifest, meta);
    const std::vector<SoftMask> soft =
      segment_video(*backend, doc.plan, meta, ctx, [&cache](int f) { return cache(f); });

    std::vector<BinaryMask> masks;
    masks.reserve(soft.size());
    for (const SoftMask & s : soft) masks.push_back(binarize(s));
    write_sequence(out, meta.video_id, ctx.exp_id, masks, format);
  });
  if (opt.work_dir.empty()) {
    std::error_code ec;
    fs::remove_all(work, ec);
  }
}

std::string default_backend()
{
  const char * env = std::getenv(kBackendEnv);
  return (env != nullptr && *env != '\0') ? env : "stub";
}

void add_plan_options(CLI::App * cmd, PlanOptions & opt)
{
  cmd->add_option("--strategy", opt.strategy,
                  "uniform | uniform_plus | qframe | wrap_around | wrap_around_plus")
    ->capture_default_str();
  cmd->add_option("--n-clips", opt.n_clips, "number of clips N")->capture_default_str();
  cmd->add_option("--clip-len", opt.clip_len, "frames per clip c (must be g*g+1)")->capture_default_str();
  cmd->add_option("--scores", opt.scores, "relevance score document (qframe only)");
}

void add_segment_options(CLI::App * cmd, SegmentOptions & opt)
{
  opt.backend = default_backend();
  cmd->add_option("--backend", opt.backend,
                  std::string("stub | stub:<tag> | cmd:<command> (default from ") + kBackendEnv + ")")
    ->capture_default_str();
  cmd->add_option("--jobs", opt.jobs, "concurrent (video, expression) streams")->capture_default_str();
  cmd->add_option("--seed", opt.seed, "stub backend seed")->capture_default_str();
  cmd->add_option("--mask-format", opt.mask_format, "png | rle")->capture_default_str();
  cmd->add_option("--work-dir", opt.work_dir, "scratch directory for worker images (kept when given)");
}

int report_error(const char * kind, const std::exception & e, int code)
{
  std::cerr << "segaug: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int run(int argc, const char * const * argv)
{
  CLI::App app{"Clip sampling, key-frame compression, mask ensembling and J&F evaluation"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string plans_dir;
  std::string out_dir;
  PlanOptions plan_opt;
  SegmentOptions seg_opt;

  CLI::App * plan_cmd = app.add_subcommand("plan", "build one sampling plan per (video, expression)");
  plan_cmd->add_option("--manifest", manifest_path, "video manifest")->required();
  plan_cmd->add_option("--out", out_dir, "plan directory")->required();
  add_plan_options(plan_cmd, plan_opt);

  CLI::App * compress_cmd = app.add_subcommand("compress", "write key frames and compressed grid images");
  compress_cmd->add_option("--manifest", manifest_path, "video manifest")->required();
  compress_cmd->add_option("--plans", plans_dir, "plan directory")->required();
  compress_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App * segment_cmd = app.add_subcommand("segment", "decode masks for planned clips");
  segment_cmd->add_option("--manifest", manifest_path, "video manifest")->required();
  segment_cmd->add_option("--plans", plans_dir, "plan directory")->required();
  segment_cmd->add_option("--out", seg_opt.out, "prediction source directory")->required();
  add_segment_options(segment_cmd, seg_opt);

  CLI::App * pipeline_cmd = app.add_subcommand("pipeline", "plan, compress and segment in one pass");
  pipeline_cmd->add_option("--manifest", manifest_path, "video manifest")->required();
  pipeline_cmd->add_option("--out", seg_opt.out, "prediction source directory")->required();
  pipeline_cmd->add_option("--plans-out", plans_dir, "also save the plans here");
  add_plan_options(pipeline_cmd, plan_opt);
  add_segment_options(pipeline_cmd, seg_opt);

  std::string weights_path;
  std::string pred_root;
  std::vector<std::string> source_args;
  CLI::App * ensemble_cmd = app.add_subcommand("ensemble", "selective averaging of prediction sources");
  ensemble_cmd->add_option("--weights", weights_path, "weight config")->required();
  ensemble_cmd->add_option("--pred-root", pred_root, "directory holding one subdirectory per source id");
  ensemble_cmd->add_option("--source", source_args, "explicit <source_id>=<dir>, repeatable");
  ensemble_cmd->add_option("--out", out_dir, "output prediction directory")->required();
  std::string ensemble_format = "png";
  ensemble_cmd->add_option("--mask-format", ensemble_format, "png | rle")->capture_default_str();

  std::string pred_dir;
  std::string gt_dir;
  std::string report_path;
  std::optional<int> tolerance;
  CLI::App * eval_cmd = app.add_subcommand("eval", "J, F and J&F of predictions against ground truth");
  eval_cmd->add_option("--pred", pred_dir, "prediction directory")->required();
  eval_cmd->add_option("--gt", gt_dir, "ground-truth directory")->required();
  eval_cmd->add_option("--report", report_path, "JSON report path (text table goes next to it)")->required();
  eval_cmd->add_option("--tolerance", tolerance, "fixed boundary tolerance in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*plan_cmd) {
      const Manifest manifest = load_manifest(manifest_path);
      const std::vector<PlanDocument> plans = build_plans(manifest, plan_opt);
      for (const PlanDocument & d : plans) save_plan(plan_path(out_dir, d.video_id, d.exp_id), d);
      std::cout << "wrote " << plans.size() << " plans to " << out_dir << "\n";
    } else if (*compress_cmd) {
      const Manifest manifest = load_manifest(manifest_path);
      const std::vector<PlanDocument> plans = load_plans(manifest, plans_dir);
      std::size_t images = 0;
      for (const WorkItem & item : work_items(manifest)) {
        const PlanDocument & doc = find_plan(plans, item);
        FrameCache cache(manifest, item.video->meta);
        const auto clips = compress_plan(doc.plan, [&cache](int f) { return cache(f); });
        const fs::path dir = fs::path(out_dir) / doc.video_id / doc.exp_id;
        for (std::size_t i = 0; i < clips.size(); ++i) {
          char name[64];
          std::snprintf(name, sizeof name, "clip_%03zu_key.png", i);
          write_rgb_png(dir / name, clips[i].key_frame.image);
          std::snprintf(name, sizeof name, "clip_%03zu_com.png", i);
          write_rgb_png(dir / name, clips[i].compressed.image);
          images += 2;
        }
      }
      std::cout << "wrote " << images << " images to " << out_dir << "\n";
    } else if (*segment_cmd) {
      const Manifest manifest = load_manifest(manifest_path);
      const std::vector<PlanDocument> plans = load_plans(manifest, plans_dir);
      segment_all(manifest, plans, seg_opt);
      std::cout << "wrote predictions to " << seg_opt.out << "\n";
    } else if (*pipeline_cmd) {
      const Manifest manifest = load_manifest(manifest_path);
      const std::vector<PlanDocument> plans = build_plans(manifest, plan_opt);
      if (!plans_dir.empty()) {
        for (const PlanDocument & d : plans) save_plan(plan_path(plans_dir, d.video_id, d.exp_id), d);
      }
      segment_all(manifest, plans, seg_opt);
      std::cout << "wrote predictions to " << seg_opt.out << "\n";
    } else if (*ensemble_cmd) {
      const WeightConfig config = load_weight_config(weights_path);
      std::map<std::string, fs::path> dirs;
      for (const std::string & arg : source_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ValidationError("--source expects <source_id>=<dir>, got '" + arg + "'");
        }
        dirs[arg.substr(0, eq)] = arg.substr(eq + 1);
      }
      std::vector<PredictionSource> sources;
      for (const auto & [id, weight] : config.entries) {
        if (weight <= 0.0) continue;
        fs::path dir;
        if (auto it = dirs.find(id); it != dirs.end()) {
          dir = it->second;
        } else if (!pred_root.empty()) {
          dir = fs::path(pred_root) / id;
        }
        if (dir.empty() || !fs::is_directory(dir)) {
          throw ValidationError("weight config names source '" + id + "' but no prediction directory was found for it");
        }
        sources.push_back(read_prediction_source(dir, id));
      }
      const PredictionSource fused = ensemble_run(sources, config, fs::path(out_dir).filename().string());
      write_prediction_source(out_dir, fused, parse_format(ensemble_format));
      std::cout << "fused " << sources.size() << " sources into " << out_dir << "\n";
    } else if (*eval_cmd) {
      const PredictionSource pred = read_prediction_source(pred_dir, "pred");
      const PredictionSource gt = read_prediction_source(gt_dir, "gt");
      ToleranceRule rule;
      rule.fixed_pixels = tolerance;
      const EvalResult result = evaluate(pred, gt, rule);
      const std::string table = format_report(result);
      fs::path report = report_path;
      write_text_file(report, report_to_json(result));
      fs::path text_path = report;
      text_path.replace_extension(".txt");
      write_text_file(text_path, table);
      std::cout << table;
    }
  } catch (const ValidationError & e) {
    return report_error("validation error", e, kValidation);
  } catch (const BackendError & e) {
    return report_error("backend error", e, kBackend);
  } catch (const IoError & e) {
    return report_error("io error", e, kIo);
  } catch (const fs::filesystem_error & e) {
    return report_error("io error", e, kIo);
  } catch (const std::exception & e) {
    return report_error("error", e, kIo);
  }
  return kOk;
}

}  // namespace segaug::cli
