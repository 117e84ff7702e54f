#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pano/config.hpp"
#include "pano/content.hpp"
#include "pano/error.hpp"
#include "pano/image.hpp"
#include "pano/interpolation.hpp"
#include "pano/pipeline.hpp"
#include "pano/render.hpp"
#include "pano/synth.hpp"

namespace fs = std::filesystem;
using namespace pano;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumeric = 4;

const std::vector<std::string> kAllModels = {"rectilinear", "pannini", "pannini_d05",
                                             "optimized", "proposed"};

struct CommonOpts {
  std::string config_path;
  double fov_deg = 0.0;
  std::string size;
  bool literal_eq4 = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "Config file (key=value lines)");
  cmd->add_option("--fov", opts->fov_deg, "Horizontal FOV in degrees");
  cmd->add_option("--size", opts->size, "Output size WxH, e.g. 1280x720");
  cmd->add_flag("--literal-eq4", opts->literal_eq4,
                "Use the literal conformality energy form");
}

ProjectionConfig make_config(const CommonOpts& opts) {
  ProjectionConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
  if (opts.fov_deg > 0.0) cfg.h_fov_deg = opts.fov_deg;
  if (!opts.size.empty()) {
    int w = 0, h = 0;
    if (std::sscanf(opts.size.c_str(), "%dx%d", &w, &h) != 2 || w < 2 || h < 2) {
      throw InputError("--size must be WxH, got '" + opts.size + "'");
    }
    cfg.width = w;
    cfg.height = h;
  }
  if (opts.literal_eq4) cfg.opt.literal_eq4 = true;
  return cfg;
}

FrameContent frame_content_for(const std::string& annotations_path,
                               const ProjectionConfig& cfg, int frame_index) {
  if (annotations_path.empty()) return {};
  const auto frames = load_annotations(annotations_path, cfg.min_line_length);
  for (const FrameContent& fc : frames) {
    if (fc.frame_index == frame_index) return fc;
  }
  return {};
}

std::string frame_name(int index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d%s", index, ext);
  return buf;
}

PerspectiveImage project_named(const EquirectImage& src, const std::string& model,
                               const FrameContent& content,
                               const ProjectionConfig& cfg, WarpMap* out_warp) {
  const PanniniParams params = named_model(model, content, cfg);
  std::vector<AnchorModel> anchors;
  if (model == "proposed") {
    for (const SalientPoint& p : content.points) {
      const PanniniParams local =
          optimize(neighborhood(content, p, cfg.neighborhood_spec()), cfg.weights,
                   std::nullopt, cfg.opt);
      try {
        anchors.push_back(align_local(params, cfg.frame_spec(), p, local, cfg.c_anchor));
      } catch (const NumericError&) {
        continue;
      }
    }
  }
  const WarpMap map = build_warp(params, cfg.frame_spec(), anchors, cfg.blend_weights());
  if (out_warp) *out_warp = map;
  return render(src, map, Viewpoint{});
}

int cmd_project(const CommonOpts& common, const std::string& in_path,
                const std::string& out_path, const std::string& model,
                const std::string& annotations, const std::string& dump_warp) {
  const ProjectionConfig cfg = make_config(common);
  const EquirectImage src = load_equirect(in_path);
  const FrameContent content = frame_content_for(annotations, cfg, 0);
  WarpMap warp;
  const PerspectiveImage out =
      project_named(src, model, content, cfg, dump_warp.empty() ? nullptr : &warp);
  save_image(out_path, out);
  if (!dump_warp.empty()) save_warp(dump_warp, warp);
  return 0;
}

int cmd_video(const CommonOpts& common, const std::string& in_dir,
              const std::string& out_dir, const std::string& annotations,
              const std::string& trajectory_path, bool strict, bool dump_warp) {
  const ProjectionConfig cfg = make_config(common);
  std::vector<std::string> frame_paths;
  for (int i = 0;; ++i) {
    bool found = false;
    for (const char* ext : {".png", ".ppm"}) {
      const fs::path p = fs::path(in_dir) / frame_name(i, ext);
      if (fs::exists(p)) {
        frame_paths.push_back(p.string());
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  if (frame_paths.empty()) {
    throw InputError("no frame_000000.png/.ppm found in " + in_dir);
  }
  std::vector<FrameContent> contents;
  if (!annotations.empty()) {
    const auto frames = load_annotations(annotations, cfg.min_line_length);
    contents.resize(frame_paths.size());
    for (const FrameContent& fc : frames) {
      if (fc.frame_index >= 0 && fc.frame_index < static_cast<int>(contents.size())) {
        contents[fc.frame_index] = fc;
        contents[fc.frame_index].frame_index = fc.frame_index;
      }
    }
  }
  Trajectory traj;
  if (!trajectory_path.empty()) traj = Trajectory::load_csv(trajectory_path);

  fs::create_directories(out_dir);
  VideoPipeline pipeline(cfg);
  for (std::size_t t = 0; t < frame_paths.size(); ++t) {
    try {
      const EquirectImage src = load_equirect(frame_paths[t]);
      WarpMap warp;
      const PerspectiveImage out = pipeline.process_frame(
          src, t < contents.size() ? contents[t] : FrameContent{},
          traj.at(static_cast<int>(t)), dump_warp ? &warp : nullptr);
      save_image((fs::path(out_dir) / frame_name(static_cast<int>(t), ".png")).string(),
                 out);
      if (dump_warp) {
        save_warp((fs::path(out_dir) / frame_name(static_cast<int>(t), ".pwrp")).string(),
                  warp);
      }
    } catch (const std::exception& e) {
      std::cerr << "frame " << t << " failed: " << e.what() << "\n";
      if (strict) throw;
    }
  }
  return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& annotations,
                 bool use_synth, std::vector<std::string> models,
                 const std::string& out_dir) {
  const ProjectionConfig cfg = make_config(common);
  FrameContent content;
  if (use_synth) {
    content = generate(default_scene()).second;
  } else if (!annotations.empty()) {
    content = frame_content_for(annotations, cfg, 0);
  } else {
    throw InputError("evaluate: provide --annotations or --synth");
  }
  if (models.empty()) models = kAllModels;
  const auto reports = run_evaluate(content, models, cfg);
  if (out_dir.empty()) {
    std::cout << report_to_json(reports);
  } else {
    fs::create_directories(out_dir);
    std::ofstream((fs::path(out_dir) / "report.json").string())
        << report_to_json(reports);
    std::ofstream((fs::path(out_dir) / "report.csv").string())
        << report_to_csv(reports);
  }
  return 0;
}

int cmd_synth(const std::string& out_dir, const std::string& size) {
  SceneSpec spec = default_scene();
  if (!size.empty()) {
    int w = 0, h = 0;
    if (std::sscanf(size.c_str(), "%dx%d", &w, &h) != 2 || w != 2 * h || h < 8) {
      throw InputError("synth --size must be WxH with W = 2H");
    }
    spec.equirect_width = w;
    spec.equirect_height = h;
  }
  auto [img, content] = generate(spec);
  fs::create_directories(out_dir);
  save_image((fs::path(out_dir) / "scene.png").string(), img);
  content.frame_index = 0;
  std::ofstream((fs::path(out_dir) / "annotations.json").string())
      << serialize_annotations({content});
  return 0;
}

int cmd_compare(const CommonOpts& common, const std::string& in_path,
                const std::string& out_path, std::vector<std::string> models,
                const std::string& annotations) {
  const ProjectionConfig cfg = make_config(common);
  const EquirectImage src = load_equirect(in_path);
  const FrameContent content = frame_content_for(annotations, cfg, 0);
  if (models.empty()) models = kAllModels;
  Image montage(cfg.width * static_cast<int>(models.size()), cfg.height, 3);
  for (std::size_t m = 0; m < models.size(); ++m) {
    const PerspectiveImage img = project_named(src, models[m], content, cfg, nullptr);
    for (int y = 0; y < cfg.height; ++y) {
      for (int x = 0; x < cfg.width; ++x) {
        for (int c = 0; c < 3; ++c) {
          montage.at(static_cast<int>(m) * cfg.width + x, y, c) = img.at(x, y, c);
        }
      }
    }
  }
  save_image(out_path, montage);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-aware Pannini projection for 360-degree images and videos"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string in_path, out_path, model = "pannini", annotations, trajectory, dump_warp;
  std::string size;
  std::vector<std::string> models;
  bool strict = false, use_synth = false, dump_warp_flag = false;

  auto* project = app.add_subcommand("project", "Project a single equirectangular image");
  add_common(project, &common);
  project->add_option("--in", in_path, "Input equirectangular image")->required();
  project->add_option("--out", out_path, "Output image path")->required();
  project->add_option("--model", model, "rectilinear|pannini|pannini_d05|optimized|proposed");
  project->add_option("--annotations", annotations, "Annotation JSON");
  project->add_option("--dump-warp", dump_warp, "Write the warp map sidecar");

  auto* video = app.add_subcommand("video", "Project a frame_%06d image sequence");
  add_common(video, &common);
  video->add_option("--in", in_path, "Input frame directory")->required();
  video->add_option("--out", out_path, "Output directory")->required();
  video->add_option("--annotations", annotations, "Annotation JSON");
  video->add_option("--trajectory", trajectory, "Trajectory CSV (frame,yaw,pitch,roll)");
  video->add_flag("--strict", strict, "Abort the run on the first frame error");
  video->add_flag("--dump-warp", dump_warp_flag, "Write per-frame warp sidecars");

  auto* evaluate = app.add_subcommand("evaluate", "Straightness/conformality report");
  add_common(evaluate, &common);
  evaluate->add_option("--annotations", annotations, "Annotation JSON");
  evaluate->add_flag("--synth", use_synth, "Evaluate on the default synthetic scene");
  evaluate->add_option("--model", models, "Models to evaluate (repeatable)");
  evaluate->add_option("--out", out_path, "Report directory (default: JSON to stdout)");

  auto* synth = app.add_subcommand("synth", "Generate the synthetic test scene");
  synth->add_option("--out", out_path, "Output directory")->required();
  synth->add_option("--size", size, "Equirect size WxH (W = 2H)");

  auto* compare = app.add_subcommand("compare", "Side-by-side montage of models");
  add_common(compare, &common);
  compare->add_option("--in", in_path, "Input equirectangular image")->required();
  compare->add_option("--out", out_path, "Output montage image")->required();
  compare->add_option("--model", models, "Models to include (repeatable)");
  compare->add_option("--annotations", annotations, "Annotation JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (const std::string& m : models) {
      if (std::find(kAllModels.begin(), kAllModels.end(), m) == kAllModels.end()) {
        std::cerr << "unknown model '" << m << "'\n";
        return kExitUsage;
      }
    }
    if (project->parsed() &&
        std::find(kAllModels.begin(), kAllModels.end(), model) == kAllModels.end()) {
      std::cerr << "unknown model '" << model << "'\n";
      return kExitUsage;
    }
    if (project->parsed()) {
      return cmd_project(common, in_path, out_path, model, annotations, dump_warp);
    }
    if (video->parsed()) {
      return cmd_video(common, in_path, out_path, annotations, trajectory, strict,
                       dump_warp_flag);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(common, annotations, use_synth, models, out_path);
    }
    if (synth->parsed()) return cmd_synth(out_path, size);
    if (compare->parsed()) return cmd_compare(common, in_path, out_path, models, annotations);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
