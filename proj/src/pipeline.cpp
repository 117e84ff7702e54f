#include "pano/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pano/error.hpp"
#include "pano/render.hpp"

namespace pano {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// The empty-content fallback: the commonly used baseline Pannini parameters.
constexpr PanniniParams kDefaultParams{1.0, 0.0};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

}  // namespace

Viewpoint Trajectory::at(int frame) const {
  if (keys.empty()) return Viewpoint{};
  auto it = keys.upper_bound(frame);
  if (it == keys.begin()) return it->second;  // before the first key
  return std::prev(it)->second;
}

Trajectory Trajectory::parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty trajectory");
  const auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"frame", "yaw", "pitch", "roll"}) {
    throw ParseError(origin + ": expected header 'frame,yaw,pitch,roll'");
  }
  Trajectory traj;
  int lineno = 1;
  int last_frame = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (fields.size() != 4) throw ParseError(where + ": expected 4 fields");
    try {
      const int frame = std::stoi(fields[0]);
      if (frame <= last_frame) {
        throw ParseError(where + ": frame indices must be strictly increasing");
      }
      last_frame = frame;
      traj.keys[frame] = {std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3])};
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(where + ": malformed number");
    }
  }
  return traj;
}

Trajectory Trajectory::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

VideoPipeline::VideoPipeline(const ProjectionConfig& cfg)
    : cfg_(cfg), smoother_(cfg.temporal) {}

WarpMap VideoPipeline::compute_warp(const FrameContent& content,
                                    const Viewpoint& viewpoint) {
  FrameTimings unused;
  const int frame = frame_counter_++;
  const FrameSpec spec = cfg_.frame_spec();
  auto stage = [frame](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw NumericError("frame " + std::to_string(frame) + " stage " + name +
                         ": " + e.what());
    }
  };

  auto t0 = Clock::now();
  const PanniniParams raw = stage("global-optimize", [&] {
    return content.empty() ? kDefaultParams
                           : optimize(content, cfg_.weights, global_state_, cfg_.opt);
  });
  const PanniniParams smoothed =
      global_state_ ? smooth_params(raw, global_state_->smoothed, cfg_.opt) : raw;
  global_state_ = ParamState{raw, smoothed, frame};

  std::vector<ParamState> new_locals;
  new_locals.reserve(content.points.size());
  for (std::size_t i = 0; i < content.points.size(); ++i) {
    const std::optional<ParamState> prev =
        i < local_states_.size() ? std::optional<ParamState>(local_states_[i])
                                 : std::nullopt;
    const PanniniParams lraw = stage("local-optimize", [&] {
      return optimize(neighborhood(content, content.points[i], cfg_.neighborhood_spec()),
                      cfg_.weights, prev, cfg_.opt);
    });
    const PanniniParams lsm = prev ? smooth_params(lraw, prev->smoothed, cfg_.opt) : lraw;
    new_locals.push_back({lraw, lsm, frame});
  }
  local_states_ = std::move(new_locals);
  unused.optimize_ms = ms_since(t0);

  t0 = Clock::now();
  std::vector<AnchorModel> anchors;
  for (std::size_t i = 0; i < content.points.size(); ++i) {
    try {
      AnchorModel a = align_local(smoothed, spec, content.points[i],
                                  local_states_[i].smoothed, cfg_.c_anchor);
      if (a.anchor_px.x < 0 || a.anchor_px.x > spec.width - 1 ||
          a.anchor_px.y < 0 || a.anchor_px.y > spec.height - 1) {
        continue;  // salient point projects outside the output frame
      }
      anchors.push_back(std::move(a));
    } catch (const NumericError&) {
      continue;  // outside the global frustum; no local model
    }
  }
  const WarpMap raw_map = stage("build-warp", [&] {
    return build_warp(smoothed, spec, anchors, cfg_.blend_weights());
  });
  const WarpMap out = stage("temporal-smooth",
                            [&] { return smoother_.smooth(raw_map, viewpoint); });
  unused.warp_ms = ms_since(t0);
  last_timings_ = unused;
  return out;
}

PerspectiveImage VideoPipeline::process_frame(const EquirectImage& frame,
                                              const FrameContent& content,
                                              const Viewpoint& viewpoint,
                                              WarpMap* out_warp,
                                              FrameTimings* timings) {
  const WarpMap warp = compute_warp(content, viewpoint);
  const auto t0 = Clock::now();
  PerspectiveImage img = render(frame, warp, viewpoint);
  last_timings_.render_ms = ms_since(t0);
  if (out_warp) *out_warp = warp;
  if (timings) *timings = last_timings_;
  return img;
}

std::vector<PerspectiveImage> run_video(const std::vector<EquirectImage>& frames,
                                        const std::vector<FrameContent>& contents,
                                        const Trajectory& trajectory,
                                        const ProjectionConfig& cfg) {
  if (!contents.empty() && contents.size() != frames.size()) {
    throw InputError("run_video: annotation count does not match frame count");
  }
  VideoPipeline pipeline(cfg);
  std::vector<PerspectiveImage> out;
  out.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const FrameContent content = t < contents.size() ? contents[t] : FrameContent{};
    out.push_back(pipeline.process_frame(frames[t], content,
                                         trajectory.at(static_cast<int>(t))));
  }
  return out;
}

PanniniParams named_model(const std::string& name, const FrameContent& content,
                          const ProjectionConfig& cfg) {
  if (name == "rectilinear") return {0.0, 0.0};
  if (name == "pannini" || name == "stereographic") return {1.0, 0.0};
  if (name == "pannini_d05") return {0.5, 0.0};
  if (name == "optimized" || name == "proposed") {
    return optimize(content, cfg.weights, std::nullopt, cfg.opt);
  }
  throw InputError("unknown model '" + name + "'");
}

std::vector<MetricReport> run_evaluate(const FrameContent& content,
                                       const std::vector<std::string>& models,
                                       const ProjectionConfig& cfg) {
  const FrameSpec spec = cfg.frame_spec();
  std::vector<MetricReport> reports;
  for (const std::string& name : models) {
    const PanniniParams params = named_model(name, content, cfg);
    Projector proj;
    std::optional<InterpolatedModel> model;
    if (name == "proposed") {
      std::vector<AnchorModel> anchors;
      for (const SalientPoint& p : content.points) {
        const PanniniParams local = optimize(
            neighborhood(content, p, cfg.neighborhood_spec()), cfg.weights,
            std::nullopt, cfg.opt);
        try {
          anchors.push_back(align_local(params, spec, p, local, cfg.c_anchor));
        } catch (const NumericError&) {
          continue;
        }
      }
      model.emplace(params, spec, std::move(anchors), cfg.blend_weights());
      proj = [&m = *model](const SphericalPoint& p) {
        const PixelCoord px = m.forward(p);
        return PlanePoint{px.x, -px.y};
      };
    } else {
      proj = [params](const SphericalPoint& p) { return pannini_forward(p, params); };
    }
    MetricReport report;
    report.model = name;
    for (const LineSegment& l : content.lines) {
      report.line_straightness.push_back(straightness(l, proj));
    }
    for (const SalientPoint& p : content.points) {
      report.point_conformality.push_back(conformality_measure(p.dir, proj));
    }
    report.finalize();
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace pano
