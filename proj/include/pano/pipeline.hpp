#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pano/config.hpp"
#include "pano/content.hpp"
#include "pano/image.hpp"
#include "pano/interpolation.hpp"
#include "pano/metrics.hpp"
#include "pano/optimizer.hpp"
#include "pano/temporal.hpp"

namespace pano {

// Per-frame viewpoints keyed by frame index; gaps hold the last viewpoint.
struct Trajectory {
  std::map<int, Viewpoint> keys;

  Viewpoint at(int frame) const;
  static Trajectory parse_csv(const std::string& text,
                              const std::string& origin = "<string>");
  static Trajectory load_csv(const std::string& path);
};

struct FrameTimings {
  double optimize_ms = 0.0;
  double warp_ms = 0.0;
  double render_ms = 0.0;
};

// Frame-sequential driver of the full projection pipeline: global parameter
// optimization with temporal penalty and EMA, per-salient-point local models,
// anchor-aligned Gaussian interpolation, pixel-wise map EMA, rendering.
class VideoPipeline {
 public:
  explicit VideoPipeline(const ProjectionConfig& cfg);

  PerspectiveImage process_frame(const EquirectImage& frame,
                                 const FrameContent& content,
                                 const Viewpoint& viewpoint,
                                 WarpMap* out_warp = nullptr,
                                 FrameTimings* timings = nullptr);

  // Runs the model stages only (no rendering); used for warp inspection.
  WarpMap compute_warp(const FrameContent& content, const Viewpoint& viewpoint);

  const std::optional<ParamState>& global_state() const { return global_state_; }
  const FrameTimings& last_timings() const { return last_timings_; }

 private:
  ProjectionConfig cfg_;
  FrameTimings last_timings_;
  std::optional<ParamState> global_state_;
  std::vector<ParamState> local_states_;  // by salient-point index
  TemporalSmoother smoother_;
  int frame_counter_ = 0;
};

std::vector<PerspectiveImage> run_video(const std::vector<EquirectImage>& frames,
                                        const std::vector<FrameContent>& contents,
                                        const Trajectory& trajectory,
                                        const ProjectionConfig& cfg);

// Named evaluation models for the metric report.
// rectilinear | pannini | pannini_d05 | optimized | proposed
PanniniParams named_model(const std::string& name, const FrameContent& content,
                          const ProjectionConfig& cfg);

std::vector<MetricReport> run_evaluate(const FrameContent& content,
                                       const std::vector<std::string>& models,
                                       const ProjectionConfig& cfg);

}  // namespace pano
