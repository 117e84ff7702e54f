#pragma once

#include <string>

#include "pano/interpolation.hpp"
#include "pano/metrics.hpp"
#include "pano/optimizer.hpp"
#include "pano/projection.hpp"
#include "pano/temporal.hpp"

namespace pano {

// Every tunable of the pipeline. Config files are flat key=value text with
// '#' comments; unknown keys are rejected.
struct ProjectionConfig {
  double h_fov_deg = 150.0;
  int width = 1280;
  int height = 720;

  EnergyWeights weights;     // omega_d, omega_c
  OptimizerConfig opt;       // descent settings + omega_pd/ps/md/ms
  TemporalConfig temporal;   // omega_p_moving/static, motion_threshold

  double c_g = 2.0;
  double c_anchor = 1.0;
  double sigma = 0.0;  // 0 -> (0.25 * width)^2 at build time

  double min_line_length = 0.08726646259971647;      // 5 degrees
  double neighborhood_radius = 0.5235987755982988;   // 30 degrees

  int max_points = 5;
  int nms_radius = 10;
  double blend_w = 0.5;

  FrameSpec frame_spec() const;
  BlendWeights blend_weights() const;
  NeighborhoodSpec neighborhood_spec() const {
    return NeighborhoodSpec{neighborhood_radius};
  }

  bool operator==(const ProjectionConfig&) const = default;
};

ProjectionConfig parse_config(const std::string& text,
                              const std::string& origin = "<string>");
ProjectionConfig load_config(const std::string& path);
std::string serialize_config(const ProjectionConfig& cfg);

}  // namespace pano
