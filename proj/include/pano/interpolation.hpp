#pragma once

#include <string>
#include <vector>

#include "pano/content.hpp"
#include "pano/projection.hpp"
#include "pano/sphere.hpp"

namespace pano {

struct BlendWeights {
  double c_g = 2.0;       // global weight coefficient
  double c_anchor = 1.0;  // per-anchor coefficient (c_Ak)
  double sigma = 0.0;     // squared-pixels Gaussian denominator; 0 -> (width/4)^2
};

// A locally optimized model pinned at the global projection of its salient
// point and scaled so a 0.1 rad yaw probe lands at the same pixel distance
// under both models.
struct AnchorModel {
  PixelCoord anchor_px;
  SphericalPoint center_dir;
  PanniniParams params;
  double scale = 1.0;
  double weight_c = 1.0;
};

// Dense backward map: output pixel -> viewpoint-relative direction.
struct WarpMap {
  int width = 0;
  int height = 0;
  std::vector<SphericalPoint> dirs;
  std::vector<std::uint8_t> valid;

  const SphericalPoint& at(int x, int y) const {
    return dirs[static_cast<std::size_t>(y) * width + x];
  }
  bool valid_at(int x, int y) const {
    return valid[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

AnchorModel align_local(const PanniniParams& global_params, const FrameSpec& spec,
                        const SalientPoint& salient, const PanniniParams& local_params,
                        double weight_c = 1.0);

// Gaussian-weighted blend of the global backward model with anchor-aligned
// local models, evaluated analytically per pixel. Directions are blended as
// unit vectors and renormalized.
class InterpolatedModel {
 public:
  InterpolatedModel(const PanniniParams& global_params, const FrameSpec& spec,
                    std::vector<AnchorModel> anchors, const BlendWeights& bw);

  // Blended direction at a (possibly fractional) pixel. With no anchors this
  // is exactly the global model. Returns false where no model is valid.
  bool backward(const PixelCoord& px, SphericalPoint& out) const;

  // Inverse of backward by Newton iteration, seeded from the global model's
  // forward projection. Throws NumericError on non-convergence.
  PixelCoord forward(const SphericalPoint& dir) const;

  WarpMap build() const;

  const FrameSpec& spec() const { return spec_; }
  const std::vector<AnchorModel>& anchors() const { return anchors_; }

 private:
  bool backward_vec(double px, double py, Vec3& out, bool renormalize) const;

  PanniniParams global_;
  FrameSpec spec_;
  PlaneScale scale_;
  std::vector<AnchorModel> anchors_;
  std::vector<Mat3> anchor_rot_;  // local frame -> view frame
  BlendWeights bw_;
};

WarpMap build_warp(const PanniniParams& global_params, const FrameSpec& spec,
                   const std::vector<AnchorModel>& anchors, const BlendWeights& bw);

// Binary sidecar: magic "PWRP", u32 width/height, row-major float64 phi,theta
// pairs (NaN for invalid pixels).
void save_warp(const std::string& path, const WarpMap& map);
WarpMap load_warp(const std::string& path);

}  // namespace pano
