#pragma once

#include <optional>

#include "pano/interpolation.hpp"
#include "pano/sphere.hpp"

namespace pano {

struct TemporalConfig {
  double omega_p_moving = 0.99;
  double omega_p_static = 0.8;
  double motion_threshold = 1e-3;  // radians/frame of viewpoint rotation

  bool operator==(const TemporalConfig&) const = default;
};

// Pixel-wise EMA of the backward warp map with a motion-adaptive weight:
// omega_p * current + (1 - omega_p) * previous, blended on unit vectors.
class TemporalSmoother {
 public:
  explicit TemporalSmoother(const TemporalConfig& cfg = {}) : cfg_(cfg) {}

  // First call returns current unchanged and seeds the state.
  WarpMap smooth(const WarpMap& current, const Viewpoint& viewpoint);

  // Pure weight selection: omega_p_moving when the viewpoint rotated more
  // than motion_threshold since the previous frame, else omega_p_static.
  double select_omega(const Viewpoint& viewpoint) const;

  void reset() { prev_map_.reset(); prev_viewpoint_.reset(); }
  const std::optional<WarpMap>& previous_map() const { return prev_map_; }

 private:
  TemporalConfig cfg_;
  std::optional<WarpMap> prev_map_;
  std::optional<Viewpoint> prev_viewpoint_;
};

}  // namespace pano
