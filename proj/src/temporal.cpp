#include "pano/temporal.hpp"

#include <algorithm>
#include <cmath>

#include "pano/error.hpp"

namespace pano {

double TemporalSmoother::select_omega(const Viewpoint& viewpoint) const {
  if (!prev_viewpoint_) return cfg_.omega_p_moving;
  const double delta = viewpoint_delta(*prev_viewpoint_, viewpoint);
  return delta > cfg_.motion_threshold ? cfg_.omega_p_moving : cfg_.omega_p_static;
}

WarpMap TemporalSmoother::smooth(const WarpMap& current, const Viewpoint& viewpoint) {
  if (!prev_map_) {
    prev_map_ = current;
    prev_viewpoint_ = viewpoint;
    return current;
  }
  if (prev_map_->width != current.width || prev_map_->height != current.height) {
    throw InputError("TemporalSmoother: warp dimensions changed mid-sequence");
  }
  const double omega = select_omega(viewpoint);
  WarpMap out;
  out.width = current.width;
  out.height = current.height;
  out.dirs.resize(current.dirs.size());
  out.valid.assign(current.dirs.size(), 0);
  for (std::size_t i = 0; i < current.dirs.size(); ++i) {
    if (!current.valid[i]) continue;
    if (!prev_map_->valid[i]) {
      out.dirs[i] = current.dirs[i];
      out.valid[i] = 1;
      continue;
    }
    const Vec3 a = to_unit_vector(current.dirs[i]);
    const Vec3 b = to_unit_vector(prev_map_->dirs[i]);
    const Vec3 m = a * omega + b * (1.0 - omega);
    const double n = m.norm();
    // Consecutive maps differ by far less than pi per pixel, so the blend
    // cannot be degenerate.
    if (!(n > 1e-6)) {
      throw NumericError("TemporalSmoother: near-antipodal blend at pixel " +
                         std::to_string(i));
    }
    out.dirs[i] = {std::atan2(m.x, m.z), std::asin(std::clamp(m.y / n, -1.0, 1.0))};
    out.valid[i] = 1;
  }
  prev_map_ = out;
  prev_viewpoint_ = viewpoint;
  return out;
}

}  // namespace pano
