#pragma once

#include "pano/sphere.hpp"

namespace pano {

// Pannini control parameters: d is the distance of the projection center
// behind the tangency point, w the vertical-compression weight.
struct PanniniParams {
  double d = 1.0;
  double w = 0.0;
};

struct PlanePoint {
  double u = 0.0;
  double v = 0.0;
};

struct FrameSpec {
  double h_fov = 0.0;  // radians
  int width = 0;
  int height = 0;
};

// Largest admissible |phi| for the model (denominators stay positive),
// minus a small guard band.
double frustum_limit(const PanniniParams& params);

// u = (d+1) sin(phi) / (d + cos(phi))
// v = tan(theta) * ((d+1)(1-w)/(d+cos(phi)) + w/cos(phi))
// Throws NumericError outside the valid frustum.
PlanePoint pannini_forward(const SphericalPoint& p, const PanniniParams& params);

// Closed-form inverse of pannini_forward (quadratic in cos(phi)).
// Throws NumericError when |u| is beyond the model's range.
SphericalPoint pannini_inverse(const PlanePoint& q, const PanniniParams& params);

// No-throw inverse variant returning the direction as a unit vector;
// used in the per-pixel warp loop. Returns false when out of range.
bool try_pannini_inverse_vec(const PlanePoint& q, const PanniniParams& params,
                             Vec3& out);

// Rectilinear: perspective projection from the sphere center (Pannini d=0).
PlanePoint rectilinear(const SphericalPoint& p);
// Cylindrical stereographic: Pannini d=1, w=0.
PlanePoint stereographic(const SphericalPoint& p);

// Linear pixel <-> plane mapping. Column 0 maps to -u_max, column width-1 to
// +u_max; v uses the same pixels-per-unit factor so pixels stay square.
struct PlaneScale {
  double u_max = 0.0;
  double px_per_unit = 0.0;
  double cx = 0.0;  // (width-1)/2
  double cy = 0.0;  // (height-1)/2

  PlanePoint pixel_to_plane(const PixelCoord& px) const {
    return {(px.x - cx) / px_per_unit, (cy - px.y) / px_per_unit};
  }
  PixelCoord plane_to_pixel(const PlanePoint& q) const {
    return {cx + q.u * px_per_unit, cy - q.v * px_per_unit};
  }
};

PlaneScale plane_scale(const FrameSpec& spec, const PanniniParams& params);

}  // namespace pano
