#include "pano/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pano/error.hpp"

namespace pano {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDenomEps = 1e-6;
constexpr double kGuard = 1e-3;
}  // namespace

double frustum_limit(const PanniniParams& params) {
  double lim = params.d < 1.0 ? std::acos(-params.d) : kPi;
  if (params.w > 0.0) lim = std::min(lim, kPi / 2.0);  // w/cos(phi) term
  return lim - kGuard;
}

PlanePoint pannini_forward(const SphericalPoint& p, const PanniniParams& params) {
  const double cphi = std::cos(p.phi);
  const double denom = params.d + cphi;
  if (denom <= kDenomEps) {
    throw NumericError("pannini_forward: phi=" + std::to_string(p.phi) +
                       " outside frustum for d=" + std::to_string(params.d));
  }
  if (params.w != 0.0 && cphi <= kDenomEps) {
    throw NumericError("pannini_forward: phi=" + std::to_string(p.phi) +
                       " outside frustum for w=" + std::to_string(params.w));
  }
  const double s = params.d + 1.0;
  const double u = s * std::sin(p.phi) / denom;
  const double t = std::tan(p.theta);
  const double v = t * (s * (1.0 - params.w) / denom +
                        (params.w != 0.0 ? params.w / cphi : 0.0));
  return {u, v};
}

bool try_pannini_inverse_vec(const PlanePoint& q, const PanniniParams& params,
                             Vec3& out) {
  const double d = params.d;
  const double s = d + 1.0;
  const double u2 = q.u * q.u;
  // u(d+cos) = s sin, squared with sin^2 = 1-cos^2, gives a quadratic in cos.
  const double disc = s * s + u2 * (1.0 - d * d);
  if (disc < 0.0) return false;
  const double c = (-u2 * d + s * std::sqrt(disc)) / (s * s + u2);
  if (c < -1.0 - 1e-12 || c > 1.0 + 1e-12) return false;
  const double cphi = std::clamp(c, -1.0, 1.0);
  const double denom = d + cphi;
  if (denom <= kDenomEps) return false;
  if (params.w != 0.0 && cphi <= kDenomEps) return false;
  const double sphi = q.u * denom / s;
  const double k = s * (1.0 - params.w) / denom +
                   (params.w != 0.0 ? params.w / cphi : 0.0);
  const double t = q.v / k;  // tan(theta)
  const double ct = 1.0 / std::sqrt(1.0 + t * t);
  out = {sphi * ct, t * ct, cphi * ct};
  return true;
}

SphericalPoint pannini_inverse(const PlanePoint& q, const PanniniParams& params) {
  Vec3 v;
  if (!try_pannini_inverse_vec(q, params, v)) {
    throw NumericError("pannini_inverse: (" + std::to_string(q.u) + ", " +
                       std::to_string(q.v) + ") beyond model range for d=" +
                       std::to_string(params.d));
  }
  return {std::atan2(v.x, v.z), std::asin(std::clamp(v.y, -1.0, 1.0))};
}

PlanePoint rectilinear(const SphericalPoint& p) {
  return pannini_forward(p, PanniniParams{0.0, 0.0});
}

PlanePoint stereographic(const SphericalPoint& p) {
  return pannini_forward(p, PanniniParams{1.0, 0.0});
}

PlaneScale plane_scale(const FrameSpec& spec, const PanniniParams& params) {
  const double half = spec.h_fov / 2.0;
  if (!(spec.h_fov > 0.0 && spec.h_fov < kPi) || half > frustum_limit(params)) {
    throw NumericError("plane_scale: h_fov " + std::to_string(spec.h_fov) +
                       " invalid for d=" + std::to_string(params.d));
  }
  PlaneScale ps;
  ps.u_max = pannini_forward({half, 0.0}, params).u;
  ps.px_per_unit = (spec.width - 1) / (2.0 * ps.u_max);
  ps.cx = (spec.width - 1) / 2.0;
  ps.cy = (spec.height - 1) / 2.0;
  return ps;
}

}  // namespace pano
