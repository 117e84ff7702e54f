#include "pano/sphere.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "pano/error.hpp"

namespace pano {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec3 Vec3::normalized() const {
  const double n = norm();
  return {x / n, y / n, z / n};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
      r.m[3 * i + j] = s;
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[3 * i + j] = m[3 * j + i];
  return r;
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

SphericalPoint normalize_point(const SphericalPoint& p) {
  return {wrap_angle(p.phi), std::clamp(p.theta, -kPi / 2.0, kPi / 2.0)};
}

Vec3 to_unit_vector(const SphericalPoint& p) {
  const double ct = std::cos(p.theta);
  return {std::sin(p.phi) * ct, std::sin(p.theta), std::cos(p.phi) * ct};
}

SphericalPoint to_spherical(const Vec3& v) {
  const Vec3 u = v.normalized();
  return {std::atan2(u.x, u.z), std::asin(std::clamp(u.y, -1.0, 1.0))};
}

Mat3 viewpoint_matrix(const Viewpoint& v) {
  const double cy = std::cos(v.yaw), sy = std::sin(v.yaw);
  const double cp = std::cos(v.pitch), sp = std::sin(v.pitch);
  const double cr = std::cos(v.roll), sr = std::sin(v.roll);
  // Yaw about +y (up), pitch about +x (right), roll about +z (forward).
  Mat3 yaw{{cy, 0, sy, 0, 1, 0, -sy, 0, cy}};
  Mat3 pitch{{1, 0, 0, 0, cp, sp, 0, -sp, cp}};
  Mat3 roll{{cr, -sr, 0, sr, cr, 0, 0, 0, 1}};
  return yaw * pitch * roll;
}

SphericalPoint rotate_into_view(const SphericalPoint& p, const Viewpoint& v) {
  return to_spherical(viewpoint_matrix(v).transposed() * to_unit_vector(p));
}

SphericalPoint rotate_out_of_view(const SphericalPoint& p, const Viewpoint& v) {
  return to_spherical(viewpoint_matrix(v) * to_unit_vector(p));
}

double angular_distance(const SphericalPoint& a, const SphericalPoint& b) {
  const double d = std::clamp(to_unit_vector(a).dot(to_unit_vector(b)), -1.0, 1.0);
  return std::acos(d);
}

double viewpoint_delta(const Viewpoint& a, const Viewpoint& b) {
  const Mat3 r = viewpoint_matrix(a).transposed() * viewpoint_matrix(b);
  const double trace = r.m[0] + r.m[4] + r.m[8];
  return std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
}

SphericalPoint equirect_to_sphere(const PixelCoord& px, int width, int height) {
  if (!(px.x >= 0.0 && px.x < width && px.y >= 0.0 && px.y < height)) {
    throw InputError("equirect_to_sphere: pixel (" + std::to_string(px.x) + ", " +
                     std::to_string(px.y) + ") outside " + std::to_string(width) +
                     "x" + std::to_string(height) + " image");
  }
  return {-kPi + 2.0 * kPi * px.x / width, kPi / 2.0 - kPi * px.y / height};
}

PixelCoord sphere_to_equirect(const SphericalPoint& p, int width, int height) {
  const SphericalPoint n = normalize_point(p);
  return {(n.phi + kPi) * width / (2.0 * kPi), (kPi / 2.0 - n.theta) * height / kPi};
}

}  // namespace pano
