#pragma once

#include <array>
#include <cmath>

namespace pano {

// Direction on the viewing sphere. phi is azimuth in (-pi, pi], positive
// toward image right; theta is elevation in [-pi/2, pi/2], positive up.
struct SphericalPoint {
  double phi = 0.0;
  double theta = 0.0;
};

// Sphere rotation applied in yaw -> pitch -> roll order.
struct Viewpoint {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const;
};

// Row-major 3x3 rotation matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
};

struct PixelCoord {
  double x = 0.0;
  double y = 0.0;
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// Returns a normalized point: phi wrapped into (-pi, pi], theta clamped.
SphericalPoint normalize_point(const SphericalPoint& p);

// Axes: x right, y up, z forward (phi = 0, theta = 0).
Vec3 to_unit_vector(const SphericalPoint& p);
SphericalPoint to_spherical(const Vec3& v);

// Rotation taking view-frame directions to world-frame directions.
Mat3 viewpoint_matrix(const Viewpoint& v);

// World direction -> direction as seen from the viewpoint.
SphericalPoint rotate_into_view(const SphericalPoint& p, const Viewpoint& v);
// Inverse of rotate_into_view.
SphericalPoint rotate_out_of_view(const SphericalPoint& p, const Viewpoint& v);

double angular_distance(const SphericalPoint& a, const SphericalPoint& b);

// Geodesic distance between two viewpoint rotations, in radians.
double viewpoint_delta(const Viewpoint& a, const Viewpoint& b);

// Continuous pixel coordinates (pixel centers at half-integers) to direction.
// Requires 0 <= x < width, 0 <= y < height; throws InputError otherwise.
SphericalPoint equirect_to_sphere(const PixelCoord& px, int width, int height);

// Total inverse of equirect_to_sphere; may return fractional coordinates.
PixelCoord sphere_to_equirect(const SphericalPoint& p, int width, int height);

}  // namespace pano
