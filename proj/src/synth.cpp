#include "pano/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pano/error.hpp"

namespace pano {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Ray from the room center to the cube wall.
Vec3 wall_hit(const Vec3& dir, double a) {
  const double m = std::max({std::abs(dir.x), std::abs(dir.y), std::abs(dir.z)});
  return dir * (a / m);
}

void put_pixel(Image& img, int x, int y, const std::array<std::uint8_t, 3>& rgb) {
  if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
  for (int c = 0; c < 3; ++c) img.at(x, y, c) = rgb[c];
}

void draw_dot(Image& img, const PixelCoord& px, int radius,
              const std::array<std::uint8_t, 3>& rgb) {
  const int cx = static_cast<int>(std::lround(px.x - 0.5));
  const int cy = static_cast<int>(std::lround(px.y - 0.5));
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy > radius * radius) continue;
      int x = (cx + dx) % img.width;
      if (x < 0) x += img.width;
      put_pixel(img, x, std::clamp(cy + dy, 0, img.height - 1), rgb);
    }
  }
}

}  // namespace

SceneSpec default_scene() {
  SceneSpec spec;
  const double a = spec.half_extent;
  for (double phi_deg : {-65.0, -25.0, 25.0, 65.0}) {
    for (double theta_deg : {-30.0, -10.0, 10.0, 30.0}) {
      spec.markers.push_back(
          wall_hit(to_unit_vector({phi_deg * kDeg, theta_deg * kDeg}), a));
    }
  }
  return spec;
}

std::vector<SceneEdge> scene_edges(const SceneSpec& spec) {
  if (spec.grid_count < 1) throw InputError("scene_edges: grid_count must be >= 1");
  if (!(spec.half_extent > 0.0)) throw InputError("scene_edges: half_extent must be > 0");
  const double a = spec.half_extent;
  const int g = spec.grid_count;
  std::vector<SceneEdge> edges;

  // Vertical edges at evenly spaced azimuths, theta spanning +-35 degrees.
  const double tan_v = std::tan(35.0 * kDeg);
  for (int j = 1; j <= g; ++j) {
    const double phi = j * (90.0 / (g + 1)) * kDeg;
    for (double sign : {-1.0, 1.0}) {
      const Vec3 base = wall_hit({std::sin(sign * phi), 0.0, std::cos(sign * phi)}, a);
      const double t = std::hypot(base.x, base.z);
      edges.push_back({{base.x, -t * tan_v, base.z}, {base.x, t * tan_v, base.z}});
    }
  }
  // Horizontal edges on the front wall.
  for (int j = 1; j <= g; ++j) {
    const double yj = j * 0.8 * a / g;
    for (double sign : {-1.0, 1.0}) {
      edges.push_back({{-0.8 * a, sign * yj, a}, {0.8 * a, sign * yj, a}});
    }
  }
  // Radial edges on the floor, converging toward the nadir.
  for (int j = 0; j < 2 * g - 1; ++j) {
    const double m = (2 * g - 1 == 1) ? 0.0 : -0.6 + 1.2 * j / (2.0 * g - 2.0);
    edges.push_back({{m * 0.4 * a, -a, 0.4 * a}, {m * a, -a, a}});
  }
  return edges;
}

std::pair<EquirectImage, FrameContent> generate(const SceneSpec& spec) {
  if (spec.equirect_width != 2 * spec.equirect_height || spec.equirect_height < 8) {
    throw InputError("generate: equirect dims must be 2:1 and non-trivial");
  }
  for (const Vec3& m : spec.markers) {
    if (std::max({std::abs(m.x), std::abs(m.y), std::abs(m.z)}) >
        spec.half_extent + 1e-9) {
      throw InputError("generate: marker outside the room");
    }
  }
  const std::vector<SceneEdge> edges = scene_edges(spec);

  EquirectImage img(spec.equirect_width, spec.equirect_height, 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = spec.background[c];
    }
  }

  FrameContent content;
  const int samples = 4 * spec.equirect_width;
  for (const SceneEdge& e : edges) {
    for (int i = 0; i <= samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      const Vec3 p = e.a * (1.0 - t) + e.b * t;
      const PixelCoord px = sphere_to_equirect(to_spherical(p), img.width, img.height);
      draw_dot(img, px, 1, spec.line_color);
    }
    const Vec3 mid3 = (e.a + e.b) * 0.5;
    content.lines.push_back(
        make_line(to_spherical(e.a), to_spherical(mid3), to_spherical(e.b), 1e-9));
  }
  for (const Vec3& m : spec.markers) {
    const SphericalPoint dir = to_spherical(m);
    draw_dot(img, sphere_to_equirect(dir, img.width, img.height),
             std::max(2, spec.equirect_width / 512), spec.marker_color);
    content.points.push_back({dir, 1.0});
  }
  return {std::move(img), std::move(content)};
}

}  // namespace pano
