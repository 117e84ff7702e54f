#include "pano/render.hpp"

#include <cmath>

#include "pano/error.hpp"

namespace pano {

namespace {

// Bilinear fetch with horizontal wrap and vertical clamp; continuous
// coordinates have pixel centers at half-integers.
void sample_bilinear(const Image& src, double x, double y, std::uint8_t* rgb) {
  const double sx = x - 0.5;
  const double sy = y - 0.5;
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;

  auto wrap_x = [&src](int xi) {
    xi %= src.width;
    return xi < 0 ? xi + src.width : xi;
  };
  auto clamp_y = [&src](int yi) {
    return yi < 0 ? 0 : (yi >= src.height ? src.height - 1 : yi);
  };
  const int xa = wrap_x(x0), xb = wrap_x(x0 + 1);
  const int ya = clamp_y(y0), yb = clamp_y(y0 + 1);
  for (int c = 0; c < src.channels; ++c) {
    const double top = (1.0 - fx) * src.at(xa, ya, c) + fx * src.at(xb, ya, c);
    const double bot = (1.0 - fx) * src.at(xa, yb, c) + fx * src.at(xb, yb, c);
    const double v = (1.0 - fy) * top + fy * bot;
    rgb[c] = static_cast<std::uint8_t>(std::lround(v < 0 ? 0 : (v > 255 ? 255 : v)));
  }
}

}  // namespace

PerspectiveImage render(const EquirectImage& src, const WarpMap& map,
                        const Viewpoint& viewpoint) {
  if (src.width != 2 * src.height) {
    throw InputError("render: source must be a 2:1 equirectangular image");
  }
  PerspectiveImage out(map.width, map.height, 3);
  const Mat3 rot = viewpoint_matrix(viewpoint);
  std::size_t i = 0;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x, ++i) {
      if (!map.valid[i]) continue;  // stays black
      const Vec3 world = rot * to_unit_vector(map.dirs[i]);
      const SphericalPoint dir{std::atan2(world.x, world.z),
                               std::asin(world.y < -1.0 ? -1.0 : (world.y > 1.0 ? 1.0 : world.y))};
      const PixelCoord px = sphere_to_equirect(dir, src.width, src.height);
      sample_bilinear(src, px.x, px.y, &out.data[i * 3]);
    }
  }
  return out;
}

PerspectiveImage project_single(const EquirectImage& src, const PanniniParams& params,
                                const FrameSpec& spec, const Viewpoint& viewpoint) {
  const WarpMap map = build_warp(params, spec, {}, BlendWeights{});
  return render(src, map, viewpoint);
}

}  // namespace pano
