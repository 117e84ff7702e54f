#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pano/content.hpp"
#include "pano/image.hpp"
#include "pano/sphere.hpp"

namespace pano {

// Wireframe-room test scene rendered from the room center, with exact
// ground-truth line segments and marker directions.
struct SceneSpec {
  double half_extent = 1.0;
  int grid_count = 2;  // scales the edge layout; 2 yields 11 visible lines
  std::array<std::uint8_t, 3> line_color{255, 255, 255};
  std::array<std::uint8_t, 3> background{24, 28, 36};
  std::array<std::uint8_t, 3> marker_color{255, 64, 64};
  std::vector<Vec3> markers;  // 3D points inside the room
  int equirect_width = 2048;
  int equirect_height = 1024;
};

struct SceneEdge {
  Vec3 a;
  Vec3 b;
};

// The default scene: 11 edges (vertical, wall-horizontal, and floor-radial)
// and a 4x4 grid of 16 wall markers.
SceneSpec default_scene();

// 3D edges of the wireframe layout for a spec (6 * grid_count - 1 edges).
std::vector<SceneEdge> scene_edges(const SceneSpec& spec);

// Renders the scene to an equirectangular image and emits ground-truth
// content (exact endpoints/midpoints, exact marker directions).
std::pair<EquirectImage, FrameContent> generate(const SceneSpec& spec);

}  // namespace pano
