#pragma once

#include "pano/image.hpp"
#include "pano/interpolation.hpp"
#include "pano/sphere.hpp"

namespace pano {

// Samples the equirectangular source through the backward warp map. Map
// directions are viewpoint-relative; they are rotated into world frame,
// converted to fractional equirectangular coordinates, and bilinearly
// sampled with horizontal wrap and vertical clamp. Invalid pixels are black.
PerspectiveImage render(const EquirectImage& src, const WarpMap& map,
                        const Viewpoint& viewpoint);

// Convenience path: single analytic model, no anchors. Bit-identical to
// render(build_warp(params, spec, {}, {}), ...).
PerspectiveImage project_single(const EquirectImage& src, const PanniniParams& params,
                                const FrameSpec& spec, const Viewpoint& viewpoint);

}  // namespace pano
