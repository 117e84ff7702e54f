#pragma once

#include <string>
#include <vector>

#include "pano/image.hpp"
#include "pano/sphere.hpp"

namespace pano {

// Great-circle arc with its true scene midpoint.
struct LineSegment {
  SphericalPoint start;
  SphericalPoint mid;
  SphericalPoint end;
  double arc_length = 0.0;  // radians between start and end
};

struct SalientPoint {
  SphericalPoint dir;
  double score = 1.0;
};

// Per-frame annotation content: the line set and the salient-point set.
struct FrameContent {
  int frame_index = 0;
  std::vector<LineSegment> lines;
  std::vector<SalientPoint> points;

  bool empty() const { return lines.empty() && points.empty(); }
};

// Builds a segment, computing arc_length and validating that mid lies on the
// great circle through start/end (throws InputError beyond mid_tolerance).
LineSegment make_line(const SphericalPoint& start, const SphericalPoint& mid,
                      const SphericalPoint& end, double mid_tolerance = 1e-6);

// Loads the annotation JSON ({"frames":[{"index":..,"lines":[..],"points":[..]}]}).
// Angles are radians; lines shorter than min_line_length are dropped.
std::vector<FrameContent> load_annotations(const std::string& path,
                                           double min_line_length);
std::vector<FrameContent> parse_annotations(const std::string& json_text,
                                            double min_line_length,
                                            const std::string& origin = "<string>");

std::string serialize_annotations(const std::vector<FrameContent>& frames);

// Pointwise blend_w * appear + (1 - blend_w) * motion.
SaliencyMap blend_saliency(const SaliencyMap& appear, const SaliencyMap& motion,
                           double blend_w);

// Strict local maxima under non-maximum suppression, sorted by descending
// score, pairwise separation >= nms_radius, at most max_points. Pixel
// locations are converted to directions via the equirectangular mapping.
std::vector<SalientPoint> extract_peaks(const SaliencyMap& s, int nms_radius,
                                        int max_points);

}  // namespace pano
