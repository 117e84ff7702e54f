#include "pano/content.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pano/error.hpp"

namespace pano {

namespace {

using nlohmann::json;

SphericalPoint parse_dir(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [phi, theta]");
  }
  return normalize_point({j[0].get<double>(), j[1].get<double>()});
}

}  // namespace

LineSegment make_line(const SphericalPoint& start, const SphericalPoint& mid,
                      const SphericalPoint& end, double mid_tolerance) {
  const Vec3 a = to_unit_vector(start);
  const Vec3 b = to_unit_vector(end);
  const Vec3 m = to_unit_vector(mid);
  const Vec3 n = a.cross(b);
  const double nn = n.norm();
  if (nn > 1e-12) {
    const double off = std::asin(std::min(1.0, std::abs(m.dot(n)) / nn));
    if (off > mid_tolerance) {
      throw InputError("line midpoint off great circle by " + std::to_string(off) +
                       " rad (tolerance " + std::to_string(mid_tolerance) + ")");
    }
  }
  LineSegment l{start, mid, end, angular_distance(start, end)};
  if (!(l.arc_length > 0.0)) {
    throw InputError("degenerate line segment: endpoints coincide");
  }
  return l;
}

std::vector<FrameContent> parse_annotations(const std::string& json_text,
                                            double min_line_length,
                                            const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("frames") || !root["frames"].is_array()) {
    throw ParseError(origin + ": missing \"frames\" array");
  }
  std::vector<FrameContent> frames;
  for (const auto& jf : root["frames"]) {
    FrameContent fc;
    fc.frame_index = jf.value("index", static_cast<int>(frames.size()));
    const std::string where = origin + " frame " + std::to_string(fc.frame_index);
    for (const auto& jl : jf.value("lines", json::array())) {
      const LineSegment l = make_line(parse_dir(jl.at("start"), where),
                                      parse_dir(jl.at("mid"), where),
                                      parse_dir(jl.at("end"), where));
      if (l.arc_length >= min_line_length) fc.lines.push_back(l);
    }
    for (const auto& jp : jf.value("points", json::array())) {
      SalientPoint p;
      p.dir = parse_dir(jp.at("dir"), where);
      p.score = jp.value("score", 1.0);
      if (!std::isfinite(p.score) || p.score < 0.0) {
        throw ParseError(where + ": point score must be finite and >= 0");
      }
      fc.points.push_back(p);
    }
    frames.push_back(std::move(fc));
  }
  return frames;
}

std::vector<FrameContent> load_annotations(const std::string& path,
                                           double min_line_length) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str(), min_line_length, path);
}

std::string serialize_annotations(const std::vector<FrameContent>& frames) {
  json root;
  root["frames"] = json::array();
  for (const FrameContent& fc : frames) {
    json jf;
    jf["index"] = fc.frame_index;
    jf["lines"] = json::array();
    for (const LineSegment& l : fc.lines) {
      jf["lines"].push_back({{"start", {l.start.phi, l.start.theta}},
                             {"mid", {l.mid.phi, l.mid.theta}},
                             {"end", {l.end.phi, l.end.theta}}});
    }
    jf["points"] = json::array();
    for (const SalientPoint& p : fc.points) {
      jf["points"].push_back({{"dir", {p.dir.phi, p.dir.theta}}, {"score", p.score}});
    }
    root["frames"].push_back(std::move(jf));
  }
  return root.dump(2);
}

SaliencyMap blend_saliency(const SaliencyMap& appear, const SaliencyMap& motion,
                           double blend_w) {
  if (appear.width != motion.width || appear.height != motion.height) {
    throw InputError("blend_saliency: dimension mismatch");
  }
  if (!(blend_w >= 0.0 && blend_w <= 1.0)) {
    throw InputError("blend_saliency: blend weight must be in [0, 1]");
  }
  SaliencyMap out;
  out.width = appear.width;
  out.height = appear.height;
  out.values.resize(appear.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = blend_w * appear.values[i] + (1.0 - blend_w) * motion.values[i];
  }
  return out;
}

std::vector<SalientPoint> extract_peaks(const SaliencyMap& s, int nms_radius,
                                        int max_points) {
  if (nms_radius < 1) throw InputError("extract_peaks: nms_radius must be >= 1");
  std::vector<SalientPoint> peaks;
  const int r = nms_radius;
  const double r2 = static_cast<double>(r) * r;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const double v = s.at(x, y);
      // A peak must be strictly greater than every neighbor in the radius;
      // plateaus yield no peaks.
      bool peak = true;
      for (int dy = -r; dy <= r && peak; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= s.height) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= s.width || (dx == 0 && dy == 0)) continue;
          if (dx * dx + dy * dy > r2) continue;
          if (s.at(xx, yy) >= v) {
            peak = false;
            break;
          }
        }
      }
      if (peak) {
        SalientPoint p;
        p.dir = equirect_to_sphere({x + 0.5, y + 0.5}, s.width, s.height);
        p.score = v;
        peaks.push_back(p);
      }
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const SalientPoint& a, const SalientPoint& b) {
                     return a.score > b.score;
                   });
  if (max_points >= 0 && static_cast<int>(peaks.size()) > max_points) {
    peaks.resize(max_points);
  }
  return peaks;
}

}  // namespace pano
