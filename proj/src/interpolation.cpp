#include "pano/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>

#include "pano/error.hpp"

namespace pano {

namespace {

constexpr char kWarpMagic[4] = {'P', 'W', 'R', 'P'};

// Rotation centering the local model's view on the salient point.
Viewpoint center_viewpoint(const SphericalPoint& dir) {
  return Viewpoint{dir.phi, dir.theta, 0.0};
}

}  // namespace

AnchorModel align_local(const PanniniParams& global_params, const FrameSpec& spec,
                        const SalientPoint& salient, const PanniniParams& local_params,
                        double weight_c) {
  const PlaneScale scale = plane_scale(spec, global_params);
  AnchorModel anchor;
  anchor.center_dir = salient.dir;
  anchor.params = local_params;
  anchor.weight_c = weight_c;
  anchor.anchor_px = scale.plane_to_pixel(pannini_forward(salient.dir, global_params));

  // One-probe similarity fix: a 0.1 rad yaw offset from the salient point must
  // land at the same pixel distance from the anchor under both models.
  const double kProbe = 0.1;
  anchor.scale = 1.0;
  try {
    const SphericalPoint probe_view =
        rotate_out_of_view({kProbe, 0.0}, center_viewpoint(salient.dir));
    const PixelCoord probe_px =
        scale.plane_to_pixel(pannini_forward(probe_view, global_params));
    const double dist_g = std::hypot(probe_px.x - anchor.anchor_px.x,
                                     probe_px.y - anchor.anchor_px.y);
    const double u_local = pannini_forward({kProbe, 0.0}, local_params).u;
    const double dist_l = std::abs(u_local) * scale.px_per_unit;
    if (dist_l > 1e-12 && dist_g > 1e-12) {
      anchor.scale = dist_g / dist_l;
    }
  } catch (const NumericError&) {
    std::cerr << "align_local: probe outside frustum, falling back to scale 1\n";
  }
  return anchor;
}

InterpolatedModel::InterpolatedModel(const PanniniParams& global_params,
                                     const FrameSpec& spec,
                                     std::vector<AnchorModel> anchors,
                                     const BlendWeights& bw)
    : global_(global_params), spec_(spec), scale_(plane_scale(spec, global_params)),
      anchors_(std::move(anchors)), bw_(bw) {
  if (bw_.sigma <= 0.0) {
    const double s = 0.25 * spec.width;
    bw_.sigma = s * s;
  }
  anchor_rot_.reserve(anchors_.size());
  for (const AnchorModel& a : anchors_) {
    anchor_rot_.push_back(viewpoint_matrix(center_viewpoint(a.center_dir)));
  }
}

bool InterpolatedModel::backward_vec(double px, double py, Vec3& out,
                                     bool renormalize) const {
  Vec3 vg;
  if (!try_pannini_inverse_vec(scale_.pixel_to_plane({px, py}), global_, vg)) {
    return false;
  }
  if (anchors_.empty()) {
    out = vg;  // degenerate blend; keep the global direction bit-exact
    return true;
  }
  const double inv2s = 1.0 / (2.0 * bw_.sigma);
  const double dgx = px - scale_.cx;
  const double dgy = py - scale_.cy;
  const double wg = bw_.c_g * std::exp(-dgx * dgx * inv2s) * std::exp(-dgy * dgy * inv2s);
  Vec3 acc = vg * wg;
  for (std::size_t k = 0; k < anchors_.size(); ++k) {
    const AnchorModel& a = anchors_[k];
    const double ppu = scale_.px_per_unit * a.scale;
    const PlanePoint q{(px - a.anchor_px.x) / ppu, (a.anchor_px.y - py) / ppu};
    Vec3 vl;
    if (!try_pannini_inverse_vec(q, a.params, vl)) continue;
    const double dx = px - a.anchor_px.x;
    const double dy = py - a.anchor_px.y;
    const double wk =
        a.weight_c * std::exp(-dx * dx * inv2s) * std::exp(-dy * dy * inv2s);
    acc = acc + (anchor_rot_[k] * vl) * wk;
  }
  const double n = acc.norm();
  if (!(n > 0.0)) return false;
  out = renormalize ? acc * (1.0 / n) : acc;
  return true;
}

bool InterpolatedModel::backward(const PixelCoord& px, SphericalPoint& out) const {
  Vec3 v;
  if (!backward_vec(px.x, px.y, v, true)) return false;
  out = {std::atan2(v.x, v.z), std::asin(std::clamp(v.y, -1.0, 1.0))};
  return true;
}

PixelCoord InterpolatedModel::forward(const SphericalPoint& dir) const {
  PixelCoord px = scale_.plane_to_pixel(pannini_forward(dir, global_));
  if (anchors_.empty()) return px;

  const double h = 0.25;  // FD step in pixels for the Jacobian
  for (int iter = 0; iter < 60; ++iter) {
    SphericalPoint b;
    if (!backward(px, b)) break;
    const double rphi = wrap_angle(b.phi - dir.phi);
    const double rtheta = b.theta - dir.theta;
    if (std::abs(rphi) < 1e-11 && std::abs(rtheta) < 1e-11) return px;

    SphericalPoint be, bw, bn, bs;
    if (!backward({px.x + h, px.y}, be) || !backward({px.x - h, px.y}, bw) ||
        !backward({px.x, px.y + h}, bn) || !backward({px.x, px.y - h}, bs)) {
      break;
    }
    const double j00 = wrap_angle(be.phi - bw.phi) / (2.0 * h);
    const double j01 = wrap_angle(bn.phi - bs.phi) / (2.0 * h);
    const double j10 = (be.theta - bw.theta) / (2.0 * h);
    const double j11 = (bn.theta - bs.theta) / (2.0 * h);
    const double det = j00 * j11 - j01 * j10;
    if (std::abs(det) < 1e-18) break;
    const double sx = (j11 * rphi - j01 * rtheta) / det;
    const double sy = (-j10 * rphi + j00 * rtheta) / det;
    px.x -= sx;
    px.y -= sy;
  }
  throw NumericError("InterpolatedModel::forward: Newton solve did not converge");
}

WarpMap InterpolatedModel::build() const {
  WarpMap map;
  map.width = spec_.width;
  map.height = spec_.height;
  map.dirs.resize(static_cast<std::size_t>(spec_.width) * spec_.height);
  map.valid.assign(map.dirs.size(), 0);

  const int w = spec_.width, h = spec_.height;
  const double inv2s = 1.0 / (2.0 * bw_.sigma);
  const std::size_t na = anchors_.size();

  // Per-column precomputation: plane abscissas and separable Gaussian factors.
  std::vector<double> ug(w), exg(w);
  for (int x = 0; x < w; ++x) {
    ug[x] = (x - scale_.cx) / scale_.px_per_unit;
    const double dx = x - scale_.cx;
    exg[x] = std::exp(-dx * dx * inv2s);
  }
  std::vector<std::vector<double>> ua(na), exa(na);
  for (std::size_t k = 0; k < na; ++k) {
    ua[k].resize(w);
    exa[k].resize(w);
    const AnchorModel& a = anchors_[k];
    const double ppu = scale_.px_per_unit * a.scale;
    for (int x = 0; x < w; ++x) {
      ua[k][x] = (x - a.anchor_px.x) / ppu;
      const double dx = x - a.anchor_px.x;
      exa[k][x] = std::exp(-dx * dx * inv2s);
    }
  }

  std::size_t i = 0;
  for (int y = 0; y < h; ++y) {
    const double vg_plane = (scale_.cy - y) / scale_.px_per_unit;
    const double dgy = y - scale_.cy;
    const double eyg = bw_.c_g * std::exp(-dgy * dgy * inv2s);
    std::vector<double> va(na), eya(na);
    for (std::size_t k = 0; k < na; ++k) {
      const AnchorModel& a = anchors_[k];
      va[k] = (a.anchor_px.y - y) / (scale_.px_per_unit * a.scale);
      const double dy = y - a.anchor_px.y;
      eya[k] = a.weight_c * std::exp(-dy * dy * inv2s);
    }
    for (int x = 0; x < w; ++x, ++i) {
      Vec3 vg;
      if (!try_pannini_inverse_vec({ug[x], vg_plane}, global_, vg)) continue;
      if (na == 0) {
        map.dirs[i] = {std::atan2(vg.x, vg.z), std::asin(std::clamp(vg.y, -1.0, 1.0))};
        map.valid[i] = 1;
        continue;
      }
      Vec3 acc = vg * (eyg * exg[x]);
      for (std::size_t k = 0; k < na; ++k) {
        Vec3 vl;
        if (!try_pannini_inverse_vec({ua[k][x], va[k]}, anchors_[k].params, vl)) {
          continue;
        }
        acc = acc + (anchor_rot_[k] * vl) * (eya[k] * exa[k][x]);
      }
      const double n = acc.norm();
      if (!(n > 0.0)) continue;
      map.dirs[i] = {std::atan2(acc.x, acc.z),
                     std::asin(std::clamp(acc.y / n, -1.0, 1.0))};
      map.valid[i] = 1;
    }
  }
  return map;
}

WarpMap build_warp(const PanniniParams& global_params, const FrameSpec& spec,
                   const std::vector<AnchorModel>& anchors, const BlendWeights& bw) {
  return InterpolatedModel(global_params, spec, anchors, bw).build();
}

void save_warp(const std::string& path, const WarpMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(kWarpMagic, 4);
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(map.width),
                                 static_cast<std::uint32_t>(map.height)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < map.dirs.size(); ++i) {
    const double pair[2] = {map.valid[i] ? map.dirs[i].phi : nan,
                            map.valid[i] ? map.dirs[i].theta : nan};
    out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
  }
  if (!out) throw InputError("write failed: " + path);
}

WarpMap load_warp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kWarpMagic, 4) != 0) {
    throw ParseError(path + ": not a PWRP warp file");
  }
  std::uint32_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || dims[0] == 0 || dims[1] == 0 || dims[0] > 1u << 16 || dims[1] > 1u << 16) {
    throw ParseError(path + ": bad warp dimensions");
  }
  WarpMap map;
  map.width = static_cast<int>(dims[0]);
  map.height = static_cast<int>(dims[1]);
  map.dirs.resize(static_cast<std::size_t>(map.width) * map.height);
  map.valid.assign(map.dirs.size(), 0);
  for (std::size_t i = 0; i < map.dirs.size(); ++i) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof(pair));
    if (!in) throw ParseError(path + ": truncated warp data");
    if (std::isfinite(pair[0]) && std::isfinite(pair[1])) {
      map.dirs[i] = {pair[0], pair[1]};
      map.valid[i] = 1;
    }
  }
  return map;
}

}  // namespace pano
