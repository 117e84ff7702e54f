#include "pano/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pano/error.hpp"

namespace pano {

namespace {
constexpr double kDenomEps = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ObjectiveEvaluator::ObjectiveEvaluator(const FrameContent& content,
                                       const EnergyWeights& weights,
                                       double fd_step, bool literal_form)
    : weights_(weights), fd_step_(fd_step), literal_(literal_form) {
  auto trig = [](const SphericalPoint& p) {
    return TrigPoint{std::sin(p.phi), std::cos(p.phi), std::tan(p.theta)};
  };
  lines_.reserve(content.lines.size());
  for (const LineSegment& l : content.lines) {
    lines_.push_back({trig(l.start), trig(l.mid), trig(l.end)});
  }
  points_.reserve(content.points.size());
  for (const SalientPoint& p : content.points) {
    PointStencil st;
    const double h = fd_step_;
    st.s[0] = trig({p.dir.phi + h, p.dir.theta});
    st.s[1] = trig({p.dir.phi - h, p.dir.theta});
    st.s[2] = trig({p.dir.phi, p.dir.theta + h});
    st.s[3] = trig({p.dir.phi, p.dir.theta - h});
    st.cos_theta = std::cos(p.dir.theta);
    points_.push_back(st);
  }
}

bool ObjectiveEvaluator::project(const TrigPoint& t, const PanniniParams& p,
                                 double& u, double& v) const {
  const double denom = p.d + t.cphi;
  if (denom <= kDenomEps) return false;
  if (p.w != 0.0 && t.cphi <= kDenomEps) return false;
  const double s = p.d + 1.0;
  u = s * t.sphi / denom;
  v = t.ttheta * (s * (1.0 - p.w) / denom + (p.w != 0.0 ? p.w / t.cphi : 0.0));
  return true;
}

double ObjectiveEvaluator::eval(const PanniniParams& params) const {
  double e = 0.0;
  double u[4], v[4];
  for (const auto& line : lines_) {
    for (int i = 0; i < 3; ++i) {
      if (!project(line[i], params, u[i], v[i])) return kInf;
    }
    const double chord = std::hypot(u[0] - u[2], v[0] - v[2]);
    if (chord >= 1e-12) {
      const double area2 =
          u[0] * (v[2] - v[1]) + u[2] * (v[1] - v[0]) + u[1] * (v[0] - v[2]);
      const double r = area2 / chord;
      e += weights_.omega_d * r * r;
    }
  }
  const double inv2h = 1.0 / (2.0 * fd_step_);
  for (const PointStencil& st : points_) {
    for (int i = 0; i < 4; ++i) {
      if (!project(st.s[i], params, u[i], v[i])) return kInf;
    }
    const double du_dphi = (u[0] - u[1]) * inv2h;
    const double dv_dphi = (v[0] - v[1]) * inv2h;
    const double du_dtheta = (u[2] - u[3]) * inv2h;
    const double dv_dtheta = (v[2] - v[3]) * inv2h;
    const double first = literal_ ? st.cos_theta * du_dtheta + du_dphi
                                  : st.cos_theta * du_dtheta + dv_dphi;
    const double second = st.cos_theta * dv_dtheta - du_dphi;
    e += weights_.omega_c * (first * first + second * second);
  }
  return e;
}

double ObjectiveEvaluator::eval_checked(const PanniniParams& params) const {
  double u[4], v[4];
  for (std::size_t li = 0; li < lines_.size(); ++li) {
    for (int i = 0; i < 3; ++i) {
      if (!project(lines_[li][i], params, u[i], v[i])) {
        throw NumericError("objective: line " + std::to_string(li) +
                           " outside frustum at d=" + std::to_string(params.d) +
                           ", w=" + std::to_string(params.w));
      }
    }
  }
  for (std::size_t pi = 0; pi < points_.size(); ++pi) {
    for (int i = 0; i < 4; ++i) {
      if (!project(points_[pi].s[i], params, u[i], v[i])) {
        throw NumericError("objective: point " + std::to_string(pi) +
                           " outside frustum at d=" + std::to_string(params.d) +
                           ", w=" + std::to_string(params.w));
      }
    }
  }
  const double e = eval(params);
  if (!std::isfinite(e)) throw NumericError("objective: non-finite energy");
  return e;
}

PanniniParams optimize(const FrameContent& content, const EnergyWeights& weights,
                       const std::optional<ParamState>& prev,
                       const OptimizerConfig& cfg,
                       std::vector<double>* objective_trace) {
  const PanniniParams init{1.0, 0.0};
  const ObjectiveEvaluator ev(content, weights, cfg.fd_step, cfg.literal_eq4);
  if (ev.empty() && !prev) return init;

  auto penalty = [&](const PanniniParams& p) {
    if (!prev) return 0.0;
    const double dd = p.d - prev->raw.d;
    const double dw = p.w - prev->raw.w;
    return cfg.omega_pd * dd * dd + cfg.omega_ps * dw * dw;
  };
  auto f = [&](const PanniniParams& p) { return ev.eval(p) + penalty(p); };
  auto clamp = [&](PanniniParams p) {
    p.d = std::clamp(p.d, cfg.d_min, cfg.d_max);
    p.w = std::clamp(p.w, cfg.w_min, cfg.w_max);
    return p;
  };

  PanniniParams x = clamp(init);
  double fx = ev.eval_checked(x) + penalty(x);
  if (objective_trace) objective_trace->push_back(fx);

  const double h = cfg.fd_step_params;
  double step = cfg.step_size;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const double gd = (f({x.d + h, x.w}) - f({x.d - h, x.w})) / (2.0 * h);
    const double gw = (f({x.d, x.w + h}) - f({x.d, x.w - h})) / (2.0 * h);
    if (!std::isfinite(gd) || !std::isfinite(gw)) break;
    const double gnorm = std::hypot(gd, gw);
    if (gnorm < cfg.grad_tol) break;

    bool accepted = false;
    double t = step;
    for (int halving = 0; halving <= 30; ++halving, t *= 0.5) {
      const PanniniParams cand = clamp({x.d - t * gd, x.w - t * gw});
      if (cand.d == x.d && cand.w == x.w) continue;
      const double fc = f(cand);
      if (fc < fx) {
        x = cand;
        fx = fc;
        accepted = true;
        step = std::min(cfg.step_size, t * 2.0);
        break;
      }
    }
    if (!accepted) break;  // no descent direction within 2^-30 of the step
    if (objective_trace) objective_trace->push_back(fx);
  }
  return x;
}

PanniniParams smooth_params(const PanniniParams& raw,
                            const PanniniParams& prev_smoothed,
                            const OptimizerConfig& cfg) {
  return {cfg.omega_md * raw.d + (1.0 - cfg.omega_md) * prev_smoothed.d,
          cfg.omega_ms * raw.w + (1.0 - cfg.omega_ms) * prev_smoothed.w};
}

FrameContent neighborhood(const FrameContent& content, const SalientPoint& center,
                          const NeighborhoodSpec& spec) {
  FrameContent out;
  out.frame_index = content.frame_index;
  for (const LineSegment& l : content.lines) {
    if (angular_distance(l.mid, center.dir) <= spec.radius) out.lines.push_back(l);
  }
  bool center_present = false;
  for (const SalientPoint& p : content.points) {
    if (angular_distance(p.dir, center.dir) <= spec.radius) {
      out.points.push_back(p);
      if (angular_distance(p.dir, center.dir) < 1e-12) center_present = true;
    }
  }
  if (!center_present) out.points.push_back(center);
  return out;
}

}  // namespace pano
