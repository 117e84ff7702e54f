#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pano/content.hpp"
#include "pano/metrics.hpp"
#include "pano/projection.hpp"

namespace pano {

struct OptimizerConfig {
  double step_size = 0.1;
  int max_iters = 200;
  double grad_tol = 1e-7;
  double fd_step_params = 1e-4;
  double d_min = 0.0;
  double d_max = 3.0;
  double w_min = 0.0;
  double w_max = 1.0;
  // Temporal penalty (previous-frame parameter anchoring).
  double omega_pd = 0.999;
  double omega_ps = 1e-6;
  // Parameter EMA.
  double omega_md = 0.9;
  double omega_ms = 0.9;
  // Passed through to the conformality energy.
  double fd_step = 1e-3;
  bool literal_eq4 = false;

  bool operator==(const OptimizerConfig&) const = default;
};

struct ParamState {
  PanniniParams raw;       // per-frame optimum before smoothing
  PanniniParams smoothed;  // EMA output
  int frame_index = 0;
};

struct NeighborhoodSpec {
  double radius = 0.5235987755982988;  // 30 degrees
};

// Precomputed-trigonometry evaluator for the objective; evaluating one
// parameter pair touches no transcendental functions beyond the setup.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const FrameContent& content, const EnergyWeights& weights,
                     double fd_step, bool literal_form);

  // +infinity when any content falls outside the candidate frustum.
  double eval(const PanniniParams& params) const;
  // As eval, but throws NumericError naming the offending line/point.
  double eval_checked(const PanniniParams& params) const;

  bool empty() const { return lines_.empty() && points_.empty(); }

 private:
  struct TrigPoint {
    double sphi, cphi, ttheta;
  };
  struct PointStencil {
    TrigPoint s[4];  // phi+h, phi-h, theta+h, theta-h
    double cos_theta;
  };

  bool project(const TrigPoint& t, const PanniniParams& p, double& u, double& v) const;

  std::vector<std::array<TrigPoint, 3>> lines_;
  std::vector<PointStencil> points_;
  EnergyWeights weights_;
  double fd_step_;
  bool literal_;
};

// Projected steepest descent with backtracking step halving on the Eq.-style
// energy, plus the temporal parameter penalty against prev->raw when given.
// Deterministic; the accepted iterate sequence is monotonically non-increasing.
// Empty content with no prev returns the (d=1, w=0) default.
PanniniParams optimize(const FrameContent& content, const EnergyWeights& weights,
                       const std::optional<ParamState>& prev,
                       const OptimizerConfig& cfg,
                       std::vector<double>* objective_trace = nullptr);

// d' = omega_md * d + (1 - omega_md) * d'_prev, likewise for w with omega_ms.
PanniniParams smooth_params(const PanniniParams& raw,
                            const PanniniParams& prev_smoothed,
                            const OptimizerConfig& cfg);

// Lines whose midpoint and points whose direction lie within the angular
// radius of center; center itself is always included.
FrameContent neighborhood(const FrameContent& content, const SalientPoint& center,
                          const NeighborhoodSpec& spec);

}  // namespace pano
