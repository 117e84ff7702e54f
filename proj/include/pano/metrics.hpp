#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pano/content.hpp"
#include "pano/projection.hpp"

namespace pano {

using Projector = std::function<PlanePoint(const SphericalPoint&)>;

struct EnergyWeights {
  double omega_d = 1e-3;  // line term
  double omega_c = 1e-4;  // conformality term

  bool operator==(const EnergyWeights&) const = default;
};

// Squared area-form distance of the projected midpoint from the chord through
// the projected endpoints. Zero iff the projected points are collinear;
// degenerate chords score 0.
double line_distortion(const LineSegment& l, const Projector& proj);

// Conformality energy at p via central finite differences of the projection.
// The default evaluates the corrected Cauchy-Riemann form
//   (cos(theta) du/dtheta + dv/dphi)^2 + (cos(theta) dv/dtheta - du/dphi)^2,
// which vanishes at the undistorted center of every model; literal_form swaps
// dv/dphi for du/dphi in the first term.
double conformality_distortion(const SphericalPoint& p, const Projector& proj,
                               double fd_step = 1e-3, bool literal_form = false);

// omega_d * sum D(l) + omega_c * sum C(p). Throws NumericError (naming the
// offending item) when content falls outside the frustum.
double objective(const FrameContent& content, const PanniniParams& params,
                 const EnergyWeights& weights, double fd_step = 1e-3,
                 bool literal_form = false);

// alpha2 / (alpha1 + alpha2): chord length over chord length plus the
// perpendicular midpoint offset. 1 for a perfectly straight projection.
double straightness(const LineSegment& l, const Projector& proj);

// min(beta) / max(beta) over the four probe points offset by +-probe rad in
// phi and theta; 1 when the local shape is preserved.
double conformality_measure(const SphericalPoint& p, const Projector& proj,
                            double probe = 0.1);

// Per-item evaluation scores for one model.
struct MetricReport {
  std::string model;
  std::vector<double> line_straightness;
  std::vector<double> point_conformality;
  double mean_straightness = 1.0;
  double min_straightness = 1.0;
  double mean_conformality = 1.0;
  double min_conformality = 1.0;

  void finalize();
};

std::string report_to_json(const std::vector<MetricReport>& reports);
std::string report_to_csv(const std::vector<MetricReport>& reports);

}  // namespace pano
