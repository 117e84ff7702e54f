#include "pano/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pano/error.hpp"

namespace pano {

double line_distortion(const LineSegment& l, const Projector& proj) {
  const PlanePoint s = proj(l.start);
  const PlanePoint m = proj(l.mid);
  const PlanePoint e = proj(l.end);
  const double chord = std::hypot(s.u - e.u, s.v - e.v);
  if (chord < 1e-12) return 0.0;
  const double area2 = s.u * (e.v - m.v) + e.u * (m.v - s.v) + m.u * (s.v - e.v);
  const double r = area2 / chord;
  return r * r;
}

double conformality_distortion(const SphericalPoint& p, const Projector& proj,
                               double fd_step, bool literal_form) {
  const double h = fd_step;
  const PlanePoint pe = proj({p.phi + h, p.theta});
  const PlanePoint pw = proj({p.phi - h, p.theta});
  const PlanePoint pn = proj({p.phi, p.theta + h});
  const PlanePoint ps = proj({p.phi, p.theta - h});
  const double du_dphi = (pe.u - pw.u) / (2.0 * h);
  const double dv_dphi = (pe.v - pw.v) / (2.0 * h);
  const double du_dtheta = (pn.u - ps.u) / (2.0 * h);
  const double dv_dtheta = (pn.v - ps.v) / (2.0 * h);
  const double ct = std::cos(p.theta);
  const double first = literal_form ? ct * du_dtheta + du_dphi
                                    : ct * du_dtheta + dv_dphi;
  const double second = ct * dv_dtheta - du_dphi;
  return first * first + second * second;
}

double objective(const FrameContent& content, const PanniniParams& params,
                 const EnergyWeights& weights, double fd_step, bool literal_form) {
  const Projector proj = [&params](const SphericalPoint& p) {
    return pannini_forward(p, params);
  };
  double e = 0.0;
  for (std::size_t i = 0; i < content.lines.size(); ++i) {
    try {
      e += weights.omega_d * line_distortion(content.lines[i], proj);
    } catch (const NumericError& err) {
      throw NumericError("objective: line " + std::to_string(i) + ": " + err.what());
    }
  }
  for (std::size_t i = 0; i < content.points.size(); ++i) {
    try {
      e += weights.omega_c *
           conformality_distortion(content.points[i].dir, proj, fd_step, literal_form);
    } catch (const NumericError& err) {
      throw NumericError("objective: point " + std::to_string(i) + ": " + err.what());
    }
  }
  if (!std::isfinite(e)) throw NumericError("objective: non-finite energy");
  return e;
}

double straightness(const LineSegment& l, const Projector& proj) {
  const PlanePoint s = proj(l.start);
  const PlanePoint m = proj(l.mid);
  const PlanePoint e = proj(l.end);
  const double alpha2 = std::hypot(s.u - e.u, s.v - e.v);
  if (alpha2 < 1e-12) return 1.0;
  const double area2 = s.u * (e.v - m.v) + e.u * (m.v - s.v) + m.u * (s.v - e.v);
  const double alpha1 = std::abs(area2) / alpha2;
  return alpha2 / (alpha1 + alpha2);
}

double conformality_measure(const SphericalPoint& p, const Projector& proj,
                            double probe) {
  const PlanePoint c = proj(p);
  const PlanePoint q[4] = {proj({p.phi + probe, p.theta}), proj({p.phi - probe, p.theta}),
                           proj({p.phi, p.theta + probe}), proj({p.phi, p.theta - probe})};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const PlanePoint& s : q) {
    const double beta = std::hypot(s.u - c.u, s.v - c.v);
    lo = std::min(lo, beta);
    hi = std::max(hi, beta);
  }
  if (hi < 1e-15) return 1.0;
  return lo / hi;
}

void MetricReport::finalize() {
  auto summarize = [](const std::vector<double>& xs, double& mean, double& mn) {
    if (xs.empty()) {
      mean = mn = 1.0;
      return;
    }
    double sum = 0.0;
    mn = xs.front();
    for (double x : xs) {
      sum += x;
      mn = std::min(mn, x);
    }
    mean = sum / static_cast<double>(xs.size());
  };
  summarize(line_straightness, mean_straightness, min_straightness);
  summarize(point_conformality, mean_conformality, min_conformality);
}

std::string report_to_json(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  out.precision(12);
  out << "{\n  \"models\": [\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const MetricReport& r = reports[i];
    out << "    {\n      \"model\": \"" << r.model << "\",\n";
    auto arr = [&out](const char* key, const std::vector<double>& xs) {
      out << "      \"" << key << "\": [";
      for (std::size_t j = 0; j < xs.size(); ++j) out << (j ? ", " : "") << xs[j];
      out << "],\n";
    };
    arr("line_straightness", r.line_straightness);
    arr("point_conformality", r.point_conformality);
    out << "      \"mean_straightness\": " << r.mean_straightness << ",\n"
        << "      \"min_straightness\": " << r.min_straightness << ",\n"
        << "      \"mean_conformality\": " << r.mean_conformality << ",\n"
        << "      \"min_conformality\": " << r.min_conformality << "\n    }"
        << (i + 1 < reports.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

std::string report_to_csv(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  out.precision(12);
  out << "model,kind,index,value\n";
  for (const MetricReport& r : reports) {
    for (std::size_t i = 0; i < r.line_straightness.size(); ++i) {
      out << r.model << ",straightness," << i << "," << r.line_straightness[i] << "\n";
    }
    for (std::size_t i = 0; i < r.point_conformality.size(); ++i) {
      out << r.model << ",conformality," << i << "," << r.point_conformality[i] << "\n";
    }
    out << r.model << ",straightness_mean,," << r.mean_straightness << "\n";
    out << r.model << ",straightness_min,," << r.min_straightness << "\n";
    out << r.model << ",conformality_mean,," << r.mean_conformality << "\n";
    out << r.model << ",conformality_min,," << r.min_conformality << "\n";
  }
  return out.str();
}

}  // namespace pano
