#include "pano/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "pano/error.hpp"

namespace pano {

namespace {

struct Key {
  const char* name;
  std::function<std::string(const ProjectionConfig&)> get;
  std::function<void(ProjectionConfig&, const std::string&, const std::string&)> set;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

double to_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& where) {
  const double d = to_double(v, where);
  if (d != std::floor(d)) throw ParseError(where + ": not an integer: '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(where + ": not a boolean: '" + v + "'");
}

Key dkey(const char* name, double ProjectionConfig::* f) {
  return {name, [f](const ProjectionConfig& c) { return fmt(c.*f); },
          [f](ProjectionConfig& c, const std::string& v, const std::string& w) {
            c.*f = to_double(v, w);
          }};
}

Key ikey(const char* name, int ProjectionConfig::* f) {
  return {name, [f](const ProjectionConfig& c) { return std::to_string(c.*f); },
          [f](ProjectionConfig& c, const std::string& v, const std::string& w) {
            c.*f = to_int(v, w);
          }};
}

template <typename Sub>
Key dsub(const char* name, Sub ProjectionConfig::* sub, double Sub::* f) {
  return {name, [=](const ProjectionConfig& c) { return fmt(c.*sub.*f); },
          [=](ProjectionConfig& c, const std::string& v, const std::string& w) {
            c.*sub.*f = to_double(v, w);
          }};
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      dkey("h_fov_deg", &ProjectionConfig::h_fov_deg),
      ikey("width", &ProjectionConfig::width),
      ikey("height", &ProjectionConfig::height),
      dsub("omega_d", &ProjectionConfig::weights, &EnergyWeights::omega_d),
      dsub("omega_c", &ProjectionConfig::weights, &EnergyWeights::omega_c),
      dsub("omega_pd", &ProjectionConfig::opt, &OptimizerConfig::omega_pd),
      dsub("omega_ps", &ProjectionConfig::opt, &OptimizerConfig::omega_ps),
      dsub("omega_md", &ProjectionConfig::opt, &OptimizerConfig::omega_md),
      dsub("omega_ms", &ProjectionConfig::opt, &OptimizerConfig::omega_ms),
      dsub("omega_p_moving", &ProjectionConfig::temporal, &TemporalConfig::omega_p_moving),
      dsub("omega_p_static", &ProjectionConfig::temporal, &TemporalConfig::omega_p_static),
      dsub("motion_threshold", &ProjectionConfig::temporal, &TemporalConfig::motion_threshold),
      dkey("c_g", &ProjectionConfig::c_g),
      dkey("c_anchor", &ProjectionConfig::c_anchor),
      dkey("sigma", &ProjectionConfig::sigma),
      dkey("min_line_length", &ProjectionConfig::min_line_length),
      dkey("neighborhood_radius", &ProjectionConfig::neighborhood_radius),
      dsub("step_size", &ProjectionConfig::opt, &OptimizerConfig::step_size),
      {"max_iters",
       [](const ProjectionConfig& c) { return std::to_string(c.opt.max_iters); },
       [](ProjectionConfig& c, const std::string& v, const std::string& w) {
         c.opt.max_iters = to_int(v, w);
       }},
      dsub("grad_tol", &ProjectionConfig::opt, &OptimizerConfig::grad_tol),
      dsub("fd_step_params", &ProjectionConfig::opt, &OptimizerConfig::fd_step_params),
      dsub("fd_step", &ProjectionConfig::opt, &OptimizerConfig::fd_step),
      dsub("d_max", &ProjectionConfig::opt, &OptimizerConfig::d_max),
      {"literal_eq4",
       [](const ProjectionConfig& c) { return c.opt.literal_eq4 ? "true" : "false"; },
       [](ProjectionConfig& c, const std::string& v, const std::string& w) {
         c.opt.literal_eq4 = to_bool(v, w);
       }},
      ikey("max_points", &ProjectionConfig::max_points),
      ikey("nms_radius", &ProjectionConfig::nms_radius),
      dkey("blend_w", &ProjectionConfig::blend_w),
  };
  return keys;
}

}  // namespace

FrameSpec ProjectionConfig::frame_spec() const {
  return {h_fov_deg * std::numbers::pi / 180.0, width, height};
}

BlendWeights ProjectionConfig::blend_weights() const {
  return {c_g, c_anchor, sigma};
}

ProjectionConfig parse_config(const std::string& text, const std::string& origin) {
  ProjectionConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key=value");
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    bool found = false;
    for (const Key& k : key_table()) {
      if (key == k.name) {
        k.set(cfg, value, where);
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(where + ": unknown key '" + key + "'");
  }
  if (!(cfg.h_fov_deg > 0.0 && cfg.h_fov_deg < 180.0)) {
    throw ParseError(origin + ": h_fov_deg must be in (0, 180)");
  }
  if (cfg.width < 2 || cfg.height < 2) {
    throw ParseError(origin + ": output dimensions too small");
  }
  return cfg;
}

ProjectionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ProjectionConfig& cfg) {
  std::ostringstream out;
  for (const Key& k : key_table()) out << k.name << "=" << k.get(cfg) << "\n";
  return out.str();
}

}  // namespace pano
