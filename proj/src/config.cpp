#include "microswim/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace microswim {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void expect_object(const json& j, const std::string& field) {
  if (!j.is_object()) {
    fail(field, "expected an object");
  }
}

void reject_unknown(const json& j, const std::string& field, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(join(field, key), "unknown key");
    }
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) {
    fail(field, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    fail(field, "must be finite");
  }
  return v;
}

double positive(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!(v > 0.0)) {
    fail(field, "must be positive");
  }
  return v;
}

int positive_int(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() <= 0 || j.get<long long>() > 1'000'000'000) {
    fail(field, "expected a positive integer");
  }
  return j.get<int>();
}

// Plain numbers are radians; {"value": v, "unit": "deg" | "rad"} converts at the boundary.
double angle(const json& j, const std::string& field) {
  if (j.is_number()) {
    return number(j, field);
  }
  if (!j.is_object()) {
    fail(field, "expected radians or {\"value\": ..., \"unit\": \"deg\"|\"rad\"}");
  }
  reject_unknown(j, field, {"value", "unit"});
  if (!j.contains("value") || !j.contains("unit")) {
    fail(field, "tagged angle needs both \"value\" and \"unit\"");
  }
  const double v = number(j["value"], join(field, "value"));
  if (!j["unit"].is_string()) {
    fail(join(field, "unit"), "expected \"deg\" or \"rad\"");
  }
  const auto unit = j["unit"].get<std::string>();
  if (unit == "deg") {
    return v * std::numbers::pi / 180.0;
  }
  if (unit == "rad") {
    return v;
  }
  fail(join(field, "unit"), "expected \"deg\" or \"rad\", got \"" + unit + "\"");
}

// Same for rates: {"unit": "deg/s" | "rad/s"}.
double rate(const json& j, const std::string& field) {
  if (j.is_number()) {
    return number(j, field);
  }
  if (!j.is_object()) {
    fail(field, "expected rad/s or {\"value\": ..., \"unit\": \"deg/s\"|\"rad/s\"}");
  }
  reject_unknown(j, field, {"value", "unit"});
  if (!j.contains("value") || !j.contains("unit") || !j["unit"].is_string()) {
    fail(field, "tagged rate needs \"value\" and a string \"unit\"");
  }
  const double v = number(j["value"], join(field, "value"));
  const auto unit = j["unit"].get<std::string>();
  if (unit == "deg/s") {
    return v * std::numbers::pi / 180.0;
  }
  if (unit == "rad/s") {
    return v;
  }
  fail(join(field, "unit"), "expected \"deg/s\" or \"rad/s\", got \"" + unit + "\"");
}

void parse_fluid(const json& j, FluidParams& fluid) {
  expect_object(j, "fluid");
  reject_unknown(j, "fluid", {"viscosity", "density"});
  if (j.contains("viscosity")) {
    fluid.viscosity = positive(j["viscosity"], "fluid.viscosity");
  }
  if (j.contains("density")) {
    fluid.density = positive(j["density"], "fluid.density");
  }
}

void parse_link(const json& j, LinkGeometry& link) {
  expect_object(j, "link");
  reject_unknown(j, "link", {"half_length", "radius", "slenderness_ratio"});
  if (j.contains("radius") && j.contains("slenderness_ratio")) {
    fail("link", "give either radius or slenderness_ratio, not both");
  }
  if (j.contains("half_length")) {
    link.half_length = positive(j["half_length"], "link.half_length");
  }
  if (j.contains("radius")) {
    link.radius = positive(j["radius"], "link.radius");
  } else if (j.contains("slenderness_ratio")) {
    link.radius = positive(j["slenderness_ratio"], "link.slenderness_ratio") * link.half_length;
  } else {
    link.radius = 0.1 * link.half_length;
  }
  try {
    validate(link);
  } catch (const std::invalid_argument& e) {
    fail("link", e.what());
  }
}

void parse_drag(const json& j, RunConfig& cfg) {
  expect_object(j, "drag");
  reject_unknown(j, "drag", {"spin_coefficient", "force_scale", "anisotropy"});
  if (j.contains("spin_coefficient") && !j["spin_coefficient"].is_null()) {
    cfg.spin_coefficient = positive(j["spin_coefficient"], "drag.spin_coefficient");
  }
  if (j.contains("force_scale")) {
    cfg.force_scale = positive(j["force_scale"], "drag.force_scale");
  }
  if (j.contains("anisotropy")) {
    cfg.anisotropy = positive(j["anisotropy"], "drag.anisotropy");
  }
}

void parse_gait(const json& j, SinusoidGait& gait) {
  expect_object(j, "gait");
  reject_unknown(j, "gait", {"theta1", "phi1", "theta2", "phi2"});
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string field = std::string("gait.") + kJointNames[k];
    if (!j.contains(kJointNames[k])) {
      fail(field, "missing joint sinusoid");
    }
    const json& s = j[kJointNames[k]];
    expect_object(s, field);
    reject_unknown(s, field, {"amplitude", "frequency", "phase", "offset"});
    JointSinusoid js;
    if (s.contains("amplitude")) {
      js.amplitude = angle(s["amplitude"], field + ".amplitude");
    }
    if (s.contains("frequency")) {
      js.frequency = rate(s["frequency"], field + ".frequency");
    }
    if (s.contains("phase")) {
      js.phase = angle(s["phase"], field + ".phase");
    }
    if (s.contains("offset")) {
      js.offset = angle(s["offset"], field + ".offset");
    }
    gait.joints[k] = js;
  }
}

void parse_integration(const json& j, IntegrationConfig& integ) {
  expect_object(j, "integration");
  reject_unknown(j, "integration", {"dt", "duration"});
  if (j.contains("dt")) {
    integ.dt = positive(j["dt"], "integration.dt");
  }
  if (j.contains("duration")) {
    integ.duration = number(j["duration"], "integration.duration");
    if (integ.duration < 0.0) {
      fail("integration.duration", "must be non-negative");
    }
  }
}

void parse_output(const json& j, OutputConfig& out) {
  expect_object(j, "output");
  reject_unknown(j, "output", {"directory", "formats", "svg_width", "svg_height"});
  if (j.contains("directory")) {
    if (!j["directory"].is_string() || j["directory"].get<std::string>().empty()) {
      fail("output.directory", "expected a non-empty string");
    }
    out.directory = j["directory"].get<std::string>();
  }
  if (j.contains("formats")) {
    if (!j["formats"].is_array()) {
      fail("output.formats", "expected an array");
    }
    out.formats.clear();
    for (const auto& f : j["formats"]) {
      if (!f.is_string() || (f != "csv" && f != "json" && f != "svg")) {
        fail("output.formats", "entries must be \"csv\", \"json\" or \"svg\"");
      }
      out.formats.push_back(f.get<std::string>());
    }
  }
  if (j.contains("svg_width")) {
    out.svg_width = positive_int(j["svg_width"], "output.svg_width");
  }
  if (j.contains("svg_height")) {
    out.svg_height = positive_int(j["svg_height"], "output.svg_height");
  }
}

void parse_shape(const json& j, RestrictedShape<double>& shape) {
  expect_object(j, "analysis.shape");
  reject_unknown(j, "analysis.shape", {"theta1", "phi1", "theta2", "phi2"});
  for (std::size_t k = 0; k < 4; ++k) {
    if (j.contains(kJointNames[k])) {
      shape.angles(static_cast<Eigen::Index>(k)) =
          angle(j[kJointNames[k]], std::string("analysis.shape.") + kJointNames[k]);
    }
  }
}

void parse_analysis(const json& j, AnalysisConfig& a) {
  expect_object(j, "analysis");
  reject_unknown(j, "analysis", {"shape", "depth", "rank_tolerance", "span_tolerance", "fd_step", "lie_step",
                                 "direction_tolerance", "roundoff_factor", "column_order"});
  if (j.contains("shape")) {
    parse_shape(j["shape"], a.shape);
  }
  if (j.contains("depth")) {
    a.filtration.depth = positive_int(j["depth"], "analysis.depth");
    if (a.filtration.depth > controllability::kMaxFiltrationDepth) {
      fail("analysis.depth", "at most " + std::to_string(controllability::kMaxFiltrationDepth));
    }
  }
  if (j.contains("rank_tolerance")) {
    a.rank_tolerance = positive(j["rank_tolerance"], "analysis.rank_tolerance");
  }
  if (j.contains("span_tolerance")) {
    a.filtration.span_tolerance = positive(j["span_tolerance"], "analysis.span_tolerance");
  }
  if (j.contains("fd_step")) {
    a.filtration.fd_step = positive(j["fd_step"], "analysis.fd_step");
  }
  if (j.contains("lie_step")) {
    a.filtration.lie_step = positive(j["lie_step"], "analysis.lie_step");
  }
  if (j.contains("direction_tolerance")) {
    a.filtration.direction_tolerance = positive(j["direction_tolerance"], "analysis.direction_tolerance");
  }
  if (j.contains("roundoff_factor")) {
    a.filtration.roundoff_factor = number(j["roundoff_factor"], "analysis.roundoff_factor");
    if (a.filtration.roundoff_factor < 0.0) {
      fail("analysis.roundoff_factor", "must be non-negative");
    }
  }
  if (j.contains("column_order")) {
    const json& c = j["column_order"];
    if (!c.is_array() || c.size() != 4) {
      fail("analysis.column_order", "expected a permutation of [\"theta1\",\"phi1\",\"theta2\",\"phi2\"]");
    }
    std::set<int> seen;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto it = c[k].is_string() ? std::find(kJointNames.begin(), kJointNames.end(), c[k].get<std::string>())
                                       : kJointNames.end();
      if (it == kJointNames.end()) {
        fail("analysis.column_order", "unknown joint name");
      }
      const int idx = static_cast<int>(it - kJointNames.begin());
      if (!seen.insert(idx).second) {
        fail("analysis.column_order", "duplicate joint name");
      }
      a.column_order[k] = idx;
    }
  }
}

void parse_validation(const json& j, ValidationConfig& v) {
  expect_object(j, "validation");
  reject_unknown(j, "validation", {"shapes", "segments", "tolerance", "convergence_segments"});
  if (j.contains("shapes")) {
    v.shapes = positive_int(j["shapes"], "validation.shapes");
  }
  if (j.contains("segments")) {
    v.segments = positive_int(j["segments"], "validation.segments");
    if (v.segments < 10) {
      fail("validation.segments", "must be at least 10");
    }
  }
  if (j.contains("tolerance")) {
    v.tolerance = positive(j["tolerance"], "validation.tolerance");
  }
  if (j.contains("convergence_segments")) {
    const json& c = j["convergence_segments"];
    if (!c.is_array() || c.size() < 2) {
      fail("validation.convergence_segments", "expected at least two segment counts");
    }
    v.convergence_segments.clear();
    for (const auto& n : c) {
      const int segs = positive_int(n, "validation.convergence_segments");
      if (segs < 10) {
        fail("validation.convergence_segments", "segment counts must be at least 10");
      }
      v.convergence_segments.push_back(segs);
    }
  }
}

}  // namespace

DragModel RunConfig::drag() const {
  DragModel m = make_drag_model(fluid, link, spin_coefficient, force_scale);
  m.coefficients.c_perp = anisotropy * m.coefficients.c_par;
  return m;
}

void validate(const RunConfig& c) {
  const double dt = c.integration.dt;
  const double duration = c.integration.duration;
  if (!(dt > 0.0)) {
    fail("integration.dt", "must be positive");
  }
  if (duration > 0.0) {
    if (dt > duration) {
      fail("integration.dt", "exceeds integration.duration");
    }
    const double ratio = duration / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      fail("integration.duration", "must be an integer multiple of integration.dt");
    }
  }
  try {
    validate(c.fluid);
    validate(c.link);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("physical parameters: ") + e.what());
  }
  if (c.output.svg_width < 200 || c.output.svg_height < 120) {
    fail("output", "svg_width/svg_height must be at least 200 x 120");
  }
}

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  expect_object(j, "config");
  reject_unknown(j, "", {"$schema", "fluid", "link", "drag", "gait", "integration", "output", "analysis",
                         "validation", "seed"});
  RunConfig cfg;
  if (j.contains("fluid")) {
    parse_fluid(j["fluid"], cfg.fluid);
  }
  if (j.contains("link")) {
    parse_link(j["link"], cfg.link);
  }
  if (j.contains("drag")) {
    parse_drag(j["drag"], cfg);
  }
  if (j.contains("gait")) {
    parse_gait(j["gait"], cfg.gait);
  }
  if (j.contains("integration")) {
    parse_integration(j["integration"], cfg.integration);
  }
  if (j.contains("output")) {
    parse_output(j["output"], cfg.output);
  }
  if (j.contains("analysis")) {
    parse_analysis(j["analysis"], cfg.analysis);
  }
  if (j.contains("validation")) {
    parse_validation(j["validation"], cfg.validation);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      fail("seed", "expected a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config: cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace microswim
