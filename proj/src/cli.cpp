#include "microswim/cli.hpp"

#include "microswim/config.hpp"
#include "microswim/controllability.hpp"
#include "microswim/oracle.hpp"
#include "microswim/simulator.hpp"
#include "microswim/trajectory_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <Eigen/Geometry>
#include <fmt/ranges.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace microswim {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// A failed numerical check (as opposed to a crash or a bad config); exits with kExitFailure.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> formats;
};

// Tracks every file written in this run so a failure can take them all back.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, std::string_view content) {
    if (!dir_created_) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) {
        throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
      }
      dir_created_ = true;
    }
    const fs::path path = dir_ / name;
    write_file_atomic(path, content);
    written_.push_back(path);
  }

  void discard() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    written_.clear();
  }

  [[nodiscard]] const std::vector<fs::path>& written() const { return written_; }

 private:
  fs::path dir_;
  bool dir_created_{false};
  std::vector<fs::path> written_;
};

spdlog::level::level_enum log_level_from_env(std::vector<std::string>& complaints) {
  const char* raw = std::getenv("MICROSWIM_LOG");
  if (raw == nullptr || *raw == '\0') {
    return spdlog::level::warn;
  }
  const auto level = spdlog::level::from_str(raw);
  // from_str maps anything unknown to "off"; only accept that when asked for.
  if (level == spdlog::level::off && std::string(raw) != "off") {
    complaints.push_back(std::string("MICROSWIM_LOG: unknown level \"") + raw + "\", using warn");
    return spdlog::level::warn;
  }
  return level;
}

std::string num(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string fixed(double v, const char* f = "%13.6g") {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), f, v);
  return buf.data();
}

std::string pad(const char* s, std::size_t width) {
  const std::string str(s);
  return std::string(width > str.size() ? width - str.size() : 0, ' ') + str;
}

bool wants(const std::vector<std::string>& formats, const char* f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

json shape_json(const RestrictedShape<double>& s) {
  json j;
  for (std::size_t k = 0; k < 4; ++k) {
    j[kJointNames[k]] = s.angles(static_cast<Eigen::Index>(k));
  }
  return j;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(i, c));
    }
    rows.push_back(row);
  }
  return rows;
}

json names_json(const std::array<bool, 6>& axes) {
  json j = json::array();
  for (std::size_t k = 0; k < 6; ++k) {
    if (axes[k]) {
      j.push_back(controllability::kAxisNames[k]);
    }
  }
  return j;
}

json filtration_json(const controllability::FiltrationReport& r) {
  json j;
  j["shape"] = shape_json(r.shape);
  json actuated = json::array();
  for (int a : r.actuated) {
    actuated.push_back(kJointNames[static_cast<std::size_t>(a)]);
  }
  j["actuated"] = actuated;
  j["depth"] = r.depth;
  j["span_tolerance"] = r.span_tolerance;
  j["cumulative_dims"] = r.cumulative_dims;
  j["generators"] = r.generators;
  j["singular_values"] = r.singular_values;
  j["cutoffs"] = r.cutoffs;
  // Basis vectors as a list of 6-vectors in (vx, vy, vz, wx, wy, wz) order.
  json basis = json::array();
  for (Eigen::Index c = 0; c < r.basis.cols(); ++c) {
    basis.push_back(std::vector<double>(r.basis.col(c).data(), r.basis.col(c).data() + 6));
  }
  j["basis"] = basis;
  j["dim"] = r.dim();
  j["reachable"] = names_json(r.reachable);
  j["spans_se3"] = r.spans_algebra;
  j["verdict"] = r.verdict();
  return j;
}

int cmd_connection(const RunConfig& cfg, OutputSet& outputs, const std::vector<std::string>& formats,
                   std::ostream& out, spdlog::logger& log) {
  const auto& shape = cfg.analysis.shape;
  const DragModel drag = cfg.drag();
  const auto form = local_connection(shape, drag);
  const int rank = controllability::connection_rank(shape, drag, cfg.analysis.rank_tolerance);
  log.info("connection at ({}, {}, {}, {}) rad, rank {}, cond(P) >= {:.3g}", shape.angles(0), shape.angles(1),
           shape.angles(2), shape.angles(3), rank, form.condition_estimate);

  const auto& order = cfg.analysis.column_order;
  out << "A(r), xi = -A rdot, at theta1=" << shape.angles(0) << " phi1=" << shape.angles(1)
      << " theta2=" << shape.angles(2) << " phi2=" << shape.angles(3) << " [rad]\n";
  out << "    ";
  for (int c : order) {
    out << pad(kJointNames[static_cast<std::size_t>(c)], 13);
  }
  out << '\n';
  for (int i = 0; i < 6; ++i) {
    out << pad(controllability::kAxisNames[static_cast<std::size_t>(i)], 4);
    for (int c : order) {
      out << ' ' << fixed(form.matrix(i, c));
    }
    out << '\n';
  }
  out << "rank " << rank << '\n';

  Eigen::Matrix<double, 6, 4> ordered;
  for (std::size_t k = 0; k < 4; ++k) {
    ordered.col(static_cast<Eigen::Index>(k)) = form.matrix.col(order[k]);
  }
  if (wants(formats, "json")) {
    json j;
    j["shape"] = shape_json(shape);
    json cols = json::array();
    for (int c : order) {
      cols.push_back(kJointNames[static_cast<std::size_t>(c)]);
    }
    j["columns"] = cols;
    j["rows"] = std::vector<std::string>(controllability::kAxisNames.begin(), controllability::kAxisNames.end());
    j["matrix"] = matrix_rows(ordered);
    j["rank"] = rank;
    j["condition_estimate"] = form.condition_estimate;
    outputs.write("connection.json", j.dump(2) + "\n");
  }
  if (wants(formats, "csv")) {
    std::string csv = "row";
    for (int c : order) {
      csv += std::string(",") + kJointNames[static_cast<std::size_t>(c)];
    }
    csv += '\n';
    for (int i = 0; i < 6; ++i) {
      csv += controllability::kAxisNames[static_cast<std::size_t>(i)];
      for (int c = 0; c < 4; ++c) {
        csv += "," + num(ordered(i, c));
      }
      csv += '\n';
    }
    outputs.write("connection.csv", csv);
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, OutputSet& outputs, const std::vector<std::string>& formats,
                 std::ostream& out, spdlog::logger& log) {
  for (const auto& w : cfg.gait.warnings(cfg.fluid, cfg.link)) {
    log.warn("{}", w);
  }
  const DragModel drag = cfg.drag();
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = simulate(cfg.gait, drag, cfg.integration.duration, cfg.integration.dt);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log.info("simulated {} steps in {:.3f} s", traj.samples.size() - 1, elapsed);

  const auto& first = traj.samples.front().state;
  const auto& last = traj.samples.back().state;
  for (const auto& s : traj.samples) {
    if (!s.state.pose.translation.allFinite() || !s.state.body_velocity.allFinite()) {
      throw CheckFailed("non-finite state at t = " + num(s.state.t));
    }
  }
  const Vector3d displacement = last.pose.translation - first.pose.translation;
  const Vector3d centroid_shift =
      world_centroid(last, cfg.link.half_length) - world_centroid(first, cfg.link.half_length);
  const double rotation_angle =
      Eigen::AngleAxisd(Matrix3d(first.pose.rotation.transpose() * last.pose.rotation)).angle();

  out << "steps " << traj.samples.size() - 1 << ", dt " << traj.dt << " s, duration " << last.t << " s\n";
  out << "final position  [m]   " << fixed(last.pose.translation.x()) << fixed(last.pose.translation.y())
      << fixed(last.pose.translation.z()) << '\n';
  const auto& e = traj.samples.back().euler;
  out << "final euler   [rad]   alpha " << fixed(e.alpha) << "  beta " << fixed(e.beta) << "  gamma "
      << fixed(e.gamma) << '\n';
  out << "net displacement [m]  " << fixed(displacement.norm()) << " (centroid " << fixed(centroid_shift.norm())
      << ")\n";
  out << "net rotation   [rad]  " << fixed(rotation_angle) << '\n';

  if (wants(formats, "csv")) {
    // A zero-length run has no motion to report; emit the header alone.
    if (cfg.integration.duration == 0.0) {
      outputs.write("trajectory.csv", std::string(kTrajectoryCsvHeader) + "\n");
    } else {
      outputs.write("trajectory.csv", trajectory_csv(traj));
    }
  }
  if (wants(formats, "svg")) {
    for (const auto& fig : trajectory_svg(traj, {cfg.output.svg_width, cfg.output.svg_height})) {
      outputs.write(fig.name + ".svg", fig.content);
    }
  }
  if (wants(formats, "json")) {
    json j;
    j["steps"] = traj.samples.size() - 1;
    j["dt"] = traj.dt;
    j["duration"] = last.t;
    j["final_position"] = {last.pose.translation.x(), last.pose.translation.y(), last.pose.translation.z()};
    j["final_euler"] = {{"alpha", e.alpha}, {"beta", e.beta}, {"gamma", e.gamma}};
    j["net_displacement"] = displacement.norm();
    j["centroid_displacement"] = centroid_shift.norm();
    j["net_rotation_angle"] = rotation_angle;
    j["max_joint_speed"] = cfg.gait.max_joint_speed();
    j["reynolds_number"] = cfg.gait.implied_reynolds(cfg.fluid, cfg.link);
    j["warnings"] = cfg.gait.warnings(cfg.fluid, cfg.link);
    outputs.write("summary.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_controllability(const RunConfig& cfg, OutputSet& outputs, const std::vector<std::string>& formats,
                        std::ostream& out, spdlog::logger& log) {
  const DragModel drag = cfg.drag();
  const auto& shape = cfg.analysis.shape;
  const auto report = controllability::filtration(shape, drag, cfg.analysis.filtration);
  const auto planar = controllability::planar_decomposition_report(shape, drag, cfg.analysis.filtration);
  log.info("filtration dims {}", fmt::join(report.cumulative_dims, ","));

  json j = filtration_json(report);
  j["rank"] = controllability::connection_rank(shape, drag, cfg.analysis.rank_tolerance);
  j["planar_decomposition"] = {
      {"theta_actuation", filtration_json(planar.theta_actuation)},
      {"phi_actuation", filtration_json(planar.phi_actuation)},
      {"union", {{"dim", planar.union_dim},
                 {"reachable", names_json(planar.union_reachable)},
                 {"verdict", controllability::describe_axes(planar.union_reachable)}}}};
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (wants(formats, "json")) {
    outputs.write("controllability.json", text);
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, OutputSet& outputs, const std::vector<std::string>& formats,
                 std::ostream& out, spdlog::logger& log) {
  const DragModel drag = cfg.drag();
  oracle::ValidationOptions opt;
  opt.shapes = cfg.validation.shapes;
  opt.disc.segments_per_link = cfg.validation.segments;
  opt.tolerance = cfg.validation.tolerance;
  opt.seed = cfg.seed;
  const auto start = std::chrono::steady_clock::now();
  const auto report = oracle::validate_against_oracle(drag, opt);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log.info("oracle comparison on {} shapes took {:.2f} s", opt.shapes, elapsed);

  const auto probe = oracle::random_shapes(1, cfg.seed).front();
  const auto study = oracle::convergence_study(probe, drag, cfg.validation.convergence_segments);

  out << "oracle comparison: " << report.comparisons.size() << " shapes, " << opt.disc.segments_per_link
      << " segments/link, seed " << opt.seed << '\n';
  out << "  max |A - A_oracle|          " << fixed(report.max_connection_error) << "  (tolerance "
      << opt.tolerance << ")\n";
  out << "  max rel |P - P_oracle|      " << fixed(report.max_resistance_error) << '\n';
  out << "  force scale configured      " << fixed(report.configured_force_scale) << '\n';
  out << "  force scale from segments   " << fixed(report.calibrated_force_scale) << '\n';
  out << "  drag matrix rel deviation   " << fixed(report.drag_matrix_error) << '\n';
  out << "convergence at a random shape\n";
  out << "  segments         error    order\n";
  for (const auto& row : study.rows) {
    out << "  " << fixed(row.segments, "%8.0f") << "  " << fixed(row.error) << "  "
        << (row.observed_order == 0.0 ? std::string("       -") : fixed(row.observed_order, "%8.3f")) << '\n';
  }
  out << "  richardson     " << fixed(study.richardson_error) << '\n';
  out << (report.passed ? "PASS" : "FAIL") << '\n';

  if (wants(formats, "json")) {
    json j;
    j["shapes"] = report.comparisons.size();
    j["segments_per_link"] = opt.disc.segments_per_link;
    j["seed"] = opt.seed;
    j["tolerance"] = opt.tolerance;
    j["max_connection_error"] = report.max_connection_error;
    j["max_resistance_error"] = report.max_resistance_error;
    j["configured_force_scale"] = report.configured_force_scale;
    j["calibrated_force_scale"] = report.calibrated_force_scale;
    j["drag_matrix_error"] = report.drag_matrix_error;
    json rows = json::array();
    for (const auto& row : study.rows) {
      rows.push_back({{"segments", row.segments}, {"error", row.error}, {"observed_order", row.observed_order}});
    }
    j["convergence"] = {{"shape", shape_json(probe)}, {"rows", rows}, {"richardson_error", study.richardson_error}};
    j["passed"] = report.passed;
    outputs.write("validation.json", j.dump(2) + "\n");
  }
  if (wants(formats, "csv")) {
    std::string csv = "segments,error,observed_order\n";
    for (const auto& row : study.rows) {
      csv += std::to_string(row.segments) + "," + num(row.error) + "," + num(row.observed_order) + "\n";
    }
    outputs.write("convergence.csv", csv);
  }
  if (!report.passed) {
    throw CheckFailed("analytic connection disagrees with the segment-sum oracle (max error " +
                      num(report.max_connection_error) + ", force scale " + num(report.configured_force_scale) +
                      " vs " + num(report.calibrated_force_scale) + " from segments)");
  }
  return kExitOk;
}

using Command = int (*)(const RunConfig&, OutputSet&, const std::vector<std::string>&, std::ostream&,
                        spdlog::logger&);

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> complaints;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("microswim", sink);
  log.set_pattern("[%l] %v");
  log.set_level(log_level_from_env(complaints));
  for (const auto& c : complaints) {
    log.warn("{}", c);
  }

  CLI::App app{"Three-link 3-D swimmer at low Reynolds number: connection form, simulation, controllability."};
  app.name("microswim");
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "Output directory (overrides output.directory)");
  app.add_option("--seed", opt.seed, "Seed for random shape suites (overrides seed)");
  app.add_option("--format", opt.formats, "Output format(s): csv, json, svg (overrides output.formats)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  struct Sub {
    const char* name;
    const char* help;
    Command run;
    std::vector<std::string> accepted;
  };
  const std::array<Sub, 4> subs = {{
      {"connection", "Print the local connection A at analysis.shape", cmd_connection, {"csv", "json"}},
      {"simulate", "Integrate the configured gait and write the trajectory", cmd_simulate, {"csv", "json", "svg"}},
      {"controllability", "Lie-bracket filtration report (JSON)", cmd_controllability, {"json"}},
      {"validate", "Compare the analytic connection with the segment-sum oracle", cmd_validate, {"csv", "json"}},
  }};
  for (const auto& s : subs) {
    app.add_subcommand(s.name, s.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const Sub* sub = nullptr;
  for (const auto& s : subs) {
    if (app.got_subcommand(s.name)) {
      sub = &s;
    }
  }

  RunConfig cfg;
  try {
    cfg = opt.config_path.empty() ? parse_config("{}") : load_config(opt.config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (opt.seed) {
    cfg.seed = *opt.seed;
  }
  std::vector<std::string> formats = cfg.output.formats;
  if (!opt.formats.empty()) {
    for (const auto& f : opt.formats) {
      if (std::find(sub->accepted.begin(), sub->accepted.end(), f) == sub->accepted.end()) {
        err << "error: --format " << f << " is not available for " << sub->name << '\n';
        return kExitUsage;
      }
    }
    formats = opt.formats;
  }
  if (std::string(sub->name) == "controllability" && !wants(formats, "json")) {
    formats.emplace_back("json");
  }

  OutputSet outputs(opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.output.directory));
  try {
    const int code = sub->run(cfg, outputs, formats, out, log);
    for (const auto& p : outputs.written()) {
      log.info("wrote {}", p.string());
    }
    return code;
  } catch (const CheckFailed& e) {
    outputs.discard();
    err << "check failed: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    outputs.discard();
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace microswim
