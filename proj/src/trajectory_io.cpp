#include "microswim/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace microswim {

namespace {

void append_number(std::string& out, double v) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  out.append(buf.data(), static_cast<std::size_t>(n));
}

struct Series {
  std::string label;
  std::function<double(const TrajectorySample&)> value;
};

constexpr std::array<const char*, 4> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", v);
  return buf.data();
}

std::string render(const Trajectory& traj, const std::string& title, const std::vector<Series>& series,
                   const SvgOptions& opt) {
  const double left = 70;
  const double right = 140;
  const double top = 30;
  const double bottom = 40;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;

  double t0 = 0;
  double t1 = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  if (!traj.samples.empty()) {
    t0 = traj.samples.front().state.t;
    t1 = traj.samples.back().state.t;
    for (const auto& s : traj.samples) {
      for (const auto& ser : series) {
        lo = std::min(lo, ser.value(s));
        hi = std::max(hi, ser.value(s));
      }
    }
  }
  if (!std::isfinite(lo)) {
    lo = -1;
    hi = 1;
  }
  if (hi - lo < 1e-300) {
    lo -= 1;
    hi += 1;
  }
  if (t1 <= t0) {
    t1 = t0 + 1;
  }
  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
  auto py = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left) + "\" y=\"18\" font-size=\"13\">" + title + "</text>\n";
  // Axes box with min/max ticks.
  svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt(left - 4) + "\" y=\"" + fmt(top + 4) + "\" text-anchor=\"end\">" + fmt(hi) + "</text>\n";
  svg += "<text x=\"" + fmt(left - 4) + "\" y=\"" + fmt(top + ph) + "\" text-anchor=\"end\">" + fmt(lo) +
         "</text>\n";
  svg += "<text x=\"" + fmt(left) + "\" y=\"" + fmt(top + ph + 16) + "\">" + fmt(t0) + "</text>\n";
  svg += "<text x=\"" + fmt(left + pw) + "\" y=\"" + fmt(top + ph + 16) + "\" text-anchor=\"end\">" + fmt(t1) +
         "</text>\n";
  svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(top + ph + 30) + "\" text-anchor=\"middle\">t [s]</text>\n";
  if (lo < 0 && hi > 0) {
    svg += "<line x1=\"" + fmt(left) + "\" x2=\"" + fmt(left + pw) + "\" y1=\"" + fmt(py(0)) + "\" y2=\"" +
           fmt(py(0)) + "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }

  // Thin the polyline to at most ~2 points per horizontal pixel.
  const std::size_t n = traj.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, n / static_cast<std::size_t>(std::max(1.0, 2 * pw)));
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % kColors.size()];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      svg += fmt(px(traj.samples[i].state.t)) + "," + fmt(py(series[k].value(traj.samples[i]))) + " ";
    }
    if (n > 0 && (n - 1) % stride != 0) {
      svg += fmt(px(traj.samples.back().state.t)) + "," + fmt(py(series[k].value(traj.samples.back())));
    }
    svg += "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(k);
    svg += "<line x1=\"" + fmt(left + pw + 10) + "\" x2=\"" + fmt(left + pw + 30) + "\" y1=\"" + fmt(ly - 4) +
           "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(left + pw + 34) + "\" y=\"" + fmt(ly) + "\">" + series[k].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

double deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out(kTrajectoryCsvHeader);
  out += '\n';
  for (const auto& sample : traj.samples) {
    const auto& s = sample.state;
    const std::array<double, 17> row = {s.t,
                                        s.pose.translation.x(),
                                        s.pose.translation.y(),
                                        s.pose.translation.z(),
                                        sample.euler.alpha,
                                        sample.euler.beta,
                                        sample.euler.gamma,
                                        s.body_velocity(0),
                                        s.body_velocity(1),
                                        s.body_velocity(2),
                                        s.body_velocity(3),
                                        s.body_velocity(4),
                                        s.body_velocity(5),
                                        s.shape.angles(0),
                                        s.shape.angles(1),
                                        s.shape.angles(2),
                                        s.shape.angles(3)};
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      append_number(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<SvgFigure> trajectory_svg(const Trajectory& traj, const SvgOptions& options) {
  if (options.width < 200 || options.height < 120) {
    throw std::invalid_argument("SVG size must be at least 200 x 120");
  }
  using S = TrajectorySample;
  std::vector<SvgFigure> figs;
  auto add = [&](std::string name, std::string title, std::vector<Series> series) {
    figs.push_back({name, title, render(traj, title, series, options)});
  };
  add("joint_positions", "Joint positions [deg]",
      {{"theta1", [](const S& s) { return deg(s.state.shape.angles(0)); }},
       {"phi1", [](const S& s) { return deg(s.state.shape.angles(1)); }},
       {"theta2", [](const S& s) { return deg(s.state.shape.angles(2)); }},
       {"phi2", [](const S& s) { return deg(s.state.shape.angles(3)); }}});
  add("joint_velocities", "Joint velocities [deg/s]",
      {{"theta1 rate", [](const S& s) { return deg(s.state.shape_rate(0)); }},
       {"phi1 rate", [](const S& s) { return deg(s.state.shape_rate(1)); }},
       {"theta2 rate", [](const S& s) { return deg(s.state.shape_rate(2)); }},
       {"phi2 rate", [](const S& s) { return deg(s.state.shape_rate(3)); }}});
  add("translational_velocity", "Base translational velocity [m/s]",
      {{"vx", [](const S& s) { return s.state.body_velocity(0); }},
       {"vy", [](const S& s) { return s.state.body_velocity(1); }},
       {"vz", [](const S& s) { return s.state.body_velocity(2); }}});
  add("rotational_velocity", "Base rotational velocity [rad/s]",
      {{"wx", [](const S& s) { return s.state.body_velocity(3); }},
       {"wy", [](const S& s) { return s.state.body_velocity(4); }},
       {"wz", [](const S& s) { return s.state.body_velocity(5); }}});
  add("translation", "Base translational displacement [m]",
      {{"x", [](const S& s) { return s.state.pose.translation.x(); }},
       {"y", [](const S& s) { return s.state.pose.translation.y(); }},
       {"z", [](const S& s) { return s.state.pose.translation.z(); }}});
  add("euler_angles", "Base Euler angles [deg]",
      {{"alpha (roll)", [](const S& s) { return deg(s.euler.alpha); }},
       {"beta (pitch)", [](const S& s) { return deg(s.euler.beta); }},
       {"gamma (yaw)", [](const S& s) { return deg(s.euler.gamma); }}});
  return figs;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

}  // namespace microswim
