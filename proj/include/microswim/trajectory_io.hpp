#pragma once

#include "microswim/simulator.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace microswim {

inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,x,y,z,alpha,beta,gamma,vx,vy,vz,wx,wy,wz,theta1,phi1,theta2,phi2";

/// One header line plus one row per sample; every value printed with %.17g.
[[nodiscard]] std::string trajectory_csv(const Trajectory& traj);

struct SvgOptions {
  int width{800};
  int height{400};
};

struct SvgFigure {
  std::string name;  // file stem, e.g. "joint_positions"
  std::string title;
  std::string content;
};

/// Line plots: joint positions, joint velocities, base translational velocity, base rotational
/// velocity, base translation, base Euler angles.
[[nodiscard]] std::vector<SvgFigure> trajectory_svg(const Trajectory& traj, const SvgOptions& options = {});

/// Writes `content` to `path` through a temporary sibling and rename. Throws std::runtime_error
/// with the path on failure and leaves no partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace microswim
