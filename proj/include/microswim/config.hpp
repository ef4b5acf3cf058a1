#pragma once

#include "microswim/connection.hpp"
#include "microswim/controllability.hpp"
#include "microswim/drag.hpp"
#include "microswim/gait.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace microswim {

/// Invalid configuration. The message names the offending field, e.g. "fluid.viscosity: must be positive".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrationConfig {
  double dt{0.1};
  double duration{840.0};
};

struct OutputConfig {
  std::string directory{"out"};
  std::vector<std::string> formats{"csv"};
  int svg_width{800};
  int svg_height{400};
};

struct AnalysisConfig {
  RestrictedShape<double> shape;
  double rank_tolerance{1e-9};
  controllability::FiltrationOptions filtration;
  // Display order of the rate columns, as indices into (theta1, phi1, theta2, phi2).
  std::array<int, 4> column_order{0, 1, 2, 3};
};

struct ValidationConfig {
  int shapes{200};
  int segments{2000};
  double tolerance{1e-6};
  std::vector<int> convergence_segments{250, 500, 1000, 2000, 4000};
};

struct RunConfig {
  FluidParams fluid;
  LinkGeometry link;
  std::optional<double> spin_coefficient;
  double force_scale{2.0};
  double anisotropy{2.0};
  SinusoidGait gait = paper_gait();
  IntegrationConfig integration;
  OutputConfig output;
  AnalysisConfig analysis;
  ValidationConfig validation;
  std::uint64_t seed{42};

  /// Drag model with the configured overrides applied.
  [[nodiscard]] DragModel drag() const;
};

inline constexpr std::array<const char*, 4> kJointNames = {"theta1", "phi1", "theta2", "phi2"};

/// Parses and validates. Missing sections keep their defaults (the default gait is the
/// 840 s sinusoidal stroke); unknown keys are errors.
[[nodiscard]] RunConfig parse_config(std::string_view json_text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Cross-field checks (dt vs duration, positivity). parse_config already calls this.
void validate(const RunConfig& config);

}  // namespace microswim
