#pragma once

// Experiment configuration: "key=value" lines, '#' starts a comment.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "instab/shapes.hpp"

namespace instab {

struct ExperimentConfig {
  // problem and class
  std::string problem = "dtn";  // dtn | ntd | electrodes | farfield
  ShapeKind kind = ShapeKind::radial_subgraph;
  double base_radius = 0.0;  // 0 picks the problem default (0.5, or 1 for farfield)
  int m = 1;
  double beta = 1.0;
  double eps_cap = 0.0;  // 0 picks the problem default (0.25, or 0.5 for farfield)
  double eps = 0.05;
  std::vector<double> eps_list{0.12, 0.08, 0.05, 0.03};
  std::size_t grid_size = 2048;
  // physics
  double a = 2.0;
  std::vector<double> a_list{1.0, 4.0};
  double rho = 0.5;
  int electrodes = 8;
  double electrode_coverage = 0.5;
  double impedance = 0.1;
  // solver knobs
  int n_max = 32;
  int quad_nodes = 512;
  int scatter_nodes = 256;
  int directions = 0;
  // sampling
  std::size_t budget = 200;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  int threads = 0;
  // opnet and spectral
  double delta = 1e-2;
  double C2 = 1.0;
  double alpha2 = 0.5;
  int p = 1;
  std::string domain = "full_circle";
  double r0 = 0.8;
  // io
  std::string shape_file;
  std::string out;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates; unknown keys, malformed or out-of-range values and
/// missing `required` keys throw ConfigError carrying the line number (a
/// missing key reports the line after the last one).
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& required = {});

/// Applies one key=value assignment (used for command-line overrides).
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value, int line = 0);

/// Range checks over the whole config; throws ConfigError with line 0.
void validate_config(const ExperimentConfig& cfg);

/// Every key in canonical order; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& cfg);

std::vector<double> parse_double_list(std::string_view text);

}  // namespace instab
