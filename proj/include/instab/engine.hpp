#pragma once

// Instability experiments: sample a packing family, push every sampled shape
// through a forward map, and report the closest admissible pair per epsilon.
// Results are the empirical minimum over the sampling budget, never the
// pigeonhole optimum.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "instab/config.hpp"
#include "instab/opnet.hpp"
#include "instab/packing.hpp"

namespace instab {

enum class ProblemKind { dtn, ntd, electrodes, farfield };

std::string_view to_string(ProblemKind k);
ProblemKind parse_problem_kind(std::string_view s);

struct EngineConfig {
  ProblemKind problem = ProblemKind::dtn;
  PackingClass packing{ShapeKind::radial_subgraph, 0.5, {}, 1, 1.0, 0.25, 2048};
  std::vector<double> eps_list{0.12, 0.08, 0.05, 0.03};
  std::size_t budget = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 uses hardware_concurrency
  // conductivity
  double a = 2.0;
  int n_max = 32;
  int quad_nodes = 512;
  int electrodes = 8;
  double electrode_coverage = 0.5;
  double impedance = 0.1;
  // scattering
  std::vector<double> a_list{1.0, 4.0};
  int scatter_nodes = 256;
  int directions = 0;
};

/// Defaults for a problem: the inclusion class (radius 1/2, cap 1/4) for the
/// conductivity maps, the obstacle class (radius 1, cap 1/2) for farfield.
EngineConfig default_engine_config(ProblemKind problem);

/// Engine settings from an experiment config; zero radius or cap fall back
/// to the problem defaults.
EngineConfig engine_config_from(const ExperimentConfig& cfg);

struct WitnessRecord {
  double eps = 0.0;
  std::size_t cells = 0;
  std::size_t patterns = 0;  // distinct patterns evaluated
  Pattern first, second;
  double hausdorff = 0.0;
  double resolution = 0.0;
  double norm = 0.0;  // operator-difference norm of the pair
  double delta = 0.0;
  double certified_log_cardinality = 0.0;
  double packing_log_bound = 0.0;
  double net_log_bound = 0.0;
  double counting_margin = 0.0;
  bool counting_exceeds = false;
};

struct ExponentFit {
  double q = 0.0;  // slope of log(-log norm) against log(1/eps)
  double intercept = 0.0;
  double r2 = 0.0;
  double power_r2 = 0.0;  // r^2 of log norm against log eps
  int points_used = 0;
  int unusable = 0;      // norms >= 1, outside the double-log frame
  bool clipped = false;  // some norm sat below the 1e-300 floor
  bool non_exponential = false;
};

struct InstabilityReport {
  EngineConfig config;
  double eps0 = 0.0;
  ClassConstants constants;  // fitted surrogate used for the net bound
  DecayFit decay;
  double eps1 = 0.0;  // below this every grid eps has a positive counting margin; 0 if none
  double theoretical_exponent = 0.0;
  std::vector<WitnessRecord> records;
  ExponentFit fit;
};

inline constexpr double kNormFloor = 1e-300;

/// Witness distances: spectral norm of the weighted DtN difference (dtn), of
/// the NtD difference in its natural weights (ntd), of the resistance
/// difference (electrodes); sup over wave parameters of the far-field L2
/// difference (farfield).
InstabilityReport run_instability(const EngineConfig& cfg);
InstabilityReport run_instability(ProblemKind problem, const std::vector<double>& eps_list, std::size_t budget,
                                  std::uint64_t seed);

ExponentFit fit_instability_exponent(const std::vector<double>& eps, const std::vector<double>& norms);
ExponentFit fit_instability_exponent(const InstabilityReport& report);

/// Largest eps on a log grid from eps0 down to the smallest representable
/// delta(eps) with a positive counting margin at it and every smaller grid
/// point; 0 when no such eps exists.
double counting_threshold(const PackingClass& cls, double eps0, const ClassConstants& c, bool complex);

/// Report as CSV (one row per epsilon), summary lines, and the two-column plot data.
std::string report_csv(const InstabilityReport& report);
std::string report_summary_csv(const InstabilityReport& report);
std::string report_plot_data(const InstabilityReport& report);

}  // namespace instab
