#pragma once

// Conductivity inclusion in the unit disk: Dirichlet-to-Neumann and
// Neumann-to-Dirichlet maps in the real Fourier basis, their weighted
// differences, and the complete-electrode-model resistance matrix.
//
// Basis ordering follows enumerate_basis(full_circle): index 0 is the
// constant 1/sqrt(2 pi), index 2j-1 is cos(j theta)/sqrt(pi), index 2j is
// sin(j theta)/sqrt(pi).

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "instab/opnet.hpp"
#include "instab/shapes.hpp"

namespace instab {

inline constexpr double kInclusionMaxRadius = 0.8;
inline constexpr double kContrastGuard = 1e-6;

struct InclusionProblem {
  Shape shape;
  double a = 2.0;
  int n_max = 32;
  int quad_nodes = 512;
  // Fourier modes of the boundary kept by the solver; 0 picks quad_nodes / 4.
  int geometry_modes = 0;
};

/// lambda_n = n (1 - mu rho^2n) / (1 + mu rho^2n), mu = (1-a)/(1+a), n = 0..n_max.
std::vector<double> dtn_concentric(double rho, double a, int n_max);

/// Full (2 n_max + 1)-square DtN matrix of the homogeneous disk, diag(degree).
Eigen::MatrixXd dtn_homogeneous(int n_max);

/// Lambda(D) - Lambda_0 from the boundary integral solve (not symmetrized).
/// a = 1 exactly is the homogeneous disk and yields zero.
Eigen::MatrixXd dtn_difference(const InclusionProblem& prob);
/// Lambda(D) = Lambda_0 + dtn_difference.
Eigen::MatrixXd dtn_numeric(const InclusionProblem& prob);

/// Degrees of the full circle basis up to n_max.
std::vector<double> circle_degrees(int n_max);

/// (Lambda(D) - Lambda_0) with both indices weighted by 1/sqrt(1 + degree).
OperatorMatrix weight_dtn_difference(const Eigen::MatrixXd& diff, int n_max);
/// weight_dtn_difference of the solve, with class constants fitted from its shell maxima.
OperatorMatrix delta_dtn_weighted(const InclusionProblem& prob);

/// Inverse of the mean-zero block (indices 1..2 n_max) of a DtN matrix.
Eigen::MatrixXd ntd_from_dtn(const Eigen::MatrixXd& dtn);

/// Operator norms in the natural trace weights: the DtN block H^{1/2} -> H^{-1/2}
/// and the NtD matrix H^{-1/2} -> H^{1/2}, both on mean-zero data.
double dtn_tilde_norm(const Eigen::MatrixXd& dtn_block);
double ntd_norm(const Eigen::MatrixXd& ntd);
/// The NtD matrix in those weights, so ntd_norm(N) = operator_norm(ntd_natural(N)).
Eigen::MatrixXd ntd_natural(const Eigen::MatrixXd& ntd);

struct Arc {
  double start = 0.0;  // angle
  double length = 0.0;
};

struct ElectrodeConfig {
  std::vector<Arc> arcs;
  std::vector<double> impedance;

  /// L equal arcs centred at 2 pi l / L, each covering `coverage` of its sector.
  static ElectrodeConfig equal_arcs(int L, double coverage = 0.5, double z = 0.1);
  void validate() const;
};

struct ResistanceResult {
  Eigen::MatrixXd R;
  double condition = 0.0;  // 2-norm condition number of Id + K
};

/// Resistance matrix from the truncated NtD matrix (size 2 n_max).
ResistanceResult resistance_matrix(const Eigen::MatrixXd& ntd, const ElectrodeConfig& cfg);

}  // namespace instab
