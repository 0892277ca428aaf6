#pragma once

// Sound-soft acoustic scattering by a star-shaped obstacle: far-field
// patterns from a combined-field boundary integral equation, the disk
// closed form, and the coefficient matrices b_kl(a) in the real Fourier basis
// (ordering as in conductivity.hpp).

#include <Eigen/Core>
#include <Eigen/LU>
#include <complex>
#include <vector>

#include "instab/curve.hpp"
#include "instab/shapes.hpp"

namespace instab {

struct ObstacleProblem {
  Shape shape;
  std::vector<double> a_list{1.0, 4.0};  // wave number is sqrt(a)
  int n_max = 32;
  int quad_nodes = 256;  // boundary nodes (even)
  int directions = 0;    // far-field grid size (even); 0 picks max(64, 4 (n_max + 2))
  int geometry_modes = 0;  // boundary Fourier modes kept; 0 picks quad_nodes / 8
};

struct FarFieldMatrix {
  Eigen::MatrixXcd b;
  std::vector<double> degrees;
  double a = 1.0;
  double reciprocity_residual = 0.0;
  /// Sampled pattern A(x_i, w_j) on the uniform direction grid (empty for the closed form).
  Eigen::MatrixXcd pattern;
};

/// Far-field pattern coefficient of e^{i n (theta - phi)} for the disk of radius R.
std::complex<double> disk_mode_coefficient(int n, double R, double a);
FarFieldMatrix farfield_disk(double R, double a, int n_max);

/// Nystrom solver for one obstacle at one wave number.
class SoundSoftSolver {
 public:
  SoundSoftSolver(const StarCurve& curve, double a, int quad_nodes);

  /// Boundary densities for incident plane waves exp(i k x.d), d = (cos phi, sin phi).
  Eigen::MatrixXcd densities(const std::vector<double>& incidence) const;
  /// Far-field pattern at observation angles (rows) for the given densities (columns).
  Eigen::MatrixXcd far_field(const std::vector<double>& observation, const Eigen::MatrixXcd& psi) const;
  /// Scattered field at a point off the boundary for one density column.
  std::complex<double> scattered_field(double x, double y, const Eigen::VectorXcd& psi) const;

  double wave_number() const { return k_; }

 private:
  std::vector<CurvePoint> pts_;
  double k_;
  double eta_;
  int n_;  // half the node count
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// Coefficients b_kl = int int A(x, w) v_k(x) v_l(w) by the trapezoid rule on a
/// uniform grid of `pattern.rows()` directions.
Eigen::MatrixXcd project_pattern(const Eigen::MatrixXcd& pattern, int n_max);

/// max |A(x_i, w_j) - A(-w_j, -x_i)| on a uniform grid with an even count.
double reciprocity_residual(const Eigen::MatrixXcd& pattern);

std::vector<FarFieldMatrix> farfield_numeric(const ObstacleProblem& prob);

/// (sum |b_kl|^2)^(1/2).
double farfield_l2_norm(const FarFieldMatrix& f);

}  // namespace instab
