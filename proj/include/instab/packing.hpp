#pragma once

// Epsilon-discrete families built from sign patterns of polynomial bumps.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "instab/shapes.hpp"

namespace instab {

/// b(t) = h (1 - (t/w)^2)^(m+1) for |t| < w, 0 elsewhere.
double bump_value(int m, double height, double half_width, double t);

/// `samples` uniform samples of the bump on [-w, w] (endpoints included).
std::vector<double> build_bump(int m, double height, double half_width, std::size_t samples);

/// K_j(m) = max over [-1, 1] of |d^j/du^j (1 - u^2)^(m+1)|, so the j-th
/// derivative of the scaled bump peaks at h K_j / w^j.
double bump_derivative_max(int m, int j);

/// Smallest half-width w >= 2 eps for which every derivative bound
/// eps K_j / w^j (j = 1..m) sits below beta / kCmSafetyFactor.
double bump_half_width(int m, double beta, double eps);

/// Geometry of the perturbation class a family lives in.
struct PackingClass {
  ShapeKind kind = ShapeKind::radial_subgraph;
  double base_radius = 1.0;  // circle radius, or half width for flat kinds
  Point2 center{};
  int m = 1;
  double beta = 1.0;
  double eps_cap = 0.5;
  std::size_t grid_size = 2048;

  /// Length of the base segment or circumference of the base circle.
  double base_length() const;
};

/// Number of bump cells at amplitude eps (pure arithmetic, valid for any eps > 0).
std::size_t packing_cell_count(const PackingClass& cls, double eps);

/// Largest amplitude at which the construction still fits two cells (capped at eps_cap).
double packing_epsilon0(const PackingClass& cls);

using Pattern = std::vector<std::uint8_t>;

/// Family indexed by bit patterns of length cell_count(); pattern bit c set
/// puts an eps-high bump in cell c. Patterns are never enumerated.
class PackingFamily {
 public:
  PackingFamily(PackingClass cls, double eps);

  const PackingClass& class_params() const { return cls_; }
  double epsilon() const { return eps_; }
  std::size_t cell_count() const { return cells_; }
  double bump_half_width() const { return half_width_; }
  /// Cell width along the base (>= 2 w).
  double cell_pitch() const { return pitch_; }
  double certified_log_cardinality() const;

  Shape shape(const Pattern& pattern) const;
  Shape base_shape() const { return shape(Pattern(cells_, 0)); }
  Pattern random_pattern(std::mt19937_64& rng) const;

 private:
  PackingClass cls_;
  double eps_;
  double half_width_;
  double pitch_;
  std::size_t cells_;
};

/// Throws DomainError (message carries eps0) unless 0 < eps < packing_epsilon0(cls).
PackingFamily build_packing(const PackingClass& cls, double eps);

/// 2^-N eps0^((N-1)/m) eps^(-(N-1)/m): log of the guaranteed family size.
/// `beta` is accepted for signature symmetry with the class parameters.
double packing_lower_bound(double eps, int m, double beta, int N, double eps0);

}  // namespace instab
