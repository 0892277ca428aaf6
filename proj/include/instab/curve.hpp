#pragma once

// Smooth parametrization of a radial shape boundary for the boundary-integral
// solvers: x(t) = center + (r + g(t)) (cos t, sin t), with g the
// trigonometric interpolant of the profile samples.

#include <complex>
#include <vector>

#include "instab/shapes.hpp"

namespace instab {

struct CurvePoint {
  double x, y;     // position
  double dx, dy;   // first derivative in t
  double ddx, ddy; // second derivative in t
};

class StarCurve {
 public:
  /// `max_mode` > 0 keeps only Fourier modes |k| <= max_mode of the profile
  /// interpolant (0 keeps all M/2).
  explicit StarCurve(const RadialProfile& profile, std::size_t max_mode = 0);
  /// Circle of radius `radius` about the origin.
  static StarCurve circle(double radius, std::size_t samples = 64);

  CurvePoint at(double t) const;
  /// Profile offset and its first two derivatives at angle t.
  void offset(double t, double& g, double& g1, double& g2) const;

  double max_radius() const { return max_radius_; }

 private:
  StarCurve() = default;
  double base_radius_ = 1.0;
  Point2 center_{};
  double mean_ = 0.0;
  std::vector<std::complex<double>> coeffs_;  // 2 c_k for k = 1..K, Nyquist halved
  double max_radius_ = 0.0;
};

}  // namespace instab
