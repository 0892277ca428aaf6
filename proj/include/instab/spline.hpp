#pragma once

#include <span>
#include <vector>

namespace instab {

/// C^2 periodic cubic spline through uniformly spaced samples y_i = f(i*h),
/// i = 0..n-1, with period n*h.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  PeriodicSpline(std::span<const double> samples, double period);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  std::size_t size() const { return y_.size(); }

 private:
  struct Local {
    std::size_t i0, i1;
    double a, b;  // distances to the right/left knot, in units of h
  };
  Local locate(double x) const;

  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
  double h_ = 0.0;
  double period_ = 0.0;
};

}  // namespace instab
