#pragma once

// Sampled perturbation classes of defects in the plane: graphs and subgraphs
// of nonnegative profiles over a segment (flat) or over a circle (radial).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "instab/spline.hpp"

namespace instab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Class parameters shared by both profile types.
struct ProfileClass {
  int smoothness_order = 1;  // m
  double norm_bound = 1.0;   // beta
  double amplitude_cap = 0.25;
};

/// Profile f >= 0 sampled at M uniform points over [center.x - r, center.x + r];
/// the graph lives at height center.y + f.
class FlatProfile {
 public:
  FlatProfile(double half_width, Point2 center, std::vector<double> values, ProfileClass cls);

  double half_width() const { return half_width_; }
  Point2 center() const { return center_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t grid_size() const { return values_.size(); }
  const ProfileClass& profile_class() const { return cls_; }

  double spacing() const;
  double x(std::size_t i) const;
  /// Piecewise-linear interpolant of the samples; 0 outside the segment.
  double value_at(double x) const;

 private:
  double half_width_;
  Point2 center_;
  std::vector<double> values_;
  ProfileClass cls_;
};

/// Radial offset g >= 0 sampled at M uniform angles theta_i = 2*pi*i/M; the
/// boundary point at theta is center + (r + g(theta)) (cos theta, sin theta).
class RadialProfile {
 public:
  RadialProfile(double base_radius, Point2 center, std::vector<double> values, ProfileClass cls);

  double base_radius() const { return base_radius_; }
  Point2 center() const { return center_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t grid_size() const { return values_.size(); }
  const ProfileClass& profile_class() const { return cls_; }

  double angle_spacing() const;
  /// Arc-length spacing of the grid on the base circle.
  double spacing() const { return base_radius_ * angle_spacing(); }
  double theta(std::size_t i) const;

  /// Smooth (C^2 periodic spline) evaluation of the offset and its angular derivatives.
  double offset(double theta) const { return spline_.value(theta); }
  double offset_d1(double theta) const { return spline_.derivative(theta); }
  double offset_d2(double theta) const { return spline_.second_derivative(theta); }
  /// Linear interpolation between grid samples, consistent with the boundary polyline.
  double offset_linear(double theta) const;

  double max_radius() const;

 private:
  double base_radius_;
  Point2 center_;
  std::vector<double> values_;
  ProfileClass cls_;
  PeriodicSpline spline_;
};

enum class ShapeKind { flat_graph, flat_subgraph, radial_graph, radial_subgraph };

const char* to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view text);
bool is_radial(ShapeKind kind);
bool is_subgraph(ShapeKind kind);

/// A defect: the graph or subgraph of a profile. Flat kinds hold a
/// FlatProfile and radial kinds a RadialProfile (enforced on construction).
class Shape {
 public:
  Shape(ShapeKind kind, FlatProfile profile);
  Shape(ShapeKind kind, RadialProfile profile);

  ShapeKind kind() const { return kind_; }
  const FlatProfile& flat() const;
  const RadialProfile& radial() const;
  const std::vector<double>& values() const;
  const ProfileClass& profile_class() const;

  /// Boundary polyline vertices: the graph of the profile.
  void boundary(std::vector<double>& xs, std::vector<double>& ys) const;

 private:
  ShapeKind kind_;
  std::variant<FlatProfile, RadialProfile> profile_;
};

struct HausdorffResult {
  double distance = 0.0;
  /// Bound on the sampling error of `distance`: the longest polyline segment of either shape.
  double resolution = 0.0;
};

HausdorffResult hausdorff(const Shape& a, const Shape& b);
inline double hausdorff_distance(const Shape& a, const Shape& b) { return hausdorff(a, b).distance; }

/// Discrete C^m norm: max over orders k = 0..m of sup |k-th difference| / h^k.
/// Radial profiles are differentiated in arc length on the base circle.
double cm_norm(const FlatProfile& p, int m);
double cm_norm(const RadialProfile& p, int m);
inline double cm_norm(const FlatProfile& p) { return cm_norm(p, p.profile_class().smoothness_order); }
inline double cm_norm(const RadialProfile& p) { return cm_norm(p, p.profile_class().smoothness_order); }

/// Membership checks divide the bound by this factor: the difference norm
/// under-approximates the true C^m norm.
inline constexpr double kCmSafetyFactor = 1.05;

enum class MembershipFailure { none, negative_value, amplitude, boundary_support, cm_norm, grid_too_coarse };
const char* to_string(MembershipFailure reason);

struct Membership {
  bool ok = true;
  MembershipFailure reason = MembershipFailure::none;
  explicit operator bool() const { return ok; }
};

Membership validate_membership(const Shape& s, int m, double beta, double eps);

// Plain-text record: "key=value" header lines (kind, r, center, m, beta,
// eps_cap, M) followed by M values, one per line.
std::string serialize(const Shape& s);
Shape parse_shape(std::string_view text);
void write_shape_file(const std::string& path, const Shape& s);
Shape read_shape_file(const std::string& path);

}  // namespace instab
