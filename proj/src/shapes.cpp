#include "instab/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "instab/error.hpp"
#include "instab/simd/kernels.hpp"

namespace instab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_class(const ProfileClass& cls, const std::vector<double>& values) {
  if (values.empty()) throw DomainError("profile has no samples");
  if (cls.smoothness_order < 1) throw DomainError("smoothness order must be >= 1");
  if (!(cls.norm_bound > 0.0)) throw DomainError("norm bound must be positive");
  if (!(cls.amplitude_cap > 0.0)) throw DomainError("amplitude cap must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("profile sample is not finite");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// k-th forward difference coefficients (-1)^(k-j) C(k, j).
std::vector<double> difference_stencil(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    c[static_cast<std::size_t>(j)] = ((k - j) % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (k - j) / (j + 1);
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------- profiles

FlatProfile::FlatProfile(double half_width, Point2 center, std::vector<double> values,
                         ProfileClass cls)
    : half_width_(half_width), center_(center), values_(std::move(values)), cls_(cls) {
  if (!(half_width > 0.0)) throw DomainError("flat profile half width must be positive");
  check_class(cls_, values_);
  if (values_.size() < 2) throw DomainError("flat profile needs at least two samples");
}

double FlatProfile::spacing() const {
  return 2.0 * half_width_ / static_cast<double>(values_.size() - 1);
}

double FlatProfile::x(std::size_t i) const {
  return center_.x - half_width_ + static_cast<double>(i) * spacing();
}

double FlatProfile::value_at(double xq) const {
  const double u = (xq - (center_.x - half_width_)) / spacing();
  if (u < 0.0 || u > static_cast<double>(values_.size() - 1)) return 0.0;
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= values_.size() - 1) return values_.back();
  const double t = u - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

RadialProfile::RadialProfile(double base_radius, Point2 center, std::vector<double> values,
                             ProfileClass cls)
    : base_radius_(base_radius), center_(center), values_(std::move(values)), cls_(cls) {
  if (!(base_radius > 0.0)) throw DomainError("radial profile base radius must be positive");
  check_class(cls_, values_);
  if (values_.size() < 3) throw DomainError("radial profile needs at least three samples");
  spline_ = PeriodicSpline(values_, kTwoPi);
}

double RadialProfile::angle_spacing() const { return kTwoPi / static_cast<double>(values_.size()); }

double RadialProfile::theta(std::size_t i) const {
  return static_cast<double>(i) * angle_spacing();
}

double RadialProfile::offset_linear(double th) const {
  const std::size_t n = values_.size();
  double u = std::fmod(th, kTwoPi);
  if (u < 0.0) u += kTwoPi;
  u /= angle_spacing();
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= n) i = n - 1;
  const double t = u - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[(i + 1) % n];
}

double RadialProfile::max_radius() const {
  return base_radius_ + *std::max_element(values_.begin(), values_.end());
}

// ------------------------------------------------------------------- shape

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::flat_graph: return "flat_graph";
    case ShapeKind::flat_subgraph: return "flat_subgraph";
    case ShapeKind::radial_graph: return "radial_graph";
    case ShapeKind::radial_subgraph: return "radial_subgraph";
  }
  return "?";
}

ShapeKind parse_shape_kind(std::string_view text) {
  for (ShapeKind k : {ShapeKind::flat_graph, ShapeKind::flat_subgraph, ShapeKind::radial_graph,
                      ShapeKind::radial_subgraph})
    if (text == to_string(k)) return k;
  throw DomainError("unknown shape kind '" + std::string(text) + "'");
}

bool is_radial(ShapeKind kind) {
  return kind == ShapeKind::radial_graph || kind == ShapeKind::radial_subgraph;
}

bool is_subgraph(ShapeKind kind) {
  return kind == ShapeKind::flat_subgraph || kind == ShapeKind::radial_subgraph;
}

Shape::Shape(ShapeKind kind, FlatProfile profile) : kind_(kind), profile_(std::move(profile)) {
  if (is_radial(kind)) throw DomainError("radial shape kind needs a radial profile");
}

Shape::Shape(ShapeKind kind, RadialProfile profile) : kind_(kind), profile_(std::move(profile)) {
  if (!is_radial(kind)) throw DomainError("flat shape kind needs a flat profile");
}

const FlatProfile& Shape::flat() const {
  if (const auto* p = std::get_if<FlatProfile>(&profile_)) return *p;
  throw DomainError("shape does not hold a flat profile");
}

const RadialProfile& Shape::radial() const {
  if (const auto* p = std::get_if<RadialProfile>(&profile_)) return *p;
  throw DomainError("shape does not hold a radial profile");
}

const std::vector<double>& Shape::values() const {
  return std::visit([](const auto& p) -> const std::vector<double>& { return p.values(); },
                    profile_);
}

const ProfileClass& Shape::profile_class() const {
  return std::visit([](const auto& p) -> const ProfileClass& { return p.profile_class(); },
                    profile_);
}

void Shape::boundary(std::vector<double>& xs, std::vector<double>& ys) const {
  const auto& v = values();
  xs.resize(v.size());
  ys.resize(v.size());
  if (is_radial(kind_)) {
    const auto& p = radial();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double th = p.theta(i);
      const double rad = p.base_radius() + v[i];
      xs[i] = p.center().x + rad * std::cos(th);
      ys[i] = p.center().y + rad * std::sin(th);
    }
  } else {
    const auto& p = flat();
    for (std::size_t i = 0; i < v.size(); ++i) {
      xs[i] = p.x(i);
      ys[i] = p.center().y + v[i];
    }
  }
}

// --------------------------------------------------------------- Hausdorff

namespace {

bool same_base(const Shape& a, const Shape& b) {
  constexpr double tol = 1e-12;
  if (is_radial(a.kind())) {
    const auto& pa = a.radial();
    const auto& pb = b.radial();
    return std::abs(pa.base_radius() - pb.base_radius()) <= tol &&
           std::abs(pa.center().x - pb.center().x) <= tol &&
           std::abs(pa.center().y - pb.center().y) <= tol;
  }
  const auto& pa = a.flat();
  const auto& pb = b.flat();
  return std::abs(pa.half_width() - pb.half_width()) <= tol &&
         std::abs(pa.center().x - pb.center().x) <= tol &&
         std::abs(pa.center().y - pb.center().y) <= tol;
}

double longest_segment(const std::vector<double>& xs, const std::vector<double>& ys, bool closed) {
  double worst = 0.0;
  const std::size_t n = xs.size();
  const std::size_t ns = closed ? n : n - 1;
  for (std::size_t s = 0; s < ns; ++s) {
    const std::size_t e = (s + 1) % n;
    worst = std::max(worst, std::hypot(xs[e] - xs[s], ys[e] - ys[s]));
  }
  return worst;
}

// For subgraphs only the part of the boundary of `from` lying outside `to`
// contributes: the distance to a star-shaped (or downward closed) set grows
// along rays, so the sup over the filled set is attained on its boundary.
std::vector<std::uint8_t> outside_mask(const Shape& from, const Shape& to) {
  const auto& v = from.values();
  std::vector<std::uint8_t> mask(v.size(), 1);
  if (!is_subgraph(from.kind())) return mask;
  if (is_radial(from.kind())) {
    const auto& pf = from.radial();
    const auto& pt = to.radial();
    for (std::size_t i = 0; i < v.size(); ++i)
      mask[i] = v[i] > pt.offset_linear(pf.theta(i)) ? 1 : 0;
  } else {
    const auto& pf = from.flat();
    const auto& pt = to.flat();
    for (std::size_t i = 0; i < v.size(); ++i) mask[i] = v[i] > pt.value_at(pf.x(i)) ? 1 : 0;
  }
  return mask;
}

}  // namespace

HausdorffResult hausdorff(const Shape& a, const Shape& b) {
  if (a.kind() != b.kind()) throw DomainError("hausdorff: mismatched shape kinds");
  if (a.values().empty() || b.values().empty()) throw DomainError("hausdorff: empty profile");
  if (!same_base(a, b)) throw DomainError("hausdorff: incompatible base geometry");
  const bool closed = is_radial(a.kind());

  std::vector<double> ax, ay, bx, by;
  a.boundary(ax, ay);
  b.boundary(bx, by);
  const auto seg_a = simd::make_segments(ax, ay, closed);
  const auto seg_b = simd::make_segments(bx, by, closed);
  const auto mask_ab = outside_mask(a, b);
  const auto mask_ba = outside_mask(b, a);

  HausdorffResult r;
  r.distance = std::max(simd::directed_distance(ax, ay, mask_ab, seg_b),
                        simd::directed_distance(bx, by, mask_ba, seg_a));
  r.resolution = std::max(longest_segment(ax, ay, closed), longest_segment(bx, by, closed));
  return r;
}

// ------------------------------------------------------------------ C^m norm

namespace {

void check_grid(std::size_t M, int m) {
  if (m < 0) throw DomainError("cm_norm: negative order");
  if (M <= static_cast<std::size_t>(2 * (m + 1)))
    throw DomainError("cm_norm: grid too coarse for order " + std::to_string(m));
}

}  // namespace

double cm_norm(const FlatProfile& p, int m) {
  const auto& f = p.values();
  check_grid(f.size(), m);
  const double h = p.spacing();
  double norm = 0.0;
  for (int k = 0; k <= m; ++k) {
    const auto c = difference_stencil(k);
    const double scale = std::pow(h, -k);
    const std::size_t ku = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i + ku < f.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j <= ku; ++j) d += c[j] * f[i + j];
      norm = std::max(norm, std::abs(d) * scale);
    }
  }
  return norm;
}

double cm_norm(const RadialProfile& p, int m) {
  const auto& g = p.values();
  check_grid(g.size(), m);
  const std::size_t n = g.size();
  const double h = p.spacing();
  double norm = 0.0;
  for (int k = 0; k <= m; ++k) {
    const auto c = difference_stencil(k);
    const double scale = std::pow(h, -k);
    const std::size_t ku = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j <= ku; ++j) d += c[j] * g[(i + j) % n];
      norm = std::max(norm, std::abs(d) * scale);
    }
  }
  return norm;
}

const char* to_string(MembershipFailure reason) {
  switch (reason) {
    case MembershipFailure::none: return "ok";
    case MembershipFailure::negative_value: return "negative_value";
    case MembershipFailure::amplitude: return "amplitude";
    case MembershipFailure::boundary_support: return "boundary_support";
    case MembershipFailure::cm_norm: return "cm_norm";
    case MembershipFailure::grid_too_coarse: return "grid_too_coarse";
  }
  return "?";
}

Membership validate_membership(const Shape& s, int m, double beta, double eps) {
  const auto& v = s.values();
  auto fail = [](MembershipFailure r) { return Membership{false, r}; };
  for (double x : v)
    if (x < 0.0) return fail(MembershipFailure::negative_value);
  for (double x : v)
    if (x > eps) return fail(MembershipFailure::amplitude);
  if (!is_radial(s.kind()) && (v.front() != 0.0 || v.back() != 0.0))
    return fail(MembershipFailure::boundary_support);
  if (m < 0 || v.size() <= static_cast<std::size_t>(2 * (m + 1)))
    return fail(MembershipFailure::grid_too_coarse);
  const double norm = is_radial(s.kind()) ? cm_norm(s.radial(), m) : cm_norm(s.flat(), m);
  if (norm > beta / kCmSafetyFactor) return fail(MembershipFailure::cm_norm);
  return {};
}

// ----------------------------------------------------------- serialization

std::string serialize(const Shape& s) {
  std::ostringstream out;
  const ProfileClass& cls = s.profile_class();
  double r;
  Point2 c;
  if (is_radial(s.kind())) {
    r = s.radial().base_radius();
    c = s.radial().center();
  } else {
    r = s.flat().half_width();
    c = s.flat().center();
  }
  out << "kind=" << to_string(s.kind()) << '\n';
  out << "r=" << fmt17(r) << '\n';
  out << "center=" << fmt17(c.x) << ' ' << fmt17(c.y) << '\n';
  out << "m=" << cls.smoothness_order << '\n';
  out << "beta=" << fmt17(cls.norm_bound) << '\n';
  out << "eps_cap=" << fmt17(cls.amplitude_cap) << '\n';
  out << "M=" << s.values().size() << '\n';
  for (double v : s.values()) out << fmt17(v) << '\n';
  return out.str();
}

Shape parse_shape(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto header = [&](const char* key) {
    if (!std::getline(in, line)) throw DomainError(std::string("shape record: missing ") + key);
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0)
      throw DomainError("shape record: expected '" + prefix + "', got '" + line + "'");
    return line.substr(prefix.size());
  };
  auto to_double = [](const std::string& t) {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw DomainError("shape record: bad number '" + t + "'");
    return v;
  };
  try {
    const ShapeKind kind = parse_shape_kind(header("kind"));
    const double r = to_double(header("r"));
    std::istringstream cs(header("center"));
    Point2 c;
    if (!(cs >> c.x >> c.y)) throw DomainError("shape record: bad center");
    ProfileClass cls;
    cls.smoothness_order = std::stoi(header("m"));
    cls.norm_bound = to_double(header("beta"));
    cls.amplitude_cap = to_double(header("eps_cap"));
    const long M = std::stol(header("M"));
    if (M <= 0) throw DomainError("shape record: M must be positive");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(M));
    while (static_cast<long>(values.size()) < M && std::getline(in, line)) {
      if (line.empty()) continue;
      values.push_back(to_double(line));
    }
    if (static_cast<long>(values.size()) != M)
      throw DomainError("shape record: expected " + std::to_string(M) + " values");
    if (is_radial(kind)) return Shape(kind, RadialProfile(r, c, std::move(values), cls));
    return Shape(kind, FlatProfile(r, c, std::move(values), cls));
  } catch (const std::logic_error& e) {  // std::stod / std::stoi failures
    throw DomainError(std::string("shape record: ") + e.what());
  }
}

void write_shape_file(const std::string& path, const Shape& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << serialize(s);
  if (!out) throw Error("write failed for '" + path + "'");
}

Shape read_shape_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_shape(ss.str());
}

}  // namespace instab
