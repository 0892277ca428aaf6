#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "instab/error.hpp"
#include "instab/packing.hpp"
#include "instab/shapes.hpp"
#include "support.hpp"

using namespace instab;

namespace {

Shape radial(ShapeKind kind, std::vector<double> g, double r = 0.5, double cap = 0.25) {
  return Shape(kind, RadialProfile(r, {0.0, 0.0}, std::move(g), ProfileClass{1, 10.0, cap}));
}

// Dense samples of the boundary polyline, `refine` points per segment.
void dense(const Shape& s, int refine, std::vector<double>& x, std::vector<double>& y) {
  std::vector<double> vx, vy;
  s.boundary(vx, vy);
  const bool closed = is_radial(s.kind());
  const std::size_t n = vx.size(), segs = closed ? n : n - 1;
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t j = (i + 1) % n;
    for (int k = 0; k < refine; ++k) {
      const double t = static_cast<double>(k) / refine;
      x.push_back(vx[i] + t * (vx[j] - vx[i]));
      y.push_back(vy[i] + t * (vy[j] - vy[i]));
    }
  }
  if (!closed) {
    x.push_back(vx.back());
    y.push_back(vy.back());
  }
}

double brute_curve_hausdorff(const Shape& a, const Shape& b, int refine) {
  std::vector<double> ax, ay, bx, by;
  dense(a, refine, ax, ay);
  dense(b, refine, bx, by);
  auto directed = [](const std::vector<double>& px, const std::vector<double>& py, const std::vector<double>& qx,
                     const std::vector<double>& qy) {
    double worst = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < qx.size(); ++j) best = std::min(best, std::hypot(px[i] - qx[j], py[i] - qy[j]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(ax, ay, bx, by), directed(bx, by, ax, ay));
}

std::vector<double> random_profile(std::mt19937_64& rng, std::size_t M, double peak) {
  return testing::smooth_star(rng, 0.5, peak, 6, M).values();
}

}  // namespace

TEST_CASE("hausdorff: identical shapes are at distance zero") {
  std::mt19937_64 rng(1);
  const Shape s = testing::smooth_star(rng, 0.5, 0.2);
  CHECK(hausdorff_distance(s, s) == 0.0);
}

TEST_CASE("hausdorff: uniform radial offset t gives t") {
  for (ShapeKind k : {ShapeKind::radial_graph, ShapeKind::radial_subgraph}) {
    const Shape a = radial(k, std::vector<double>(1024, 0.0));
    const Shape b = radial(k, std::vector<double>(1024, 0.13));
    const HausdorffResult h = hausdorff(a, b);
    CHECK(h.distance == doctest::Approx(0.13).epsilon(1e-3));
    CHECK(std::abs(h.distance - 0.13) <= h.resolution);
  }
}

TEST_CASE("hausdorff: flat graph of a bump against the zero profile is the bump height") {
  const std::size_t M = 2001;
  const double w = 0.2, h = 0.05;
  std::vector<double> f(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) f[i] = bump_value(1, h, w, -0.5 + static_cast<double>(i) / (M - 1));
  const ProfileClass cls{1, 1.0, 0.25};
  const Shape a(ShapeKind::flat_graph, FlatProfile(0.5, {0.0, 0.0}, f, cls));
  const Shape b(ShapeKind::flat_graph, FlatProfile(0.5, {0.0, 0.0}, std::vector<double>(M, 0.0), cls));
  CHECK(hausdorff_distance(a, b) == doctest::Approx(h).epsilon(1e-9));
}

TEST_CASE("hausdorff: random radial graphs against a 10x finer brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const Shape a = radial(ShapeKind::radial_graph, random_profile(rng, 256, 0.2));
    const Shape b = radial(ShapeKind::radial_graph, random_profile(rng, 256, 0.2));
    const HausdorffResult h = hausdorff(a, b);
    CHECK(std::abs(h.distance - brute_curve_hausdorff(a, b, 10)) <= h.resolution);
  }
}

TEST_CASE("hausdorff: pseudometric properties on random triples") {
  std::mt19937_64 rng(4);
  for (ShapeKind k : {ShapeKind::radial_graph, ShapeKind::radial_subgraph}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Shape a = radial(k, random_profile(rng, 1024, 0.2));
      const Shape b = radial(k, random_profile(rng, 1024, 0.2));
      const Shape c = radial(k, random_profile(rng, 1024, 0.2));
      const HausdorffResult ab = hausdorff(a, b), bc = hausdorff(b, c), ac = hausdorff(a, c);
      CHECK(ab.distance == hausdorff(b, a).distance);
      CHECK(ac.distance <= ab.distance + bc.distance + 3.0 * std::max({ab.resolution, bc.resolution, ac.resolution}));
      // Radial graphs over one circle: the radial gap bounds the distance.
      double sup = 0.0;
      for (std::size_t i = 0; i < a.values().size(); ++i) sup = std::max(sup, std::abs(a.values()[i] - b.values()[i]));
      CHECK(ab.distance <= sup + 1e-12);
    }
  }
}

TEST_CASE("hausdorff: subgraphs ignore boundary points inside the other set") {
  std::vector<double> g(1024, 0.0);
  for (std::size_t i = 0; i < 100; ++i) g[i] = 0.1;
  const Shape big = radial(ShapeKind::radial_subgraph, g);
  const Shape small = radial(ShapeKind::radial_subgraph, std::vector<double>(1024, 0.0));
  // The small disk lies inside the big set, so only the bulge counts.
  CHECK(hausdorff_distance(big, small) == doctest::Approx(0.1).epsilon(1e-2));
}

TEST_CASE("hausdorff: mismatched kinds are rejected") {
  const Shape a = radial(ShapeKind::radial_graph, std::vector<double>(64, 0.0));
  const Shape b = radial(ShapeKind::radial_subgraph, std::vector<double>(64, 0.0));
  CHECK_THROWS_AS(hausdorff(a, b), DomainError);
}

TEST_CASE("cm_norm: zero, constant, and a polynomial bump against symbolic maxima") {
  const ProfileClass cls{2, 100.0, 1.0};
  CHECK(cm_norm(RadialProfile(0.5, {}, std::vector<double>(512, 0.0), cls), 2) == 0.0);
  CHECK(cm_norm(RadialProfile(0.5, {}, std::vector<double>(512, 0.07), cls), 2) == doctest::Approx(0.07));
  // h (1 - (t/w)^2)^3 with h = 0.3, w = 0.2: derivative maxima 0.3, 2.5759503100797576, 45.
  const std::size_t M = 8001;
  std::vector<double> f(M);
  for (std::size_t i = 0; i < M; ++i) f[i] = bump_value(2, 0.3, 0.2, -0.5 + static_cast<double>(i) / (M - 1));
  const FlatProfile p(0.5, {}, f, cls);
  CHECK(cm_norm(p, 0) == doctest::Approx(0.3).epsilon(0.01));
  CHECK(cm_norm(p, 1) == doctest::Approx(2.5759503100797576).epsilon(0.01));
  CHECK(cm_norm(p, 2) == doctest::Approx(45.0).epsilon(0.01));
  CHECK_THROWS_AS(cm_norm(RadialProfile(0.5, {}, std::vector<double>(6, 0.0), cls), 2), DomainError);
}

TEST_CASE("validate_membership reason codes") {
  const ProfileClass cls{1, 1.0, 0.25};
  const Shape zero(ShapeKind::radial_subgraph, RadialProfile(0.5, {}, std::vector<double>(512, 0.0), cls));
  CHECK(validate_membership(zero, 1, 1.0, 0.1).ok);
  CHECK(validate_membership(zero, 3, 0.01, 1e-6).ok);

  std::vector<double> spike(512, 0.0);
  spike[100] = 0.2;  // 2 eps at eps = 0.1
  const Shape tall(ShapeKind::radial_subgraph, RadialProfile(0.5, {}, spike, cls));
  const Membership m = validate_membership(tall, 1, 1e6, 0.1);
  CHECK_FALSE(m.ok);
  CHECK(m.reason == MembershipFailure::amplitude);

  // A bump of slope about 3 is over the bound beta = 1.
  std::vector<double> steep(2048, 0.0);
  const RadialProfile geom(0.5, {}, steep, cls);
  for (std::size_t i = 0; i < steep.size(); ++i) {
    double t = geom.theta(i);
    if (t > std::numbers::pi) t -= 2.0 * std::numbers::pi;
    steep[i] = bump_value(1, 0.05, 0.03, 0.5 * t);
  }
  const Shape s(ShapeKind::radial_subgraph, RadialProfile(0.5, {}, steep, cls));
  CHECK(cm_norm(s.radial(), 1) > 1.0);
  const Membership mb = validate_membership(s, 1, 1.0, 0.1);
  CHECK_FALSE(mb.ok);
  CHECK(mb.reason == MembershipFailure::cm_norm);

  std::vector<double> edge(65, 0.0);
  edge.front() = 0.01;
  const Shape flat(ShapeKind::flat_subgraph, FlatProfile(0.5, {}, edge, cls));
  CHECK(validate_membership(flat, 1, 10.0, 0.1).reason == MembershipFailure::boundary_support);
}

TEST_CASE("shape records round-trip exactly") {
  std::mt19937_64 rng(8);
  const Shape s = testing::smooth_star(rng, 0.5, 0.2, 5, 300);
  const Shape back = parse_shape(serialize(s));
  CHECK(back.kind() == s.kind());
  CHECK(back.values() == s.values());
  CHECK(back.radial().base_radius() == s.radial().base_radius());
  CHECK(serialize(back) == serialize(s));

  const ProfileClass cls{2, 3.0, 0.2};
  std::vector<double> f(33, 0.0);
  f[10] = 0.1;
  const Shape flat(ShapeKind::flat_graph, FlatProfile(0.7, {0.1, -0.2}, f, cls));
  CHECK(serialize(parse_shape(serialize(flat))) == serialize(flat));
  CHECK_THROWS(parse_shape("kind=radial_subgraph\nr=0.5\n"));
}
