#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "instab/error.hpp"
#include "instab/spectral.hpp"

using namespace instab;

namespace {

constexpr DomainKind kAll[] = {DomainKind::full_circle, DomainKind::half_disk_neumann, DomainKind::half_disk_dirichlet,
                               DomainKind::slit_disk_neumann, DomainKind::slit_disk_dirichlet};

BasisElement element(DomainKind d, double degree) {
  for (const BasisElement& e : enumerate_basis({d, Weighting::plain, static_cast<int>(std::ceil(degree)) + 1}))
    if (e.degree.value() == degree) return e;
  FAIL("degree not enumerated");
  return {};
}

bool in_domain(DomainKind d, double x, double y, double margin) {
  const double r = std::hypot(x, y);
  if (r > 0.92 || r < 0.25) return false;
  switch (d) {
    case DomainKind::full_circle: return true;
    case DomainKind::half_disk_neumann:
    case DomainKind::half_disk_dirichlet: return y > margin;
    default: return !(x > 0.0 && std::abs(y) < margin);  // away from the slit on the positive axis
  }
}

double eval_xy(DomainKind d, const BasisElement& e, double x, double y) {
  double t = std::atan2(y, x);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return eigenfunction(d, e, std::hypot(x, y), t);
}

}  // namespace

TEST_CASE("enumerate_basis examples and ordering") {
  CHECK(enumerate_basis({DomainKind::full_circle, Weighting::plain, 0}).size() == 1);
  CHECK(enumerate_basis({DomainKind::full_circle, Weighting::plain, 3}).size() == 7);
  const auto slit = enumerate_basis({DomainKind::slit_disk_neumann, Weighting::plain, 2});
  REQUIRE(slit.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(slit[k].degree.value() == 0.5 * static_cast<double>(k));
  for (DomainKind d : kAll) {
    const auto b = enumerate_basis({d, Weighting::plain, 12});
    for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k - 1].degree <= b[k].degree);
    for (int n = 0; n <= 12; ++n) {
      std::size_t count = 0;
      for (const auto& e : b) count += e.degree.value() <= n;
      CHECK(static_cast<double>(count) <= 2.0 * (1 + n));
    }
  }
}

TEST_CASE("multiplicity_general_n") {
  for (int N = 2; N <= 6; ++N) CHECK(multiplicity_general_n(0, N) == 1);
  CHECK(multiplicity_general_n(2, 3) == 5);
  CHECK(multiplicity_general_n(5, 2) == 2);
  // Degree-2 harmonics in 3 variables: 6 quadratic monomials minus the one trace condition.
  CHECK(multiplicity_general_n(2, 3) == 6 - 1);
  for (int N = 2; N <= 5; ++N)
    for (int j = 0; j <= 30; ++j) CHECK(static_cast<double>(multiplicity_general_n(j, N)) <= 2.0 * std::pow(j + 1.0, N - 2));
}

TEST_CASE("gamma values and weights") {
  CHECK(gamma_value(element(DomainKind::full_circle, 0), GammaConvention::dirichlet) == 1.0);
  CHECK(gamma_value(element(DomainKind::full_circle, 7), GammaConvention::dirichlet) == 8.0);
  CHECK(gamma_value(element(DomainKind::full_circle, 3), GammaConvention::neumann) == 3.0);
  CHECK_THROWS_AS(gamma_value(element(DomainKind::full_circle, 0), GammaConvention::neumann), DomainError);
  CHECK(basis_weight(element(DomainKind::full_circle, 3), Weighting::dirichlet_trace) == doctest::Approx(0.5));
  CHECK(basis_weight(element(DomainKind::full_circle, 4), Weighting::neumann_trace) == doctest::Approx(2.0));
}

TEST_CASE("sobolev norms as Fourier multipliers") {
  std::vector<std::complex<double>> c(11, 0.0);  // frequencies -5..5
  c[5 + 3] = 1.0;
  CHECK(sobolev_norm(c, SobolevOrder::plus_half) == doctest::Approx(std::sqrt(4.0)));
  c.assign(11, 0.0);
  c[5] = 0.7;
  CHECK(sobolev_norm(c, SobolevOrder::minus_half) == doctest::Approx(0.7));
  CHECK(sobolev_norm(c, SobolevOrder::zero) == doctest::Approx(0.7));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& v : c) v = {g(rng), g(rng)};
  c[5] = 0.0;
  CHECK(sobolev_norm(c, SobolevOrder::minus_half) <= sobolev_norm(c, SobolevOrder::zero));
  CHECK(sobolev_norm(c, SobolevOrder::zero) <= sobolev_norm(c, SobolevOrder::plus_half));
}

TEST_CASE("eigenfunctions are harmonic and satisfy their boundary conditions") {
  const double h = 2e-3;
  for (DomainKind d : kAll) {
    for (const BasisElement& e : enumerate_basis({d, Weighting::plain, 10})) {
      double worst = 0.0;
      for (double r : {0.3, 0.5, 0.7, 0.9})
        for (int k = 0; k < 24; ++k) {
          const double t = 2.0 * std::numbers::pi * (k + 0.5) / 24.0;
          const double x = r * std::cos(t), y = r * std::sin(t);
          if (!in_domain(d, x, y, 3.0 * h)) continue;
          auto u = [&](double dx, double dy) { return eval_xy(d, e, x + dx, y + dy); };
          // Fourth-order five-point second differences in each direction.
          const double uxx = (-u(2 * h, 0) + 16 * u(h, 0) - 30 * u(0, 0) + 16 * u(-h, 0) - u(-2 * h, 0)) / (12 * h * h);
          const double uyy = (-u(0, 2 * h) + 16 * u(0, h) - 30 * u(0, 0) + 16 * u(0, -h) - u(0, -2 * h)) / (12 * h * h);
          worst = std::max(worst, std::abs(uxx + uyy));
        }
      CHECK(worst <= 1e-6);
      // Flat-part conditions: Neumann kinds have zero angular slope, Dirichlet kinds vanish.
      const double end = angular_extent(d);
      if (d == DomainKind::half_disk_neumann || d == DomainKind::slit_disk_neumann) {
        CHECK(std::abs(angular_factor_d1(d, e, 0.0)) <= 1e-12);
        CHECK(std::abs(angular_factor_d1(d, e, end)) <= 1e-9);
      }
      if (d == DomainKind::half_disk_dirichlet || d == DomainKind::slit_disk_dirichlet) {
        CHECK(std::abs(angular_factor(d, e, 0.0)) <= 1e-12);
        CHECK(std::abs(angular_factor(d, e, end)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("traces are orthonormal on the accessible boundary") {
  const int Q = 4096;
  for (DomainKind d : kAll) {
    const auto b = enumerate_basis({d, Weighting::plain, 8});
    const double len = angular_extent(d);
    double worst = 0.0;
    for (const auto& ei : b)
      for (const auto& ej : b) {
        double s = 0.0;
        for (int q = 0; q < Q; ++q) {
          const double t = len * (q + 0.5) / Q;
          s += angular_factor(d, ei, t) * angular_factor(d, ej, t);
        }
        s *= len / Q;
        worst = std::max(worst, std::abs(s - (ei.index == ej.index ? 1.0 : 0.0)));
      }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("interior decay") {
  const double r0 = 0.8;
  CHECK(interior_decay(DomainKind::full_circle, element(DomainKind::full_circle, 0), r0) ==
        doctest::Approx(r0 / std::sqrt(2.0)));
  const double ratio = interior_decay(DomainKind::full_circle, element(DomainKind::full_circle, 41), r0) /
                       interior_decay(DomainKind::full_circle, element(DomainKind::full_circle, 40), r0);
  CHECK(ratio == doctest::Approx(r0).epsilon(0.02));
  // Shrinking the ball, the half-integer element loses mass more slowly: a
  // smaller log-slope in r0 at r0 = 0.8, and the larger norm once r0 is small.
  const BasisElement half = element(DomainKind::slit_disk_neumann, 0.5);
  const BasisElement one = element(DomainKind::full_circle, 1);
  auto log_slope = [&](DomainKind d, const BasisElement& e) {
    return (std::log(interior_decay(d, e, r0)) - std::log(interior_decay(d, e, r0 * 0.99))) / -std::log(0.99);
  };
  CHECK(log_slope(DomainKind::slit_disk_neumann, half) < log_slope(DomainKind::full_circle, one));
  CHECK(interior_decay(DomainKind::slit_disk_neumann, half, 0.1) > interior_decay(DomainKind::full_circle, one, 0.1));
  for (DomainKind d : kAll) {
    const BasisSpec spec{d, Weighting::plain, 30};
    const double C = fit_decay_constant(spec, r0);
    CHECK(std::isfinite(C));
    for (const auto& e : enumerate_basis(spec)) {
      const double v = interior_decay(d, e, r0);
      CHECK(v <= C * std::exp(-std::log(1.0 / r0) * e.degree.value()) * (1.0 + 1e-12));
      CHECK(v == doctest::Approx(interior_decay_closed_form(e.degree, r0)).epsilon(1e-8));
    }
  }
}
