#include "instab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "instab/error.hpp"
#include "instab/quadrature.hpp"

namespace instab {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_slit(DomainKind d) {
  return d == DomainKind::slit_disk_neumann || d == DomainKind::slit_disk_dirichlet;
}

// Angular frequency multiplying theta in the angular factor.
double frequency(DomainKind d, const BasisElement& e) {
  return is_slit(d) ? 0.5 * e.degree.twice() : e.degree.value();
}

double angular_norm(DomainKind d, const BasisElement& e) {
  const double ext = angular_extent(d);
  if (e.degree.twice() == 0) return 1.0 / std::sqrt(ext);
  return std::sqrt(2.0 / ext);
}

}  // namespace

const char* to_string(DomainKind d) {
  switch (d) {
    case DomainKind::full_circle: return "full_circle";
    case DomainKind::half_disk_neumann: return "half_disk_neumann";
    case DomainKind::half_disk_dirichlet: return "half_disk_dirichlet";
    case DomainKind::slit_disk_neumann: return "slit_disk_neumann";
    case DomainKind::slit_disk_dirichlet: return "slit_disk_dirichlet";
  }
  return "?";
}

DomainKind parse_domain_kind(std::string_view text) {
  for (DomainKind d : {DomainKind::full_circle, DomainKind::half_disk_neumann,
                       DomainKind::half_disk_dirichlet, DomainKind::slit_disk_neumann,
                       DomainKind::slit_disk_dirichlet})
    if (text == to_string(d)) return d;
  throw DomainError("unknown domain kind '" + std::string(text) + "'");
}

std::vector<BasisElement> enumerate_basis(const BasisSpec& spec) {
  if (spec.n_max < 0) throw DomainError("enumerate_basis: n_max must be >= 0");
  std::vector<BasisElement> out;
  auto push = [&](Degree g, int mult, Angular a) {
    out.push_back(BasisElement{out.size(), g, mult, a});
  };
  switch (spec.domain) {
    case DomainKind::full_circle:
      push(Degree::integer(0), 1, Angular::cosine);
      for (int j = 1; j <= spec.n_max; ++j) {
        push(Degree::integer(j), 2, Angular::cosine);
        push(Degree::integer(j), 2, Angular::sine);
      }
      break;
    case DomainKind::half_disk_neumann:
      for (int j = 0; j <= spec.n_max; ++j) push(Degree::integer(j), 1, Angular::cosine);
      break;
    case DomainKind::half_disk_dirichlet:
      for (int j = 1; j <= spec.n_max; ++j) push(Degree::integer(j), 1, Angular::sine);
      break;
    case DomainKind::slit_disk_neumann:
      for (int k = 0; k <= 2 * spec.n_max; ++k) push(Degree::from_twice(k), 1, Angular::cosine);
      break;
    case DomainKind::slit_disk_dirichlet:
      for (int k = 1; k <= 2 * spec.n_max; ++k) push(Degree::from_twice(k), 1, Angular::sine);
      break;
  }
  return out;
}

long long multiplicity_general_n(int j, int N) {
  if (j < 0 || N < 2) throw DomainError("multiplicity_general_n: need j >= 0 and N >= 2");
  if (j == 0) return 1;
  // (2j+N-2)(j+N-3)! / (j!(N-2)!) = (2j+N-2)/(N-2) * C(j+N-3, j), written to stay integral.
  if (N == 2) return 2;
  // C(j+N-3, N-3) accumulated exactly, then (2j+N-2) C(j+N-3, N-3) / (N-2).
  unsigned __int128 c = 1;
  for (int i = 1; i <= N - 3; ++i) c = c * static_cast<unsigned>(j + i) / static_cast<unsigned>(i);
  const unsigned __int128 p = c * static_cast<unsigned>(2 * j + N - 2) / static_cast<unsigned>(N - 2);
  if (p > static_cast<unsigned __int128>(std::numeric_limits<long long>::max()))
    throw DomainError("multiplicity_general_n: overflow");
  const auto result = static_cast<long long>(p);
  if (static_cast<double>(result) > 2.0 * std::pow(j + 1.0, N - 2) * (1.0 + 1e-12))
    throw Error("multiplicity bound 2(j+1)^(N-2) violated");
  return result;
}

double gamma_value(const BasisElement& e, GammaConvention c) {
  if (c == GammaConvention::dirichlet) return 1.0 + e.degree.value();
  if (e.degree.twice() == 0) throw DomainError("gamma_value: degree 0 under the neumann convention");
  return e.degree.value();
}

double basis_weight(const BasisElement& e, Weighting w) {
  switch (w) {
    case Weighting::dirichlet_trace: return 1.0 / std::sqrt(1.0 + e.degree.value());
    case Weighting::neumann_trace: return e.degree.twice() == 0 ? 1.0 : std::sqrt(e.degree.value());
    case Weighting::plain: return 1.0;
  }
  return 1.0;
}

double sobolev_weight(long j, SobolevOrder s) {
  const double a = std::abs(static_cast<double>(j));
  switch (s) {
    case SobolevOrder::plus_half: return 1.0 + a;
    case SobolevOrder::minus_half: return j == 0 ? 1.0 : 1.0 / a;
    case SobolevOrder::zero: return 1.0;
  }
  return 1.0;
}

double sobolev_norm(std::span<const std::complex<double>> coeffs, SobolevOrder s) {
  if (coeffs.size() % 2 == 0) throw DomainError("sobolev_norm: expected 2J+1 coefficients");
  const long J = static_cast<long>(coeffs.size() / 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    sum += sobolev_weight(static_cast<long>(i) - J, s) * std::norm(coeffs[i]);
  return std::sqrt(sum);
}

double angular_extent(DomainKind d) {
  return (d == DomainKind::half_disk_neumann || d == DomainKind::half_disk_dirichlet) ? kPi : 2.0 * kPi;
}

double angular_factor(DomainKind d, const BasisElement& e, double theta) {
  const double w = frequency(d, e);
  const double c = angular_norm(d, e);
  return e.angular == Angular::cosine ? c * std::cos(w * theta) : c * std::sin(w * theta);
}

double angular_factor_d1(DomainKind d, const BasisElement& e, double theta) {
  const double w = frequency(d, e);
  const double c = angular_norm(d, e);
  return e.angular == Angular::cosine ? -c * w * std::sin(w * theta) : c * w * std::cos(w * theta);
}

double eigenfunction(DomainKind d, const BasisElement& e, double r, double theta) {
  return std::pow(r, e.degree.value()) * angular_factor(d, e, theta);
}

double interior_decay_closed_form(Degree g, double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("interior_decay: r0 must lie in (0, 1)");
  const double gv = g.value();
  return std::sqrt(gv * std::pow(r0, 2.0 * gv) + std::pow(r0, 2.0 * gv + 2.0) / (2.0 * gv + 2.0));
}

double interior_decay(DomainKind d, const BasisElement& e, double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("interior_decay: r0 must lie in (0, 1)");
  if (d == DomainKind::full_circle) return interior_decay_closed_form(e.degree, r0);

  // Tensor Gauss-Legendre over (r, theta). In r the integrand is a polynomial
  // (r^(2g+1) and r^(2g-1) with 2g integer), so the radial rule is exact.
  const double g = e.degree.value();
  const int nr = std::max(8, e.degree.twice() + 4);
  const int nt = std::max(64, 2 * e.degree.twice() + 16);
  const auto rq = gauss_legendre(nr, 0.0, r0);
  const auto tq = gauss_legendre(nt, 0.0, angular_extent(d));
  double sum = 0.0;
  for (std::size_t a = 0; a < rq.nodes.size(); ++a) {
    const double r = rq.nodes[a];
    const double rg = std::pow(r, g);
    const double rg1 = g == 0.0 ? 0.0 : g * std::pow(r, g - 1.0);
    for (std::size_t b = 0; b < tq.nodes.size(); ++b) {
      const double th = tq.nodes[b];
      const double f = angular_factor(d, e, th);
      const double fp = angular_factor_d1(d, e, th);
      const double u = rg * f;
      const double ur = rg1 * f;
      const double ut_over_r = (g == 0.0 ? 0.0 : std::pow(r, g - 1.0)) * fp;
      sum += rq.weights[a] * tq.weights[b] * r * (u * u + ur * ur + ut_over_r * ut_over_r);
    }
  }
  return std::sqrt(sum);
}

double fit_decay_constant(const BasisSpec& spec, double r0) {
  double c = 0.0;
  for (const auto& e : enumerate_basis(spec))
    c = std::max(c, interior_decay(spec.domain, e, r0) * std::pow(r0, -e.degree.value()));
  return c;
}

}  // namespace instab
