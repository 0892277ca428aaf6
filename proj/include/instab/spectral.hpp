#pragma once

// Stekloff eigenbases of the disk, half disk and slit disk, degree weights,
// Fourier-multiplier Sobolev norms on the circle and interior decay.

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace instab {

enum class DomainKind {
  full_circle,
  half_disk_neumann,    // r^j cos(j theta) on the upper half disk
  half_disk_dirichlet,  // r^j sin(j theta)
  slit_disk_neumann,    // r^(k/2) cos(k theta / 2), theta in (0, 2 pi)
  slit_disk_dirichlet,  // r^(k/2) sin(k theta / 2)
};
enum class Weighting { dirichlet_trace, neumann_trace, plain };

const char* to_string(DomainKind d);
DomainKind parse_domain_kind(std::string_view text);

/// Nonnegative half-integer, stored as twice its value.
class Degree {
 public:
  constexpr Degree() = default;
  static constexpr Degree from_twice(int twice) { return Degree(twice); }
  static constexpr Degree integer(int j) { return Degree(2 * j); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  friend constexpr auto operator<=>(Degree, Degree) = default;

 private:
  constexpr explicit Degree(int twice) : twice_(twice) {}
  int twice_ = 0;
};

struct BasisSpec {
  DomainKind domain = DomainKind::full_circle;
  Weighting weighting = Weighting::plain;
  int n_max = 0;
};

enum class Angular { cosine, sine };

struct BasisElement {
  std::size_t index = 0;
  Degree degree;
  /// Number of elements sharing this degree (1 or 2).
  int multiplicity = 1;
  Angular angular = Angular::cosine;
};

/// All elements with degree <= n_max in nondecreasing degree order; at equal
/// degree the cosine element precedes the sine element.
std::vector<BasisElement> enumerate_basis(const BasisSpec& spec);

/// Dimension of degree-j spherical harmonics in N variables.
long long multiplicity_general_n(int j, int N);

enum class GammaConvention { dirichlet, neumann };
/// 1 + degree (dirichlet) or degree (neumann; degree 0 rejected).
double gamma_value(const BasisElement& e, GammaConvention c);

/// Weight multiplying the basis coefficient for the given weighting:
/// 1/sqrt(1+degree), sqrt(degree) (1 at degree 0) or 1.
double basis_weight(const BasisElement& e, Weighting w);

enum class SobolevOrder { minus_half, zero, plus_half };
double sobolev_weight(long j, SobolevOrder s);
/// Coefficients c[i] of e^{i j theta} with j = i - J, where c.size() = 2J + 1.
double sobolev_norm(std::span<const std::complex<double>> coeffs, SobolevOrder s);

/// Angular interval of the accessible boundary: [0, 2 pi] or [0, pi].
double angular_extent(DomainKind d);

/// L^2(accessible boundary)-normalized angular factor and its derivative.
double angular_factor(DomainKind d, const BasisElement& e, double theta);
double angular_factor_d1(DomainKind d, const BasisElement& e, double theta);

/// Harmonic extension r^degree * angular_factor at (r, theta).
double eigenfunction(DomainKind d, const BasisElement& e, double r, double theta);

/// H^1 norm of the eigenfunction on the part of the domain inside radius r0.
double interior_decay(DomainKind d, const BasisElement& e, double r0);
/// Closed form sqrt(g r0^(2g) + r0^(2g+2) / (2g+2)) for degree g; valid for every domain.
double interior_decay_closed_form(Degree g, double r0);

/// Smallest C with interior_decay <= C exp(-log(1/r0) degree) over the enumerated basis.
double fit_decay_constant(const BasisSpec& spec, double r0);

}  // namespace instab
