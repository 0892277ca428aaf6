#pragma once

// Integer-order Bessel functions of the first and second kind and the
// Hankel function H^(1) = J + iY.

#include <complex>
#include <vector>

namespace instab {

/// Documented accuracy range of the checked entry points.
inline constexpr int kBesselMaxOrder = 80;
inline constexpr double kBesselMinArg = 0.3;
inline constexpr double kBesselMaxArg = 60.0;

/// J_0..J_nmax and Y_0..Y_nmax at x > 0 (no range check; accuracy is
/// documented on [kBesselMinArg, kBesselMaxArg] and holds well beyond it).
struct BesselTable {
  std::vector<double> j, y;
  std::complex<double> h(int n) const { return {j[static_cast<std::size_t>(n)], y[static_cast<std::size_t>(n)]}; }
};
BesselTable bessel_table(int n_max, double x);

/// J_n(x) for n >= 0 and x > 0 (unchecked range).
std::vector<double> bessel_j_sequence(int n_max, double x);

double bessel_j(int n, double x);
double bessel_y(int n, double x);
std::complex<double> hankel1(int n, double x);
/// Derivatives from C_n' = (C_{n-1} - C_{n+1}) / 2 and C_0' = -C_1.
double bessel_j_prime(int n, double x);
double bessel_y_prime(int n, double x);

struct HankelBoundFit {
  double c7 = 0.0;       // sup of |H_n(r)|^-1 / ((e r/2)^n (n-1)^-(n-1)) over n >= 2
  double c7_flat = 0.0;  // sup of |H_n(r)|^-1 over n = 0, 1
  int points = 0;
};

/// Fits the constant of |H_n(r)|^-1 <= C7 (e r / 2)^n (n-1)^-(n-1) on the
/// grid n = n_lo..n_hi (n >= 2 part) times `r_samples` uniform radii in [r_lo, r_hi].
HankelBoundFit hankel_bound_check(int n_lo, int n_hi, double r_lo, double r_hi, int r_samples);

}  // namespace instab
