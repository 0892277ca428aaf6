#include "instab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "instab/error.hpp"

namespace instab {

namespace {

constexpr long double kRescaleAbove = 1e3000L;

void check_args(int n, double x) {
  if (n < 0 || n > kBesselMaxOrder)
    throw DomainError("bessel: order " + std::to_string(n) + " outside [0, " +
                      std::to_string(kBesselMaxOrder) + "]");
  if (!(x >= kBesselMinArg && x <= kBesselMaxArg))
    throw DomainError("bessel: argument outside [0.3, 60]");
}

// Miller's backward recurrence in extended precision, normalized by
// J_0 + 2 sum_k J_2k = 1. Returns J_0..J_top.
std::vector<long double> miller(int top, double x) {
  const int m = std::max(top, static_cast<int>(x));
  int start = m + 20 + static_cast<int>(std::sqrt(40.0 * (m + 1)));
  start += start % 2;
  std::vector<long double> v(static_cast<std::size_t>(start) + 2, 0.0L);
  const long double xl = x;
  v[static_cast<std::size_t>(start) + 1] = 0.0L;
  v[static_cast<std::size_t>(start)] = 1e-30L;
  for (int k = start; k >= 1; --k) {
    const auto ku = static_cast<std::size_t>(k);
    v[ku - 1] = (2.0L * k / xl) * v[ku] - v[ku + 1];
    if (std::abs(v[ku - 1]) > kRescaleAbove)
      for (std::size_t i = ku - 1; i < v.size(); ++i) v[i] /= kRescaleAbove;
  }
  long double norm = v[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0L * v[static_cast<std::size_t>(k)];
  for (auto& e : v) e /= norm;
  v.resize(static_cast<std::size_t>(std::max(top, 0)) + 1);
  return v;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
  if (n_max < 0 || !(x > 0.0)) throw DomainError("bessel_j_sequence: need n_max >= 0 and x > 0");
  const auto v = miller(n_max, x);
  return std::vector<double>(v.begin(), v.end());
}

BesselTable bessel_table(int n_max, double x) {
  if (n_max < 0 || !(x > 0.0)) throw DomainError("bessel_table: need n_max >= 0 and x > 0");
  // The Neumann series for Y_0 and Y_1 needs even/odd orders well past x.
  const int series_top =
      std::max(n_max + 1, static_cast<int>(x + 30.0 + std::sqrt(60.0 * (x + 1.0))));
  const auto J = miller(series_top, x);
  const long double xl = x;
  const long double lg = std::log(xl / 2.0L) + 0.57721566490153286060651209008240243L;
  const long double pi = 3.14159265358979323846264338327950288L;

  long double s0 = 0.0L, s1 = 0.0L;
  for (int k = 1; 2 * k + 1 <= series_top; ++k) {
    const long double sgn = (k % 2 == 0) ? 1.0L : -1.0L;
    s0 += sgn * J[static_cast<std::size_t>(2 * k)] / k;
    s1 += sgn * (J[static_cast<std::size_t>(2 * k - 1)] - J[static_cast<std::size_t>(2 * k + 1)]) / k;
  }
  // (pi/2) Y_0 = (log(x/2) + gamma) J_0 - 2 sum (-1)^k J_2k / k, and Y_1 = -Y_0'.
  const long double y0 = (2.0L / pi) * (lg * J[0] - 2.0L * s0);
  const long double y1 = (2.0L / pi) * (-J[0] / xl + lg * J[1] + s1);

  BesselTable t;
  t.j.resize(static_cast<std::size_t>(n_max) + 1);
  t.y.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) t.j[static_cast<std::size_t>(n)] = static_cast<double>(J[static_cast<std::size_t>(n)]);
  long double ym = y0, yc = y1;
  t.y[0] = static_cast<double>(y0);
  if (n_max >= 1) t.y[1] = static_cast<double>(y1);
  for (int n = 1; n < n_max; ++n) {
    const long double yn = (2.0L * n / xl) * yc - ym;
    ym = yc;
    yc = yn;
    t.y[static_cast<std::size_t>(n) + 1] = static_cast<double>(yn);
  }
  return t;
}

double bessel_j(int n, double x) {
  check_args(n, x);
  return static_cast<double>(miller(n, x)[static_cast<std::size_t>(n)]);
}

double bessel_y(int n, double x) {
  check_args(n, x);
  return bessel_table(n, x).y[static_cast<std::size_t>(n)];
}

std::complex<double> hankel1(int n, double x) {
  check_args(n, x);
  return bessel_table(n, x).h(n);
}

double bessel_j_prime(int n, double x) {
  check_args(n, x);
  const auto t = bessel_table(n + 1, x);
  if (n == 0) return -t.j[1];
  const auto u = static_cast<std::size_t>(n);
  return 0.5 * (t.j[u - 1] - t.j[u + 1]);
}

double bessel_y_prime(int n, double x) {
  check_args(n, x);
  const auto t = bessel_table(n + 1, x);
  if (n == 0) return -t.y[1];
  const auto u = static_cast<std::size_t>(n);
  return 0.5 * (t.y[u - 1] - t.y[u + 1]);
}

HankelBoundFit hankel_bound_check(int n_lo, int n_hi, double r_lo, double r_hi, int r_samples) {
  if (n_lo < 0 || n_hi < n_lo || n_hi > kBesselMaxOrder)
    throw DomainError("hankel_bound_check: bad order range");
  if (!(r_lo > 0.0) || r_hi < r_lo || r_samples < 1)
    throw DomainError("hankel_bound_check: bad radius range");
  HankelBoundFit fit;
  for (int s = 0; s < r_samples; ++s) {
    const double r = r_samples == 1 ? r_lo : r_lo + (r_hi - r_lo) * s / (r_samples - 1);
    const auto t = bessel_table(n_hi, r);
    for (int n = n_lo; n <= n_hi; ++n) {
      const double log_inv_h = -std::log(std::abs(t.h(n)));
      if (n <= 1) {
        fit.c7_flat = std::max(fit.c7_flat, std::exp(log_inv_h));
      } else {
        const double log_rhs = n * std::log(std::numbers::e * r / 2.0) - (n - 1) * std::log(n - 1.0);
        fit.c7 = std::max(fit.c7, std::exp(log_inv_h - log_rhs));
      }
      ++fit.points;
    }
  }
  return fit;
}

}  // namespace instab
