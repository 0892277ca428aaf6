#include "instab/curve.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>

#include "instab/error.hpp"

namespace instab {

StarCurve::StarCurve(const RadialProfile& profile, std::size_t max_mode)
    : base_radius_(profile.base_radius()), center_(profile.center()) {
  const auto& v = profile.values();
  const std::size_t M = v.size();
  std::vector<std::complex<double>> spec;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  fft.fwd(spec, v);
  const double inv = 1.0 / static_cast<double>(M);
  mean_ = spec[0].real() * inv;
  std::size_t kmax = M / 2;
  if (max_mode > 0 && max_mode < kmax) kmax = max_mode;
  coeffs_.resize(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) {
    // The Nyquist mode of an even-length real sequence appears once, not twice.
    const double scale = (M % 2 == 0 && k == M / 2) ? inv : 2.0 * inv;
    coeffs_[k - 1] = spec[k] * scale;
  }
  max_radius_ = profile.max_radius();
}

StarCurve StarCurve::circle(double radius, std::size_t samples) {
  if (!(radius > 0.0)) throw DomainError("StarCurve::circle: radius must be positive");
  StarCurve c;
  c.base_radius_ = radius;
  c.coeffs_.assign(samples / 2, {0.0, 0.0});
  c.max_radius_ = radius;
  return c;
}

void StarCurve::offset(double t, double& g, double& g1, double& g2) const {
  g = mean_;
  g1 = 0.0;
  g2 = 0.0;
  const std::complex<double> step = std::polar(1.0, t);
  std::complex<double> e = step;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    if (i % 32 == 31) e = std::polar(1.0, k * t);  // bound recurrence drift
    // Re(c e^{ikt}) and its t-derivatives.
    const std::complex<double> ce = coeffs_[i] * e;
    g += ce.real();
    g1 -= k * ce.imag();
    g2 -= k * k * ce.real();
    e *= step;
  }
}

CurvePoint StarCurve::at(double t) const {
  double g, g1, g2;
  offset(t, g, g1, g2);
  const double c = std::cos(t), s = std::sin(t);
  const double rho = base_radius_ + g;
  CurvePoint p;
  p.x = center_.x + rho * c;
  p.y = center_.y + rho * s;
  p.dx = g1 * c - rho * s;
  p.dy = g1 * s + rho * c;
  p.ddx = g2 * c - 2.0 * g1 * s - rho * c;
  p.ddy = g2 * s + 2.0 * g1 * c - rho * s;
  return p;
}

}  // namespace instab
