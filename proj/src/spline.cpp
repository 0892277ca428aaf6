#include "instab/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace instab {

namespace {

// Solves the cyclic system m_{i-1} + 4 m_i + m_{i+1} = r_i with the
// Sherman-Morrison correction on top of a Thomas sweep.
std::vector<double> solve_cyclic_141(std::vector<double> r) {
  const std::size_t n = r.size();
  if (n == 1) return {r[0] / 6.0};
  if (n == 2) {
    // 4 m0 + 2 m1 = r0, 2 m0 + 4 m1 = r1
    const double det = 12.0;
    return {(4.0 * r[0] - 2.0 * r[1]) / det, (4.0 * r[1] - 2.0 * r[0]) / det};
  }
  const double alpha = 1.0, beta = 1.0;  // corner entries
  const double gamma = -4.0;
  std::vector<double> diag(n, 4.0);
  diag[0] -= gamma;
  diag[n - 1] -= alpha * beta / gamma;

  auto thomas = [&](std::vector<double> rhs) {
    std::vector<double> c(n), d(n);
    c[0] = 1.0 / diag[0];
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double denom = diag[i] - c[i - 1];
      c[i] = 1.0 / denom;
      d[i] = (rhs[i] - d[i - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  };

  std::vector<double> x = thomas(std::move(r));
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> z = thomas(std::move(u));
  const double fact =
      (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::span<const double> samples, double period)
    : y_(samples.begin(), samples.end()), period_(period) {
  if (y_.empty()) throw std::invalid_argument("PeriodicSpline: no samples");
  if (!(period > 0.0)) throw std::invalid_argument("PeriodicSpline: period must be positive");
  const std::size_t n = y_.size();
  h_ = period / static_cast<double>(n);
  std::vector<double> rhs(n);
  const double s = 6.0 / (h_ * h_);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = y_[(i + n - 1) % n];
    const double next = y_[(i + 1) % n];
    rhs[i] = s * (next - 2.0 * y_[i] + prev);
  }
  m_ = solve_cyclic_141(std::move(rhs));
}

PeriodicSpline::Local PeriodicSpline::locate(double x) const {
  const std::size_t n = y_.size();
  double u = std::fmod(x, period_);
  if (u < 0.0) u += period_;
  double t = u / h_;
  auto i0 = static_cast<std::size_t>(std::floor(t));
  if (i0 >= n) i0 = n - 1;
  const double b = t - static_cast<double>(i0);
  return {i0, (i0 + 1) % n, 1.0 - b, b};
}

double PeriodicSpline::value(double x) const {
  const Local l = locate(x);
  const double h2 = h_ * h_;
  return m_[l.i0] * l.a * l.a * l.a * h2 / 6.0 + m_[l.i1] * l.b * l.b * l.b * h2 / 6.0 +
         (y_[l.i0] - m_[l.i0] * h2 / 6.0) * l.a + (y_[l.i1] - m_[l.i1] * h2 / 6.0) * l.b;
}

double PeriodicSpline::derivative(double x) const {
  const Local l = locate(x);
  return -m_[l.i0] * l.a * l.a * h_ / 2.0 + m_[l.i1] * l.b * l.b * h_ / 2.0 +
         (y_[l.i1] - y_[l.i0]) / h_ - (m_[l.i1] - m_[l.i0]) * h_ / 6.0;
}

double PeriodicSpline::second_derivative(double x) const {
  const Local l = locate(x);
  return m_[l.i0] * l.a + m_[l.i1] * l.b;
}

}  // namespace instab
