#include "instab/packing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "instab/error.hpp"

namespace instab {

namespace {

// Coefficients (ascending powers of u) of the j-th derivative of (1 - u^2)^(m+1).
std::vector<double> bump_polynomial(int m, int j) {
  const int deg = 2 * (m + 1);
  std::vector<double> c(static_cast<std::size_t>(deg) + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= m + 1; ++k) {
    c[static_cast<std::size_t>(2 * k)] = (k % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (m + 1 - k) / (k + 1);
  }
  for (int d = 0; d < j; ++d) {
    for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * static_cast<double>(i);
    c.back() = 0.0;
  }
  return c;
}

double horner(const std::vector<double>& c, double u) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
  return v;
}

}  // namespace

double bump_value(int m, double height, double half_width, double t) {
  const double u = t / half_width;
  if (!(std::abs(u) < 1.0)) return 0.0;
  return height * std::pow(1.0 - u * u, m + 1);
}

std::vector<double> build_bump(int m, double height, double half_width, std::size_t samples) {
  if (!(half_width > 0.0)) throw DomainError("build_bump: half width must be positive");
  if (height < 0.0) throw DomainError("build_bump: negative height");
  if (samples < 2) throw DomainError("build_bump: need at least two samples");
  std::vector<double> out(samples);
  const double step = 2.0 * half_width / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i)
    out[i] = bump_value(m, height, half_width, -half_width + static_cast<double>(i) * step);
  return out;
}

double bump_derivative_max(int m, int j) {
  if (m < 0 || j < 0) throw DomainError("bump_derivative_max: negative order");
  if (j > 2 * (m + 1)) return 0.0;
  const auto c = bump_polynomial(m, j);
  auto f = [&](double u) { return std::abs(horner(c, u)); };

  constexpr int kScan = 4000;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double v = f(-1.0 + 2.0 * i / kScan);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement on the bracketing scan cell.
  double lo = std::max(-1.0, -1.0 + 2.0 * (best - 1) / kScan);
  double hi = std::min(1.0, -1.0 + 2.0 * (best + 1) / kScan);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({best_val, f1, f2, f(lo), f(hi)});
}

double bump_half_width(int m, double beta, double eps) {
  if (m < 1) throw DomainError("bump_half_width: m must be >= 1");
  if (!(beta > 0.0) || !(eps > 0.0)) throw DomainError("bump_half_width: beta and eps must be positive");
  const double budget = beta / kCmSafetyFactor;
  double w = 2.0 * eps;
  for (int j = 1; j <= m; ++j)
    w = std::max(w, std::pow(eps * bump_derivative_max(m, j) / budget, 1.0 / j));
  return w;
}

double PackingClass::base_length() const {
  return is_radial(kind) ? 2.0 * std::numbers::pi * base_radius : 2.0 * base_radius;
}

std::size_t packing_cell_count(const PackingClass& cls, double eps) {
  if (!(eps > 0.0)) throw DomainError("packing_cell_count: eps must be positive");
  // The order-0 part of the norm is the bump height itself.
  if (eps > cls.beta / kCmSafetyFactor) return 0;
  const double w = bump_half_width(cls.m, cls.beta, eps);
  const double cells = std::floor(cls.base_length() / (2.0 * w));
  return cells > 0.0 ? static_cast<std::size_t>(cells) : 0;
}

double packing_epsilon0(const PackingClass& cls) {
  if (!(cls.base_radius > 0.0) || !(cls.eps_cap > 0.0)) throw DomainError("packing class: bad geometry");
  const double hi_limit = std::min(cls.eps_cap, cls.beta / kCmSafetyFactor);
  if (packing_cell_count(cls, hi_limit) >= 2) return hi_limit;
  // The half-width is increasing in eps, so the cell count is nonincreasing.
  double lo = 0.0, hi = hi_limit;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi_limit; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (packing_cell_count(cls, mid) >= 2)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

PackingFamily::PackingFamily(PackingClass cls, double eps) : cls_(cls), eps_(eps) {
  if (cls_.m < 1) throw DomainError("packing: m must be >= 1");
  if (cls_.grid_size <= static_cast<std::size_t>(2 * (cls_.m + 1)))
    throw DomainError("packing: grid too coarse for order m");
  const double eps0 = packing_epsilon0(cls_);
  if (!(eps > 0.0) || !(eps < eps0))
    throw DomainError("packing: eps must lie in (0, eps0), eps0 = " + std::to_string(eps0));
  half_width_ = instab::bump_half_width(cls_.m, cls_.beta, eps);
  cells_ = packing_cell_count(cls_, eps);
  pitch_ = cls_.base_length() / static_cast<double>(cells_);
}

double PackingFamily::certified_log_cardinality() const {
  return static_cast<double>(cells_) * std::numbers::ln2;
}

Shape PackingFamily::shape(const Pattern& pattern) const {
  if (pattern.size() != cells_)
    throw DomainError("packing: pattern length " + std::to_string(pattern.size()) +
                      " != cell count " + std::to_string(cells_));
  const std::size_t M = cls_.grid_size;
  std::vector<double> values(M, 0.0);
  const ProfileClass pc{cls_.m, cls_.beta, cls_.eps_cap};
  const double L = cls_.base_length();

  if (is_radial(cls_.kind)) {
    const double ds = L / static_cast<double>(M);  // arc-length spacing on the base circle
    for (std::size_t c = 0; c < cells_; ++c) {
      if (!pattern[c]) continue;
      const double sc = (static_cast<double>(c) + 0.5) * pitch_;
      for (std::size_t i = 0; i < M; ++i) {
        double t = static_cast<double>(i) * ds - sc;
        t -= L * std::round(t / L);
        values[i] += bump_value(cls_.m, eps_, half_width_, t);
      }
    }
    return Shape(cls_.kind, RadialProfile(cls_.base_radius, cls_.center, std::move(values), pc));
  }

  const FlatProfile grid(cls_.base_radius, cls_.center, std::vector<double>(M, 0.0), pc);
  for (std::size_t c = 0; c < cells_; ++c) {
    if (!pattern[c]) continue;
    const double xc = cls_.center.x - cls_.base_radius + (static_cast<double>(c) + 0.5) * pitch_;
    for (std::size_t i = 0; i < M; ++i) values[i] += bump_value(cls_.m, eps_, half_width_, grid.x(i) - xc);
  }
  return Shape(cls_.kind, FlatProfile(cls_.base_radius, cls_.center, std::move(values), pc));
}

Pattern PackingFamily::random_pattern(std::mt19937_64& rng) const {
  Pattern p(cells_);
  std::uint64_t word = 0;
  for (std::size_t c = 0; c < cells_; ++c) {
    if (c % 64 == 0) word = rng();
    p[c] = static_cast<std::uint8_t>((word >> (c % 64)) & 1u);
  }
  return p;
}

PackingFamily build_packing(const PackingClass& cls, double eps) { return PackingFamily(cls, eps); }

double packing_lower_bound(double eps, int m, [[maybe_unused]] double beta, int N, double eps0) {
  if (m < 1 || N < 2) throw DomainError("packing_lower_bound: need m >= 1 and N >= 2");
  if (!(eps > 0.0) || !(eps < eps0)) throw DomainError("packing_lower_bound: eps must lie in (0, eps0)");
  const double q = static_cast<double>(N - 1) / m;
  return std::pow(2.0, -N) * std::pow(eps0, q) * std::pow(eps, -q);
}

}  // namespace instab
