#include "instab/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace instab::simd::detail {

double directed_distance_scalar(const double* qx, const double* qy, const std::uint8_t* mask,
                                std::size_t n, const SegmentTable& target) {
  const std::size_t ns = target.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask != nullptr && mask[i] == 0) continue;
    const double px = qx[i];
    const double py = qy[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < ns; ++s) {
      const double rx = px - target.ax[s];
      const double ry = py - target.ay[s];
      double t = (rx * target.dx[s] + ry * target.dy[s]) * target.inv_len2[s];
      t = std::min(std::max(t, 0.0), 1.0);
      const double ex = rx - t * target.dx[s];
      const double ey = ry - t * target.dy[s];
      best = std::min(best, ex * ex + ey * ey);
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace instab::simd::detail
