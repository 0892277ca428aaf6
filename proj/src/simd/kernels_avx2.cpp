#include "instab/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace instab::simd::detail {

namespace {

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  return std::min(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

// Vectorized over target segments, four at a time. Arithmetic mirrors the
// scalar kernel operation for operation (no FMA) so both paths agree bitwise.
double directed_distance_avx2(const double* qx, const double* qy, const std::uint8_t* mask,
                              std::size_t n, const SegmentTable& target) {
  const std::size_t ns = target.size();
  const std::size_t ns4 = ns - ns % 4;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask != nullptr && mask[i] == 0) continue;
    const __m256d px = _mm256_set1_pd(qx[i]);
    const __m256d py = _mm256_set1_pd(qy[i]);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < ns4; s += 4) {
      const __m256d ax = _mm256_loadu_pd(&target.ax[s]);
      const __m256d ay = _mm256_loadu_pd(&target.ay[s]);
      const __m256d dx = _mm256_loadu_pd(&target.dx[s]);
      const __m256d dy = _mm256_loadu_pd(&target.dy[s]);
      const __m256d il = _mm256_loadu_pd(&target.inv_len2[s]);
      const __m256d rx = _mm256_sub_pd(px, ax);
      const __m256d ry = _mm256_sub_pd(py, ay);
      __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(rx, dx), _mm256_mul_pd(ry, dy)), il);
      t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
      const __m256d ex = _mm256_sub_pd(rx, _mm256_mul_pd(t, dx));
      const __m256d ey = _mm256_sub_pd(ry, _mm256_mul_pd(t, dy));
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
      best = _mm256_min_pd(best, d2);
    }
    double b = hmin(best);
    for (std::size_t s = ns4; s < ns; ++s) {
      const double rx = qx[i] - target.ax[s];
      const double ry = qy[i] - target.ay[s];
      double t = (rx * target.dx[s] + ry * target.dy[s]) * target.inv_len2[s];
      t = std::min(std::max(t, 0.0), 1.0);
      const double ex = rx - t * target.dx[s];
      const double ey = ry - t * target.dy[s];
      b = std::min(b, ex * ex + ey * ey);
    }
    worst = std::max(worst, b);
  }
  return std::sqrt(worst);
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  const std::size_t n8 = n - n % 8;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n8; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (std::size_t i = n8; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace instab::simd::detail
