#include "instab/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace instab::simd {

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(INSTAB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {
Isa detect() {
  if (const char* env = std::getenv("INSTAB_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}
}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

SegmentTable make_segments(std::span<const double> x, std::span<const double> y, bool closed) {
  if (x.size() != y.size()) throw std::invalid_argument("make_segments: coordinate size mismatch");
  SegmentTable t;
  const std::size_t n = x.size();
  if (n == 0) return t;
  const std::size_t ns = closed ? n : n - 1;
  t.ax.resize(ns);
  t.ay.resize(ns);
  t.dx.resize(ns);
  t.dy.resize(ns);
  t.inv_len2.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const std::size_t e = (s + 1) % n;
    t.ax[s] = x[s];
    t.ay[s] = y[s];
    t.dx[s] = x[e] - x[s];
    t.dy[s] = y[e] - y[s];
    const double l2 = t.dx[s] * t.dx[s] + t.dy[s] * t.dy[s];
    t.inv_len2[s] = l2 > 0.0 ? 1.0 / l2 : 0.0;
  }
  if (n == 1) {  // a single point acts as a degenerate segment
    t.ax = {x[0]};
    t.ay = {y[0]};
    t.dx = {0.0};
    t.dy = {0.0};
    t.inv_len2 = {0.0};
  }
  return t;
}

double directed_distance(std::span<const double> qx, std::span<const double> qy,
                         std::span<const std::uint8_t> mask, const SegmentTable& target,
                         Isa isa) {
  if (qx.size() != qy.size() || (!mask.empty() && mask.size() != qx.size()))
    throw std::invalid_argument("directed_distance: size mismatch");
  if (target.size() == 0) throw std::invalid_argument("directed_distance: empty target");
  const std::uint8_t* m = mask.empty() ? nullptr : mask.data();
#if defined(INSTAB_HAVE_AVX2_TU)
  if (isa == Isa::avx2 && isa_available(Isa::avx2))
    return detail::directed_distance_avx2(qx.data(), qy.data(), m, qx.size(), target);
#endif
  return detail::directed_distance_scalar(qx.data(), qy.data(), m, qx.size(), target);
}

double directed_distance(std::span<const double> qx, std::span<const double> qy,
                         std::span<const std::uint8_t> mask, const SegmentTable& target) {
  return directed_distance(qx, qy, mask, target, active_isa());
}

double squared_distance(std::span<const double> a, std::span<const double> b, Isa isa) {
  if (a.size() != b.size()) throw std::invalid_argument("squared_distance: size mismatch");
#if defined(INSTAB_HAVE_AVX2_TU)
  if (isa == Isa::avx2 && isa_available(Isa::avx2))
    return detail::squared_distance_avx2(a.data(), b.data(), a.size());
#endif
  return detail::squared_distance_scalar(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  return squared_distance(a, b, active_isa());
}

}  // namespace instab::simd
