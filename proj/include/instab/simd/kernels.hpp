#pragma once

// Data-parallel inner loops used by the geometry and pair-search code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The variant is chosen once at runtime from the CPU feature
// bits; setting INSTAB_SIMD=scalar in the environment forces the reference
// path. Both paths are exercised directly by the equivalence tests.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace instab::simd {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the convenience overloads (detected once, env-overridable).
Isa active_isa();

/// Structure-of-arrays segment table for point-to-polyline queries.
struct SegmentTable {
  std::vector<double> ax, ay;      // segment start
  std::vector<double> dx, dy;      // end - start
  std::vector<double> inv_len2;    // 1 / |d|^2, or 0 for a degenerate segment

  std::size_t size() const { return ax.size(); }
};

/// Segments joining consecutive vertices; `closed` adds the last->first edge.
SegmentTable make_segments(std::span<const double> x, std::span<const double> y, bool closed);

/// max over query points with mask[i] != 0 of the Euclidean distance from
/// (qx[i], qy[i]) to the nearest segment. Returns 0 when no point is masked.
/// An empty mask span means "all points".
double directed_distance(std::span<const double> qx, std::span<const double> qy,
                         std::span<const std::uint8_t> mask, const SegmentTable& target,
                         Isa isa);
double directed_distance(std::span<const double> qx, std::span<const double> qy,
                         std::span<const std::uint8_t> mask, const SegmentTable& target);

/// sum_i (a[i] - b[i])^2
double squared_distance(std::span<const double> a, std::span<const double> b, Isa isa);
double squared_distance(std::span<const double> a, std::span<const double> b);

namespace detail {
double directed_distance_scalar(const double* qx, const double* qy, const std::uint8_t* mask,
                                std::size_t n, const SegmentTable& target);
double squared_distance_scalar(const double* a, const double* b, std::size_t n);
#if defined(INSTAB_HAVE_AVX2_TU)
double directed_distance_avx2(const double* qx, const double* qy, const std::uint8_t* mask,
                              std::size_t n, const SegmentTable& target);
double squared_distance_avx2(const double* a, const double* b, std::size_t n);
#endif
}  // namespace detail

}  // namespace instab::simd
