#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "instab/simd/kernels.hpp"

using namespace instab::simd;

namespace {

double brute_directed(const std::vector<double>& qx, const std::vector<double>& qy, const std::vector<std::uint8_t>& mask,
                      const std::vector<double>& px, const std::vector<double>& py, bool closed) {
  const std::size_t n = px.size();
  const std::size_t segs = closed ? n : n - 1;
  double worst = 0.0;
  for (std::size_t i = 0; i < qx.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < segs; ++s) {
      const std::size_t e = (s + 1) % n;
      const double dx = px[e] - px[s], dy = py[e] - py[s];
      const double l2 = dx * dx + dy * dy;
      double t = l2 > 0.0 ? ((qx[i] - px[s]) * dx + (qy[i] - py[s]) * dy) / l2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, std::hypot(qx[i] - px[s] - t * dx, qy[i] - py[s] - t * dy));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("simd squared_distance matches the scalar reference on ragged lengths") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 67u, 1000u, 4225u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g(rng);
      b[i] = g(rng) * 1e-3 + a[i];
    }
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) ref += (a[i] - b[i]) * (a[i] - b[i]);
    const double s = squared_distance(a, b, Isa::scalar);
    CHECK(s == doctest::Approx(ref).epsilon(1e-13));
    if (isa_available(Isa::avx2)) CHECK(squared_distance(a, b, Isa::avx2) == doctest::Approx(s).epsilon(1e-13));
    CHECK(squared_distance(a, b) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("simd directed_distance agrees with brute force for every isa and mask") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nq = 1 + static_cast<std::size_t>(trial * 7 % 53);
    const std::size_t np = 2 + static_cast<std::size_t>(trial * 5 % 41);
    std::vector<double> qx(nq), qy(nq), px(np), py(np);
    std::vector<std::uint8_t> mask(nq);
    for (std::size_t i = 0; i < nq; ++i) {
      qx[i] = u(rng);
      qy[i] = u(rng);
      mask[i] = coin(rng) ? 1 : 0;
    }
    for (std::size_t i = 0; i < np; ++i) {
      px[i] = u(rng);
      py[i] = u(rng);
    }
    px[np - 1] = px[0];  // a degenerate segment when closed
    py[np - 1] = py[0];
    for (bool closed : {false, true}) {
      const SegmentTable table = make_segments(px, py, closed);
      for (const auto& m : {mask, std::vector<std::uint8_t>{}}) {
        const double ref = brute_directed(qx, qy, m, px, py, closed);
        const double s = directed_distance(qx, qy, m, table, Isa::scalar);
        CHECK(s == doctest::Approx(ref).epsilon(1e-12));
        if (isa_available(Isa::avx2)) CHECK(directed_distance(qx, qy, m, table, Isa::avx2) == doctest::Approx(s).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("simd directed_distance with an all-zero mask is zero") {
  const std::vector<double> x{0.0, 1.0}, y{0.0, 0.0}, qx{5.0}, qy{5.0};
  const std::vector<std::uint8_t> none{0};
  const SegmentTable t = make_segments(x, y, false);
  CHECK(directed_distance(qx, qy, none, t, Isa::scalar) == 0.0);
  CHECK(directed_distance(qx, qy, none, t) == 0.0);
}

TEST_CASE("simd isa reporting") {
  CHECK(isa_available(Isa::scalar));
  CHECK(std::string(isa_name(Isa::scalar)) == "scalar");
  CHECK(isa_available(active_isa()));
}
