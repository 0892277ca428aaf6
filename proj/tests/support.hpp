#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "instab/shapes.hpp"

namespace testing {

// Smooth star-shaped radial subgraph: a random trigonometric polynomial of
// low degree shifted to be nonnegative and scaled to the given peak.
inline instab::Shape smooth_star(std::mt19937_64& rng, double base_radius, double peak, int modes = 4,
                                 std::size_t M = 2048) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> ca(static_cast<std::size_t>(modes) + 1), cb(ca.size());
  for (int k = 1; k <= modes; ++k) {
    ca[static_cast<std::size_t>(k)] = u(rng) / (k * k);
    cb[static_cast<std::size_t>(k)] = u(rng) / (k * k);
  }
  std::vector<double> g(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(M);
    double v = 0.0;
    for (int k = 1; k <= modes; ++k)
      v += ca[static_cast<std::size_t>(k)] * std::cos(k * t) + cb[static_cast<std::size_t>(k)] * std::sin(k * t);
    g[i] = v;
  }
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  const double shift = *lo, span = *hi - *lo;
  for (double& v : g) v = (v - shift) / span * peak;
  instab::RadialProfile p(base_radius, {0.0, 0.0}, std::move(g), instab::ProfileClass{1, 10.0, peak});
  return instab::Shape(instab::ShapeKind::radial_subgraph, std::move(p));
}

inline instab::Shape disk(double radius, double base_radius = 0.5, std::size_t M = 2048) {
  const double off = radius - base_radius;
  instab::RadialProfile p(base_radius, {0.0, 0.0}, std::vector<double>(M, off),
                          instab::ProfileClass{1, 1.0, std::max(off, 0.25)});
  return instab::Shape(instab::ShapeKind::radial_subgraph, std::move(p));
}

}  // namespace testing
