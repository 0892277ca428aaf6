#include <doctest.h>

#include <cmath>
#include <string>

#include "instab/engine.hpp"
#include "instab/error.hpp"

using namespace instab;

namespace {

EngineConfig small(ProblemKind k) {
  EngineConfig c = default_engine_config(k);
  c.eps_list = {0.12, 0.08};
  c.budget = 6;
  c.n_max = 8;
  c.quad_nodes = 128;
  c.scatter_nodes = 64;
  c.a_list = {1.0};
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("exponent fit recovers a planted stretched exponential") {
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
  std::vector<double> norms;
  for (double e : eps) norms.push_back(std::exp(-std::pow(e, -0.25)));
  const ExponentFit f = fit_instability_exponent(eps, norms);
  CHECK(std::abs(f.q - 0.25) <= 1e-6);
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points_used == 6);
  CHECK_FALSE(f.non_exponential);
  CHECK_FALSE(f.clipped);
}

TEST_CASE("exponent fit flags power-law data") {
  std::vector<double> eps, norms;
  for (int k = 1; k <= 30; k += 3) {
    eps.push_back(std::pow(10.0, -k));
    norms.push_back(eps.back() * eps.back());
  }
  const ExponentFit f = fit_instability_exponent(eps, norms);
  CHECK(f.q < 0.1);
  CHECK(f.power_r2 == doctest::Approx(1.0));
  CHECK(f.non_exponential);
}

TEST_CASE("exponent fit clipping, unusable points and the minimum count") {
  const std::vector<double> eps{0.5, 0.2, 0.1, 0.05, 0.02};
  const ExponentFit f = fit_instability_exponent(eps, {1.5, 0.3, 1e-3, 1e-40, 1e-320});
  CHECK(f.unusable == 1);
  CHECK(f.clipped);
  CHECK(f.points_used == 4);
  CHECK_THROWS_AS(fit_instability_exponent(eps, {1.5, 2.0, 0.1, 0.01, 0.001}), DomainError);
  CHECK_THROWS_AS(fit_instability_exponent({0.1, 0.2}, {0.1}), DomainError);
  CHECK_THROWS_AS(fit_instability_exponent({0.1, 0.2, 0.3, 1.5}, {0.1, 0.1, 0.1, 0.1}), DomainError);
}

TEST_CASE("problem kinds round-trip through their names") {
  for (ProblemKind k : {ProblemKind::dtn, ProblemKind::ntd, ProblemKind::electrodes, ProblemKind::farfield})
    CHECK(parse_problem_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_problem_kind("nonsense"), DomainError);
}

TEST_CASE("small dtn run: records are admissible and consistent") {
  const EngineConfig cfg = small(ProblemKind::dtn);
  const InstabilityReport rep = run_instability(cfg);
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.eps0 > 0.12);
  CHECK(rep.theoretical_exponent == doctest::Approx(0.25));
  for (const WitnessRecord& r : rep.records) {
    CHECK(r.patterns >= 2);
    CHECK(r.patterns <= cfg.budget);
    CHECK(r.first != r.second);
    CHECK(r.hausdorff >= r.eps - r.resolution);
    CHECK(r.norm > 0.0);
    CHECK(std::isfinite(r.norm));
    CHECK(r.delta == doctest::Approx(delta_of_epsilon(r.eps, 1.0, 1)));
    CHECK(r.counting_margin == doctest::Approx(r.packing_log_bound - r.net_log_bound));
    CHECK(r.counting_exceeds == (r.counting_margin > 0.0));
    CHECK(r.certified_log_cardinality >= r.packing_log_bound);
  }
  CHECK(rep.constants.C2 >= 2.0);
  CHECK(rep.constants.p == 1);
  CHECK(report_csv(rep).find("problem,eps,") == 0);
  CHECK(report_summary_csv(rep).find("empirical minimum over budget") != std::string::npos);
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  EngineConfig cfg = small(ProblemKind::dtn);
  cfg.threads = 1;
  const std::string one = report_csv(run_instability(cfg));
  cfg.threads = 3;
  CHECK(report_csv(run_instability(cfg)) == one);
  cfg.seed = 4;
  CHECK(report_csv(run_instability(cfg)) != one);
}

TEST_CASE("budget of two evaluates one pair") {
  EngineConfig cfg = small(ProblemKind::dtn);
  cfg.budget = 2;
  const InstabilityReport rep = run_instability(cfg);
  for (const WitnessRecord& r : rep.records) CHECK(r.patterns == 2);
  cfg.budget = 1;
  CHECK_THROWS_AS(run_instability(cfg), DomainError);
  cfg.budget = 6;
  cfg.eps_list = {0.9};
  CHECK_THROWS_AS(run_instability(cfg), DomainError);
}

TEST_CASE("ntd, electrode and far-field problems run end to end") {
  for (ProblemKind k : {ProblemKind::ntd, ProblemKind::electrodes, ProblemKind::farfield}) {
    EngineConfig cfg = small(k);
    if (k == ProblemKind::farfield) cfg.budget = 4;
    const InstabilityReport rep = run_instability(cfg);
    REQUIRE(rep.records.size() == 2);
    for (const WitnessRecord& r : rep.records) {
      CHECK(r.norm > 0.0);
      CHECK(std::isfinite(r.norm));
      CHECK(r.hausdorff >= r.eps - r.resolution);
    }
  }
}

TEST_CASE("counting threshold: every grid eps below it has a positive margin") {
  PackingClass cls = default_engine_config(ProblemKind::dtn).packing;
  const double eps0 = packing_epsilon0(cls);
  const ClassConstants c{2.0, 0.65, 1};
  const double eps1 = counting_threshold(cls, eps0, c, false);
  MESSAGE("eps1 = " << eps1);
  REQUIRE(eps1 > 0.0);
  for (double f : {1.0, 0.7, 0.3}) {
    const double e = eps1 * f;
    if (std::pow(e, -0.25) > 700.0) continue;
    const double margin = packing_lower_bound(e, 1, cls.beta, 2, eps0) - net_size(delta_of_epsilon(e, 1.0, 1), c).log_bound;
    CHECK(margin > 0.0);
  }
  // Far past eps1 the net dominates.
  const double e = std::min(0.5 * eps0, eps1 * 1e6);
  CHECK(packing_lower_bound(e, 1, cls.beta, 2, eps0) < net_size(delta_of_epsilon(e, 1.0, 1), c).log_bound);
}
