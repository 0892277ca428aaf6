// Acceptance suite: one PASS/FAIL line per criterion. Run with a criterion id
// (1, 2a, 2b, 3, 4, 5, 6, 7, 8, 9a, 9b, 9c, 9d, 10) or "all".

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "instab/bessel.hpp"
#include "instab/conductivity.hpp"
#include "instab/engine.hpp"
#include "instab/opnet.hpp"
#include "instab/packing.hpp"
#include "instab/scattering.hpp"
#include "support.hpp"

using namespace instab;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s [%s] %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  return ok;
}

template <class... T>
std::string fmt(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

InclusionProblem inclusion(Shape s, double a = 2.0) {
  InclusionProblem p{std::move(s)};
  p.a = a;
  return p;
}

// Inclusions of the default conductivity class: base radius 1/2, offsets up to 1/4.
std::vector<Shape> random_inclusions(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> peak(0.05, 0.25);
  std::vector<Shape> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(testing::smooth_star(rng, 0.5, peak(rng)));
  return out;
}

Eigen::MatrixXd ntd_of(const Shape& s) { return ntd_from_dtn(dtn_numeric(inclusion(s))); }

bool packing_separation() {
  Stopwatch sw;
  bool ok = true;
  double worst_gap = 1e300;
  for (int m : {1, 2}) {
    PackingClass c;
    c.m = m;
    c.beta = 1.0;
    const double eps0 = packing_epsilon0(c);
    for (double eps : {0.1, 0.05, 0.02}) {
      if (!(eps < eps0)) {
        ok = false;
        continue;
      }
      const PackingFamily fam = build_packing(c, eps);
      ok &= fam.certified_log_cardinality() >= packing_lower_bound(eps, m, c.beta, 2, eps0);
      std::mt19937_64 rng(1000 * m + static_cast<std::uint64_t>(eps * 1000));
      for (int pair = 0; pair < 200; ++pair) {
        Pattern a = fam.random_pattern(rng), b = fam.random_pattern(rng);
        while (b == a) b = fam.random_pattern(rng);
        const HausdorffResult h = hausdorff(fam.shape(a), fam.shape(b));
        worst_gap = std::min(worst_gap, h.distance - (eps - h.resolution));
        ok &= h.distance >= eps - h.resolution;
      }
    }
  }
  const double t = sw.seconds();
  ok &= t < 10.0;
  return report("1", ok, fmt("packing separation over 1200 pairs, min slack %.3g, certified count >= bound; %.2f s (< 10)",
                             worst_gap, t));
}

bool net_covering() {
  Stopwatch sw;
  const ClassConstants c{1.0, 0.5, 1};
  std::mt19937_64 rng(2);
  bool ok = true;
  std::string detail;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const NetParams np = make_net_params(delta, c);
    const std::size_t K = truncation_degree(np.n_tilde) + 1;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const OperatorMatrix g = random_class_member(sequential_degrees(K), c, rng);
      worst = std::max(worst, operator_norm(Eigen::MatrixXcd(g.b - quantize(g, np).b)) / delta);
    }
    ok &= worst <= 0.5;
    detail += fmt("delta %.0e: max err/delta %.3g; ", delta, worst);
  }
  const double t = sw.seconds();
  ok &= t < 30.0;
  return report("2a", ok, detail + fmt("%.2f s (< 30)", t));
}

bool net_slope() {
  const ClassConstants c{1.0, 0.5, 1};
  std::vector<double> x, y;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    x.push_back(std::log(-std::log(delta)));
    y.push_back(std::log(net_size_log_bound(delta, c)));
  }
  const double mx = (x[0] + x[1] + x[2]) / 3.0, my = (y[0] + y[1] + y[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return report("2b", slope >= 2.8 && slope <= 3.2,
                fmt("net log-size slope vs log(-log delta) over delta 1e-1..1e-3 = %.3f (target [2.8, 3.2])", slope));
}

bool norm_comparison() {
  const double exact = std::sqrt(std::numbers::pi * std::numbers::pi / 6.0 - 1.0);
  const double c4_err = std::abs(c4_constant(1.0) - exact);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 60);
  int holds = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const OperatorMatrix g = random_class_member(sequential_degrees(static_cast<std::size_t>(size(rng))),
                                                 ClassConstants{1.0, 0.5, 1}, rng, i % 2 == 1);
    const NormComparison r = op_norm_bound_check(g);
    holds += r.holds;
    worst = std::max(worst, r.op_norm / r.bound);
  }
  return report("3", holds == 1000 && c4_err <= 1e-6,
                fmt("op <= C4 Y on %d/1000 members (max ratio %.3g); |C4 - (pi^2/6-1)^(1/2)| = %.2e", holds, worst,
                    c4_err));
}

bool conductivity_oracle() {
  InclusionProblem p = inclusion(testing::disk(0.5, 0.5));
  p.n_max = 8;
  const Eigen::MatrixXd d = dtn_numeric(p);
  const auto exact = dtn_concentric(0.5, 2.0, 8);
  double rel = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index k = 0; k < d.cols(); ++k) {
      const double e = i == k ? exact[static_cast<std::size_t>((i + 1) / 2)] : 0.0;
      rel = std::max(rel, std::abs(d(i, k) - e) / std::max(1.0, std::abs(e)));
    }
  double sym = 0.0;
  for (const Shape& s : random_inclusions(20, 4)) {
    const Eigen::MatrixXd m = dtn_difference(inclusion(s));
    sym = std::max(sym, (m - m.transpose()).norm() / m.norm());
  }
  return report("4", rel <= 1e-4 && sym <= 1e-6,
                fmt("concentric rho 0.5 a 2 n<=8 relative error %.2e (<= 1e-4); symmetry defect over 20 shapes %.2e (<= 1e-6)",
                    rel, sym));
}

bool decay() {
  bool ok = true;
  std::string detail;
  for (double rho : {0.5, 0.7}) {
    const OperatorMatrix g = weight_dtn_difference(dtn_difference(inclusion(testing::disk(rho, rho))), 32);
    const DecayFit f = fit_shell_decay(g);
    const double target = 2.0 * std::log(1.0 / rho);
    ok &= std::abs(f.alpha - target) <= 0.1 * target;
    detail += fmt("rho %.1f alpha %.4f vs %.4f; ", rho, f.alpha, target);
  }
  int positive = 0, clean = 0;
  double lo = 1e300;
  for (const Shape& s : random_inclusions(20, 5)) {
    const DecayFit f = fit_shell_decay(weight_dtn_difference(dtn_difference(inclusion(s)), 32));
    positive += f.alpha > 0.0;
    clean += f.violations == 0;
    lo = std::min(lo, f.alpha);
  }
  ok &= positive == 20 && clean == 20;
  return report("5", ok, detail + fmt("random shapes: alpha>0 %d/20 (min %.3f), no envelope violations %d/20", positive, lo, clean));
}

bool ntd_identities() {
  const auto shapes = random_inclusions(100, 6);
  std::vector<Eigen::MatrixXd> dtn, ntd;
  double c5 = 0.0;
  for (const Shape& s : shapes) {
    dtn.push_back(dtn_numeric(inclusion(s)));
    ntd.push_back(ntd_from_dtn(dtn.back()));
    c5 = std::max(c5, ntd_norm(ntd.back()));
  }
  int holds = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t j = 50 + i;
    const Eigen::Index n = dtn[i].rows() - 1;
    const Eigen::MatrixXd dl = dtn[j].bottomRightCorner(n, n) - dtn[i].bottomRightCorner(n, n);
    const double lhs = ntd_norm(ntd[i] - ntd[j]);
    const double rhs = ntd_norm(ntd[j]) * dtn_tilde_norm(dl) * ntd_norm(ntd[i]);
    holds += lhs <= rhs * (1.0 + 1e-12);
    worst = std::max(worst, lhs / rhs);
  }
  // For a >= 1 the inclusion only lowers the NtD form, which caps the natural norm at sqrt(2).
  const bool uniform = c5 <= std::sqrt(2.0) * (1.0 + 1e-9);
  return report("6", holds == 50 && uniform,
                fmt("interpolation inequality on %d/50 pairs (max ratio %.3g); fitted C5 = %.4f over 100 shapes (a priori <= %.4f)",
                    holds, worst, c5, std::sqrt(2.0)));
}

bool electrodes() {
  const ElectrodeConfig cfg = ElectrodeConfig::equal_arcs(8);
  const auto shapes = random_inclusions(20, 7);
  std::vector<Eigen::MatrixXd> N, R;
  double asym = 0.0, row = 0.0, raw = 0.0;
  for (const Shape& s : shapes) {
    N.push_back(ntd_of(s));
    R.push_back(resistance_matrix(N.back(), cfg).R);
    asym = std::max(asym, (R.back() - R.back().transpose()).cwiseAbs().maxCoeff());
    // The constant pattern projected onto mean-zero currents, then applied.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(8);
    const Eigen::VectorXd projected = ones - Eigen::VectorXd::Constant(8, ones.mean());
    row = std::max(row, (R.back() * projected).cwiseAbs().maxCoeff());
    raw = std::max(raw, (R.back() * ones).cwiseAbs().maxCoeff());
  }
  std::vector<double> ratios;
  for (std::size_t i = 0; i < shapes.size(); ++i)
    for (std::size_t j = i + 1; j < shapes.size(); ++j)
      ratios.push_back(operator_norm(Eigen::MatrixXd(R[i] - R[j])) / ntd_norm(N[i] - N[j]));
  double c_hat = 0.0, c_train = 0.0, c_test = 0.0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    c_hat = std::max(c_hat, ratios[k]);
    double& half = k % 2 ? c_test : c_train;
    half = std::max(half, ratios[k]);
  }
  const bool ok = asym <= 1e-10 && row == 0.0 && std::isfinite(c_hat) && c_hat > 0.0;
  return report("7", ok,
                fmt("max |R - R^T| %.2e (<= 1e-10); max |R P 1| %.1e (== 0; unprojected row sums %.1e); fitted C = %.4f over %zu "
                    "pairs (half-split %.4f / %.4f)",
                    asym, row, raw, c_hat, ratios.size(), c_train, c_test));
}

bool scattering() {
  double disk_err = 0.0;
  for (double R : {1.0, 1.3}) {
    ObstacleProblem p{testing::disk(R, 1.0)};
    p.a_list = {1.0, 4.0};
    p.n_max = 16;
    for (const FarFieldMatrix& f : farfield_numeric(p))
      disk_err = std::max(disk_err, (f.b - farfield_disk(R, f.a, p.n_max).b).cwiseAbs().maxCoeff());
  }
  std::mt19937_64 rng(8);
  double recip = 0.0;
  for (int i = 0; i < 10; ++i) {
    ObstacleProblem p{testing::smooth_star(rng, 1.0, 0.5)};
    p.n_max = 16;
    for (const FarFieldMatrix& f : farfield_numeric(p)) recip = std::max(recip, f.reciprocity_residual);
  }
  double wr = 0.0;
  for (int s = 0; s <= 200; ++s) {
    const double x = kBesselMinArg + (kBesselMaxArg - kBesselMinArg) * s / 200.0;
    const auto t = bessel_table(kBesselMaxOrder, x);
    for (int n = 0; n < kBesselMaxOrder; ++n) {
      const double w = t.j[n + 1] * t.y[n] - t.j[n] * t.y[n + 1];
      wr = std::max(wr, std::abs(w * std::numbers::pi * x / 2.0 - 1.0));
    }
  }
  // A single C7 covers n = 2..60; the high orders sit below the low ones, so it does not grow with n.
  const HankelBoundFit low = hankel_bound_check(2, 30, 2.0, 8.0, 121);
  const HankelBoundFit high = hankel_bound_check(31, 60, 2.0, 8.0, 121);
  const double c7 = std::max(low.c7, high.c7);
  const bool hankel = std::isfinite(c7) && high.c7 <= low.c7;
  const bool ok = disk_err <= 1e-6 && recip <= 1e-8 && wr <= 1e-9 && hankel;
  return report("8", ok,
                fmt("disk far field err %.2e (<= 1e-6); reciprocity %.2e (<= 1e-8); Wronskian rel %.2e (<= 1e-9); "
                    "C7 = %.4f (n 31..60 sup %.4f)",
                    disk_err, recip, wr, c7, high.c7));
}

std::string norms_text(const InstabilityReport& rep) {
  std::string s;
  for (const WitnessRecord& r : rep.records) s += fmt("%s%.4g", s.empty() ? "" : ", ", r.norm);
  return s;
}

bool strictly_decreasing(const InstabilityReport& rep) {
  for (std::size_t i = 1; i < rep.records.size(); ++i)
    if (!(rep.records[i].norm < rep.records[i - 1].norm)) return false;
  return true;
}

const InstabilityReport& dtn_report() {
  static const InstabilityReport rep = run_instability(ProblemKind::dtn, {0.12, 0.08, 0.05, 0.03}, 200, 1);
  return rep;
}

const InstabilityReport& farfield_report() {
  static const InstabilityReport rep = [] {
    EngineConfig cfg = default_engine_config(ProblemKind::farfield);
    cfg.budget = 50;
    return run_instability(cfg);
  }();
  return rep;
}

bool witness_criteria(const std::string& id, const char* name, const InstabilityReport& rep, double seconds) {
  const bool dec = strictly_decreasing(rep);
  const bool ok = dec && rep.fit.q > 0.0 && rep.fit.r2 >= 0.9;
  return report(id, ok,
                fmt("%s: norms [%s] %s; q = %.4f r2 = %.4f (power-law r2 %.4f); theoretical 1/(4m) = %.3f; "
                    "empirical minimum over budget %zu; %.1f s",
                    name, norms_text(rep).c_str(), dec ? "strictly decreasing" : "not strictly decreasing", rep.fit.q,
                    rep.fit.r2, rep.fit.power_r2, rep.theoretical_exponent, rep.config.budget, seconds));
}

bool counting_criteria(const std::string& id, const char* name, const InstabilityReport& rep) {
  bool ok = true;
  std::string margins;
  for (const WitnessRecord& r : rep.records) {
    ok &= r.counting_exceeds;
    margins += fmt("%s%.4g", margins.empty() ? "" : ", ", r.counting_margin);
  }
  return report(id, ok,
                fmt("%s counting margins [%s] (need > 0 at every grid eps); fitted C2 = %.4g alpha2 = %.4g; eps1 = %.3g",
                    name, margins.c_str(), rep.constants.C2, rep.constants.alpha2, rep.eps1));
}

bool instability_dtn() {
  Stopwatch sw;
  const InstabilityReport& rep = dtn_report();
  return witness_criteria("9a", "dtn", rep, sw.seconds());
}

bool counting_dtn() { return counting_criteria("9b", "dtn", dtn_report()); }

bool instability_farfield() {
  Stopwatch sw;
  const InstabilityReport& rep = farfield_report();
  return witness_criteria("9c", "farfield", rep, sw.seconds());
}

bool counting_farfield() { return counting_criteria("9d", "farfield", farfield_report()); }

bool determinism() {
  EngineConfig cfg = default_engine_config(ProblemKind::dtn);
  cfg.eps_list = {0.12, 0.08, 0.05};
  cfg.budget = 12;
  cfg.n_max = 16;
  cfg.quad_nodes = 256;
  cfg.seed = 77;
  const InstabilityReport a = run_instability(cfg);
  const InstabilityReport b = run_instability(cfg);
  const bool same = report_csv(a) == report_csv(b) && report_summary_csv(a) == report_summary_csv(b) &&
                    report_plot_data(a) == report_plot_data(b);
  return report("10", same, "two runs with identical config and seed give byte-identical CSV outputs");
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<bool()>> checks = {
      {"1", packing_separation}, {"2a", net_covering},      {"2b", net_slope},    {"3", norm_comparison},
      {"4", conductivity_oracle}, {"5", decay},              {"6", ntd_identities}, {"7", electrodes},
      {"8", scattering},          {"9a", instability_dtn},   {"9b", counting_dtn}, {"9c", instability_farfield},
      {"9d", counting_farfield},  {"10", determinism}};
  const std::vector<std::string> order{"1", "2a", "2b", "3", "4", "5", "6", "7", "8", "9a", "9b", "9c", "9d", "10"};
  const std::string which = argc > 1 ? argv[1] : "all";
  bool ok = true;
  try {
    if (which == "all") {
      for (const std::string& id : order) ok &= checks.at(id)();
    } else if (auto it = checks.find(which); it != checks.end()) {
      ok = it->second();
    } else {
      std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
      return 2;
    }
  } catch (const std::exception& e) {
    report(which, false, std::string("threw: ") + e.what());
    return 1;
  }
  return ok ? 0 : 1;
}
