#include "instab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "instab/conductivity.hpp"
#include "instab/csv.hpp"
#include "instab/error.hpp"
#include "instab/scattering.hpp"
#include "instab/simd/kernels.hpp"

namespace instab {

namespace {

constexpr int kP = 1;  // growth exponent of the circle basis
constexpr int kSpaceDim = 2;

// Forward data of one shape, in the space where witness distances are taken.
struct Evaluated {
  Eigen::MatrixXd real;                 // conductivity problems
  std::vector<Eigen::MatrixXcd> waves;  // farfield, one per wave parameter
  std::vector<std::vector<double>> flat;
  std::vector<double> shells;  // shell maxima of the class matrix F(D) - F0
};

std::vector<double> flatten(const Eigen::MatrixXd& m) { return {m.data(), m.data() + m.size()}; }

std::vector<double> flatten(const Eigen::MatrixXcd& m) {
  std::vector<double> out(2 * static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out[2 * static_cast<std::size_t>(i)] = m.data()[i].real();
    out[2 * static_cast<std::size_t>(i) + 1] = m.data()[i].imag();
  }
  return out;
}

Evaluated evaluate(const EngineConfig& cfg, const Shape& shape) {
  Evaluated ev;
  if (cfg.problem == ProblemKind::farfield) {
    ObstacleProblem prob{shape, cfg.a_list, cfg.n_max, cfg.scatter_nodes, cfg.directions, 0};
    for (FarFieldMatrix& f : farfield_numeric(prob)) {
      const OperatorMatrix g = make_operator(f.b, f.degrees, ClassConstants{});
      const auto s = shell_maxima(g);
      if (ev.shells.size() < s.size()) ev.shells.resize(s.size(), 0.0);
      for (std::size_t i = 0; i < s.size(); ++i) ev.shells[i] = std::max(ev.shells[i], s[i]);
      ev.flat.push_back(flatten(f.b));
      ev.waves.push_back(std::move(f.b));
    }
    return ev;
  }
  const InclusionProblem prob{shape, cfg.a, cfg.n_max, cfg.quad_nodes, 0};
  const Eigen::MatrixXd diff = dtn_difference(prob);
  const OperatorMatrix g = weight_dtn_difference(diff, cfg.n_max);
  ev.shells = shell_maxima(g);
  switch (cfg.problem) {
    case ProblemKind::dtn:
      ev.real = g.b.real();
      break;
    case ProblemKind::ntd:
      ev.real = ntd_natural(ntd_from_dtn(dtn_homogeneous(cfg.n_max) + diff));
      break;
    case ProblemKind::electrodes: {
      const auto ecfg = ElectrodeConfig::equal_arcs(cfg.electrodes, cfg.electrode_coverage, cfg.impedance);
      ev.real = resistance_matrix(ntd_from_dtn(dtn_homogeneous(cfg.n_max) + diff), ecfg).R;
      break;
    }
    case ProblemKind::farfield:
      break;
  }
  ev.flat.push_back(flatten(ev.real));
  return ev;
}

std::vector<Evaluated> evaluate_all(const EngineConfig& cfg, const std::vector<Shape>& shapes) {
  std::vector<Evaluated> out(shapes.size());
  unsigned workers = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, shapes.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < shapes.size(); i = next++) {
      try {
        out[i] = evaluate(cfg, shapes[i]);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = shapes.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Up to `budget` distinct patterns: all of them when 2^cells fits, otherwise
// distinct random draws in draw order.
std::vector<Pattern> sample_patterns(const PackingFamily& fam, std::size_t budget, std::mt19937_64& rng) {
  const std::size_t cells = fam.cell_count();
  std::vector<Pattern> out;
  if (cells < 63 && (std::uint64_t{1} << cells) <= budget) {
    const std::uint64_t total = std::uint64_t{1} << cells;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Pattern p(cells);
      for (std::size_t c = 0; c < cells; ++c) p[c] = static_cast<std::uint8_t>((idx >> c) & 1u);
      out.push_back(std::move(p));
    }
    return out;
  }
  std::set<Pattern> seen;
  for (std::size_t attempt = 0; out.size() < budget && attempt < 64 * budget; ++attempt) {
    Pattern p = fam.random_pattern(rng);
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

struct Candidate {
  double lower;
  std::size_t i, j;
};

struct Witness {
  std::size_t i = 0, j = 0;
  double norm = std::numeric_limits<double>::infinity();
  HausdorffResult h;
};

Witness closest_pair(const EngineConfig& cfg, const std::vector<Shape>& shapes, const std::vector<Evaluated>& ev,
                     double eps) {
  const bool far = cfg.problem == ProblemKind::farfield;
  std::vector<Candidate> cand;
  cand.reserve(ev.size() * (ev.size() - 1) / 2);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      double d = 0.0;
      for (std::size_t b = 0; b < ev[i].flat.size(); ++b)
        d = std::max(d, std::sqrt(simd::squared_distance(ev[i].flat[b], ev[j].flat[b])));
      // The spectral norm is at least the Frobenius norm over sqrt(rank).
      if (!far) d /= std::sqrt(static_cast<double>(ev[i].real.rows()));
      cand.push_back({d, i, j});
    }
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    if (x.lower != y.lower) return x.lower < y.lower;
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });
  Witness best;
  for (const Candidate& c : cand) {
    if (c.lower >= best.norm) break;
    double norm = c.lower;
    if (!far) {
      const Eigen::MatrixXd d = ev[c.i].real - ev[c.j].real;
      // Column norms bound the spectral norm from below as well.
      if (d.colwise().norm().maxCoeff() >= best.norm) continue;
      norm = operator_norm(d);
    }
    if (!(norm < best.norm)) continue;
    const HausdorffResult h = hausdorff(shapes[c.i], shapes[c.j]);
    if (h.distance < eps - h.resolution) continue;
    best = Witness{c.i, c.j, norm, h};
  }
  if (!std::isfinite(best.norm)) throw Error("instability: no admissible witness pair among the sampled shapes");
  return best;
}

ClassConstants fit_constants(const std::vector<double>& shells, int n_max, DecayFit& fit) {
  std::vector<double> n, v;
  for (std::size_t s = 1; s < shells.size(); ++s) {
    n.push_back(static_cast<double>(s));
    v.push_back(shells[s]);
  }
  fit = fit_exponential_decay(n, v, 1e-12, 0.5 * n_max);
  ClassConstants c;
  c.p = kP;
  // The circle basis has 2n + 1 elements of degree <= n, so C2 >= 2.
  c.C2 = std::max(2.0, fit.C);
  if (fit.alpha > 0.0) c.alpha2 = fit.alpha;
  return c;
}

std::string bits(const Pattern& p) {
  std::string s(p.size(), '0');
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i]) s[i] = '1';
  return s;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit regress(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (sxx > 0.0) f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 0.0;
  return f;
}

}  // namespace

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::dtn: return "dtn";
    case ProblemKind::ntd: return "ntd";
    case ProblemKind::electrodes: return "electrodes";
    case ProblemKind::farfield: return "farfield";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view s) {
  for (ProblemKind k : {ProblemKind::dtn, ProblemKind::ntd, ProblemKind::electrodes, ProblemKind::farfield})
    if (s == to_string(k)) return k;
  throw DomainError("unknown problem '" + std::string(s) + "'");
}

EngineConfig default_engine_config(ProblemKind problem) {
  EngineConfig cfg;
  cfg.problem = problem;
  if (problem == ProblemKind::farfield) {
    cfg.packing.base_radius = 1.0;
    cfg.packing.eps_cap = 0.5;
  }
  return cfg;
}

EngineConfig engine_config_from(const ExperimentConfig& x) {
  EngineConfig cfg = default_engine_config(parse_problem_kind(x.problem));
  cfg.packing.kind = x.kind;
  if (x.base_radius > 0.0) cfg.packing.base_radius = x.base_radius;
  if (x.eps_cap > 0.0) cfg.packing.eps_cap = x.eps_cap;
  cfg.packing.m = x.m;
  cfg.packing.beta = x.beta;
  cfg.packing.grid_size = x.grid_size;
  cfg.eps_list = x.eps_list;
  cfg.budget = x.budget;
  cfg.seed = x.seed;
  cfg.threads = static_cast<unsigned>(x.threads);
  cfg.a = x.a;
  cfg.n_max = x.n_max;
  cfg.quad_nodes = x.quad_nodes;
  cfg.electrodes = x.electrodes;
  cfg.electrode_coverage = x.electrode_coverage;
  cfg.impedance = x.impedance;
  cfg.a_list = x.a_list;
  cfg.scatter_nodes = x.scatter_nodes;
  cfg.directions = x.directions;
  return cfg;
}

double counting_threshold(const PackingClass& cls, double eps0, const ClassConstants& c, bool complex) {
  const double alpha1 = static_cast<double>(kSpaceDim - 1) / cls.m;
  // delta(eps) = exp(-eps^-e), and the net step delta' is smaller still; keep
  // clear of underflow.
  const double e = alpha1 / (2.0 * c.p + 2.0);
  const double limit = 0.9 * -std::log(std::numeric_limits<double>::min());
  const double lo = std::max(1e-30, std::pow(limit, -1.0 / e) * 1.0001);
  const double hi = eps0 * (1.0 - 1e-9);
  if (!(lo < hi)) return 0.0;
  constexpr int kGrid = 400;
  double eps1 = 0.0;
  for (int g = 0; g < kGrid; ++g) {  // upward from the smallest eps
    const double eps = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * g / (kGrid - 1));
    const double packing = packing_lower_bound(eps, cls.m, cls.beta, kSpaceDim, eps0);
    const double net = net_size(delta_of_epsilon(eps, alpha1, c.p), c, complex).log_bound;
    if (!counting_check(packing, net).exceeds) break;
    eps1 = eps;
  }
  return eps1;
}

InstabilityReport run_instability(const EngineConfig& cfg) {
  if (cfg.budget < 2) throw DomainError("instability: budget must be >= 2");
  if (cfg.eps_list.empty()) throw DomainError("instability: empty eps list");
  if (cfg.packing.kind != ShapeKind::radial_subgraph)
    throw DomainError("instability: forward maps need radial_subgraph shapes");
  InstabilityReport rep;
  rep.config = cfg;
  rep.eps0 = packing_epsilon0(cfg.packing);
  rep.theoretical_exponent = static_cast<double>(kSpaceDim - 1) / (2.0 * cfg.packing.m * kSpaceDim);
  const bool complex = cfg.problem == ProblemKind::farfield;

  std::vector<double> pooled;
  std::vector<Witness> witnesses;
  std::vector<std::pair<PackingFamily, std::vector<Pattern>>> families;
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    const double eps = cfg.eps_list[k];
    PackingFamily fam = build_packing(cfg.packing, eps);
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::vector<Pattern> patterns = sample_patterns(fam, cfg.budget, rng);
    if (patterns.size() < 2) throw DomainError("instability: fewer than two distinct patterns at eps");
    std::vector<Shape> shapes;
    shapes.reserve(patterns.size());
    for (const Pattern& p : patterns) shapes.push_back(fam.shape(p));
    const std::vector<Evaluated> ev = evaluate_all(cfg, shapes);
    for (const Evaluated& e : ev) {
      if (pooled.size() < e.shells.size()) pooled.resize(e.shells.size(), 0.0);
      for (std::size_t s = 0; s < e.shells.size(); ++s) pooled[s] = std::max(pooled[s], e.shells[s]);
    }
    witnesses.push_back(closest_pair(cfg, shapes, ev, eps));
    families.emplace_back(std::move(fam), std::move(patterns));
  }

  rep.constants = fit_constants(pooled, cfg.n_max, rep.decay);
  const double alpha1 = static_cast<double>(kSpaceDim - 1) / cfg.packing.m;
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    const auto& [fam, patterns] = families[k];
    const Witness& w = witnesses[k];
    WitnessRecord r;
    r.eps = cfg.eps_list[k];
    r.cells = fam.cell_count();
    r.patterns = patterns.size();
    r.first = patterns[w.i];
    r.second = patterns[w.j];
    r.hausdorff = w.h.distance;
    r.resolution = w.h.resolution;
    r.norm = w.norm;
    r.delta = delta_of_epsilon(r.eps, alpha1, kP);
    r.certified_log_cardinality = fam.certified_log_cardinality();
    r.packing_log_bound = packing_lower_bound(r.eps, cfg.packing.m, cfg.packing.beta, kSpaceDim, rep.eps0);
    r.net_log_bound = net_size(r.delta, rep.constants, complex).log_bound;
    const CountingResult cr = counting_check(r.packing_log_bound, r.net_log_bound);
    r.counting_margin = cr.margin;
    r.counting_exceeds = cr.exceeds;
    rep.records.push_back(std::move(r));
  }
  rep.eps1 = counting_threshold(cfg.packing, rep.eps0, rep.constants, complex);
  try {
    rep.fit = fit_instability_exponent(rep);
  } catch (const DomainError&) {
    rep.fit = ExponentFit{};  // fewer than four usable points; left empty
  }
  return rep;
}

InstabilityReport run_instability(ProblemKind problem, const std::vector<double>& eps_list, std::size_t budget,
                                  std::uint64_t seed) {
  EngineConfig cfg = default_engine_config(problem);
  cfg.eps_list = eps_list;
  cfg.budget = budget;
  cfg.seed = seed;
  return run_instability(cfg);
}

ExponentFit fit_instability_exponent(const std::vector<double>& eps, const std::vector<double>& norms) {
  if (eps.size() != norms.size()) throw DomainError("exponent fit: size mismatch");
  ExponentFit fit;
  std::vector<double> x, y, px, py;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw DomainError("exponent fit: eps must lie in (0, 1)");
    double v = norms[i];
    if (!(v >= 0.0)) throw DomainError("exponent fit: negative or NaN norm");
    if (v >= 1.0) {
      ++fit.unusable;
      continue;
    }
    if (v < kNormFloor) {
      v = kNormFloor;
      fit.clipped = true;
    }
    x.push_back(std::log(1.0 / eps[i]));
    y.push_back(std::log(-std::log(v)));
    px.push_back(std::log(eps[i]));
    py.push_back(std::log(v));
  }
  if (x.size() < 4) throw DomainError("exponent fit: need at least four usable eps points");
  const LineFit dbl = regress(x, y);
  fit.q = dbl.slope;
  fit.intercept = dbl.intercept;
  fit.r2 = dbl.r2;
  fit.power_r2 = regress(px, py).r2;
  fit.points_used = static_cast<int>(x.size());
  fit.non_exponential = fit.power_r2 > fit.r2;
  return fit;
}

ExponentFit fit_instability_exponent(const InstabilityReport& report) {
  std::vector<double> eps, norms;
  for (const WitnessRecord& r : report.records) {
    eps.push_back(r.eps);
    norms.push_back(r.norm);
  }
  return fit_instability_exponent(eps, norms);
}

std::string report_csv(const InstabilityReport& report) {
  CsvWriter w({"problem", "eps", "cells", "patterns", "hausdorff", "resolution", "norm", "delta",
               "certified_log_cardinality", "packing_log_bound", "net_log_bound", "counting_margin",
               "counting_exceeds", "first", "second"});
  for (const WitnessRecord& r : report.records)
    w.row() << to_string(report.config.problem) << r.eps << static_cast<unsigned long long>(r.cells)
            << static_cast<unsigned long long>(r.patterns) << r.hausdorff << r.resolution << r.norm << r.delta
            << r.certified_log_cardinality << r.packing_log_bound << r.net_log_bound << r.counting_margin
            << (r.counting_exceeds ? 1 : 0) << bits(r.first) << bits(r.second);
  return w.str();
}

std::string report_summary_csv(const InstabilityReport& report) {
  const EngineConfig& c = report.config;
  CsvWriter w({"key", "value"});
  w.row() << "problem" << to_string(c.problem);
  w.row() << "result" << "empirical minimum over budget";
  w.row() << "seed" << static_cast<unsigned long long>(c.seed);
  w.row() << "budget" << static_cast<unsigned long long>(c.budget);
  w.row() << "m" << c.packing.m;
  w.row() << "beta" << c.packing.beta;
  w.row() << "base_radius" << c.packing.base_radius;
  w.row() << "eps_cap" << c.packing.eps_cap;
  w.row() << "eps0" << report.eps0;
  w.row() << "fitted_C2" << report.constants.C2;
  w.row() << "fitted_alpha2" << report.constants.alpha2;
  w.row() << "p" << report.constants.p;
  w.row() << "decay_r2" << report.decay.r2;
  w.row() << "decay_points" << report.decay.points_used;
  w.row() << "eps1" << report.eps1;
  w.row() << "q_hat" << report.fit.q;
  w.row() << "r2" << report.fit.r2;
  w.row() << "power_law_r2" << report.fit.power_r2;
  w.row() << "points_used" << report.fit.points_used;
  w.row() << "unusable_points" << report.fit.unusable;
  w.row() << "clipped" << (report.fit.clipped ? 1 : 0);
  w.row() << "non_exponential" << (report.fit.non_exponential ? 1 : 0);
  w.row() << "theoretical_exponent" << report.theoretical_exponent;
  return w.str();
}

std::string report_plot_data(const InstabilityReport& report) {
  CsvWriter w({"log_inv_eps", "log_neg_log_norm"});
  for (const WitnessRecord& r : report.records) {
    if (!(r.norm < 1.0)) continue;
    const double v = std::max(r.norm, kNormFloor);
    w.row() << std::log(1.0 / r.eps) << std::log(-std::log(v));
  }
  return w.str();
}

}  // namespace instab
