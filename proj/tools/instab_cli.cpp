// Command-line front end. Every subcommand reads the optional --config file,
// applies its own flags on top, echoes the effective config and writes CSV
// artifacts to --out (stdout when --out is not given).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "instab/conductivity.hpp"
#include "instab/config.hpp"
#include "instab/csv.hpp"
#include "instab/engine.hpp"
#include "instab/error.hpp"
#include "instab/opnet.hpp"
#include "instab/packing.hpp"
#include "instab/scattering.hpp"
#include "instab/shapes.hpp"
#include "instab/spectral.hpp"

namespace fs = std::filesystem;
using namespace instab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  void emit(const std::string& name, const std::string& text) const {
    if (dir_.empty()) {
      std::cout << "# " << name << '\n' << text;
    } else {
      write_text_file((fs::path(dir_) / name).string(), text);
    }
  }

 private:
  std::string dir_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Shape default_disk(double radius, double base_radius, std::size_t grid) {
  const double cap = std::max(radius - base_radius, 0.0) + 0.25;
  RadialProfile p(base_radius, {0.0, 0.0}, std::vector<double>(grid, radius - base_radius), ProfileClass{1, 1.0, cap});
  return Shape(ShapeKind::radial_subgraph, std::move(p));
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  CsvWriter w({"row", "col", "value"});
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.row() << static_cast<long>(r) << static_cast<long>(c) << m(r, c);
  return w.str();
}

void decay_row(CsvWriter& w, const std::string& what, const DecayFit& f) {
  w.row() << what << f.alpha << f.C << f.r2 << f.points_used << f.below_floor << f.violations;
}

const std::vector<std::string> kDecayHeader{"matrix", "alpha", "C", "r2", "points", "below_floor", "violations"};

void run_pack(const ExperimentConfig& cfg, const Outputs& out) {
  PackingClass cls;
  cls.kind = cfg.kind;
  cls.base_radius = cfg.base_radius > 0.0 ? cfg.base_radius : (is_radial(cfg.kind) ? 0.5 : 1.0);
  cls.eps_cap = cfg.eps_cap > 0.0 ? cfg.eps_cap : 0.25;
  cls.m = cfg.m;
  cls.beta = cfg.beta;
  cls.grid_size = cfg.grid_size;
  const PackingFamily fam = build_packing(cls, cfg.eps);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Pattern> patterns;
  std::vector<Shape> shapes;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    patterns.push_back(fam.random_pattern(rng));
    shapes.push_back(fam.shape(patterns.back()));
  }
  const Shape base = fam.base_shape();
  // Each sample is compared with its next few successors (cyclically).
  constexpr std::size_t kPartners = 4;
  CsvWriter w({"pattern_id", "pattern", "hausdorff_to_base", "min_pairwise_sampled"});
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kPartners && k < shapes.size(); ++k) {
      const std::size_t j = (i + k) % shapes.size();
      if (patterns[i] == patterns[j]) continue;
      best = std::min(best, hausdorff_distance(shapes[i], shapes[j]));
    }
    std::string bits(patterns[i].size(), '0');
    for (std::size_t c = 0; c < bits.size(); ++c)
      if (patterns[i][c]) bits[c] = '1';
    w.row() << static_cast<unsigned long>(i) << bits << hausdorff_distance(shapes[i], base) << best;
  }
  out.emit("pack.csv", w.str());
  CsvWriter s({"eps", "eps0", "cells", "half_width", "cell_pitch", "certified_log_cardinality", "packing_log_bound"});
  const double eps0 = packing_epsilon0(cls);
  const int N = 2;
  s.row() << cfg.eps << eps0 << static_cast<unsigned long>(fam.cell_count()) << fam.bump_half_width()
          << fam.cell_pitch() << fam.certified_log_cardinality() << packing_lower_bound(cfg.eps, cls.m, cls.beta, N, eps0);
  out.emit("pack_summary.csv", s.str());
}

void run_basis(const ExperimentConfig& cfg, const Outputs& out) {
  const BasisSpec spec{parse_domain_kind(cfg.domain), Weighting::plain, cfg.n_max};
  const auto basis = enumerate_basis(spec);
  CsvWriter table({"index", "degree", "multiplicity", "angular", "dirichlet_weight", "neumann_weight"});
  CsvWriter curve({"degree", "interior_decay"});
  for (const BasisElement& e : basis) {
    table.row() << static_cast<unsigned long>(e.index) << e.degree.value() << e.multiplicity
                << (e.angular == Angular::cosine ? "cos" : "sin") << basis_weight(e, Weighting::dirichlet_trace)
                << basis_weight(e, Weighting::neumann_trace);
    curve.row() << e.degree.value() << interior_decay(spec.domain, e, cfg.r0);
  }
  out.emit("basis.csv", table.str());
  out.emit("basis_decay.csv", curve.str());
  CsvWriter fit({"domain", "r0", "decay_constant"});
  fit.row() << cfg.domain << cfg.r0 << fit_decay_constant(spec, cfg.r0);
  out.emit("basis_fit.csv", fit.str());
}

void run_net(const ExperimentConfig& cfg, const Outputs& out) {
  const ClassConstants c{cfg.C2, cfg.alpha2, cfg.p};
  const NetSize real = net_size(cfg.delta, c, false);
  const NetSize cplx = net_size(cfg.delta, c, true);
  CsvWriter w({"delta", "n_tilde", "delta_prime", "psi_count", "kept_entries", "log_bound", "log_bound_complex",
               "c3", "c5", "c4"});
  w.row() << cfg.delta << real.n_tilde << real.delta_prime << real.psi_count << real.kept_entries << real.log_bound
          << cplx.log_bound << real.c3 << real.c5 << c4_constant(c.C2);
  out.emit("net.csv", w.str());
}

// An unreadable shape file is a configuration problem, not an internal failure.
Shape load_shape(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("shape_file: cannot read '" + path + "'", 0);
  return read_shape_file(path);
}

void run_forward(const ExperimentConfig& cfg, const Outputs& out) {
  const Shape shape = cfg.shape_file.empty() ? default_disk(cfg.rho, 0.5, cfg.grid_size) : load_shape(cfg.shape_file);
  const InclusionProblem prob{shape, cfg.a, cfg.n_max, cfg.quad_nodes, 0};
  const Eigen::MatrixXd diff = dtn_difference(prob);
  const Eigen::MatrixXd dtn = dtn_homogeneous(cfg.n_max) + diff;
  const Eigen::MatrixXd ntd = ntd_from_dtn(dtn);
  out.emit("dtn.csv", matrix_csv(dtn));
  out.emit("ntd.csv", matrix_csv(ntd));
  const auto ecfg = ElectrodeConfig::equal_arcs(cfg.electrodes, cfg.electrode_coverage, cfg.impedance);
  const ResistanceResult rr = resistance_matrix(ntd, ecfg);
  out.emit("resistance.csv", matrix_csv(rr.R));
  CsvWriter fits(kDecayHeader);
  decay_row(fits, "dtn_difference_weighted", fit_shell_decay(weight_dtn_difference(diff, cfg.n_max)));
  out.emit("forward_decay.csv", fits.str());
  CsvWriter summary({"a", "n_max", "quad_nodes", "symmetry_defect", "ntd_norm", "electrode_condition"});
  summary.row() << cfg.a << cfg.n_max << cfg.quad_nodes << (dtn - dtn.transpose()).cwiseAbs().maxCoeff()
                << ntd_norm(ntd) << rr.condition;
  out.emit("forward_summary.csv", summary.str());
}

void run_scatter(const ExperimentConfig& cfg, const Outputs& out) {
  const Shape shape = cfg.shape_file.empty() ? default_disk(1.0, 1.0, cfg.grid_size) : load_shape(cfg.shape_file);
  const ObstacleProblem prob{shape, cfg.a_list, cfg.n_max, cfg.scatter_nodes, cfg.directions, 0};
  const auto mats = farfield_numeric(prob);
  CsvWriter entries({"a", "row", "col", "abs", "re", "im"});
  CsvWriter summary({"a", "reciprocity_residual", "l2_norm"});
  CsvWriter fits(kDecayHeader);
  for (const FarFieldMatrix& f : mats) {
    for (Eigen::Index r = 0; r < f.b.rows(); ++r)
      for (Eigen::Index c = 0; c < f.b.cols(); ++c)
        entries.row() << f.a << static_cast<long>(r) << static_cast<long>(c) << std::abs(f.b(r, c)) << f.b(r, c).real()
                      << f.b(r, c).imag();
    summary.row() << f.a << f.reciprocity_residual << farfield_l2_norm(f);
    decay_row(fits, "farfield_a=" + format_double(f.a), fit_shell_decay(make_operator(f.b, f.degrees, ClassConstants{})));
  }
  out.emit("farfield.csv", entries.str());
  out.emit("scatter_summary.csv", summary.str());
  out.emit("scatter_decay.csv", fits.str());
}

void run_instability_cmd(const ExperimentConfig& cfg, const Outputs& out) {
  const InstabilityReport rep = run_instability(engine_config_from(cfg));
  out.emit("instability.csv", report_csv(rep));
  out.emit("instability_summary.csv", report_summary_csv(rep));
  out.emit("instability_plot.csv", report_plot_data(rep));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential instability experiments for inverse boundary problems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;  // (config key, value) in command-line order
  std::vector<std::pair<std::string, CLI::Option*>> bound;
  std::vector<std::string> storage;
  storage.reserve(64);

  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    storage.emplace_back();
    bound.emplace_back(key, sub->add_option(name, storage.back(), help));
  };

  app.add_option("--config", config_path, "key=value config file");
  flag(&app, "--seed", "seed", "random seed");
  flag(&app, "--out", "out", "output directory (stdout when omitted)");
  flag(&app, "--threads", "threads", "worker threads (0 = all cores)");

  CLI::App* pack = app.add_subcommand("pack", "sample an eps-discrete bump family");
  flag(pack, "--kind", "kind", "shape kind");
  flag(pack, "--m", "m", "smoothness order");
  flag(pack, "--beta", "beta", "C^m bound");
  flag(pack, "--eps", "eps", "separation");
  flag(pack, "--samples", "samples", "patterns to sample");

  CLI::App* basis = app.add_subcommand("basis", "eigenfunction degree table and interior decay");
  flag(basis, "--domain", "domain", "full_circle | half_disk_ep1 | half_disk_ep2 | slit_disk | general_n");
  flag(basis, "--nmax", "n_max", "largest degree");
  flag(basis, "--r0", "r0", "interior radius");

  CLI::App* net = app.add_subcommand("net", "quantization net size");
  flag(net, "--delta", "delta", "net radius");
  flag(net, "--C2", "C2", "class constant C2");
  flag(net, "--alpha2", "alpha2", "class decay rate");
  flag(net, "--p", "p", "growth exponent");

  CLI::App* forward = app.add_subcommand("forward", "DtN, NtD and electrode matrices of an inclusion");
  flag(forward, "--shape-file", "shape_file", "shape file (default: disk of radius rho)");
  flag(forward, "--a", "a", "conductivity contrast");
  flag(forward, "--nmax", "n_max", "largest Fourier degree");
  flag(forward, "--electrodes", "electrodes", "electrode count");

  CLI::App* scatter = app.add_subcommand("scatter", "far-field coefficients of a sound-soft obstacle");
  flag(scatter, "--shape-file", "shape_file", "shape file (default: unit disk)");
  flag(scatter, "--a-list", "a_list", "comma-separated wave parameters");
  flag(scatter, "--nmax", "n_max", "largest Fourier degree");
  flag(scatter, "--quad", "scatter_nodes", "boundary quadrature nodes");

  CLI::App* inst = app.add_subcommand("instability", "witness pairs over an eps grid");
  flag(inst, "--problem", "problem", "dtn | ntd | electrodes | farfield");
  flag(inst, "--eps-list", "eps_list", "comma-separated eps grid");
  flag(inst, "--budget", "budget", "patterns sampled per eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : parse_config(read_file(config_path));
    for (std::size_t i = 0; i < bound.size(); ++i)
      if (bound[i].second->count() > 0) set_config_value(cfg, bound[i].first, storage[i]);
    validate_config(cfg);
    const Outputs out(cfg.out);
    // The output location does not affect results, so it stays out of the record.
    ExperimentConfig recorded = cfg;
    recorded.out.clear();
    out.emit("config.txt", emit_config(recorded));
    if (pack->parsed()) run_pack(cfg, out);
    if (basis->parsed()) run_basis(cfg, out);
    if (net->parsed()) run_net(cfg, out);
    if (forward->parsed()) run_forward(cfg, out);
    if (scatter->parsed()) run_scatter(cfg, out);
    if (inst->parsed()) run_instability_cmd(cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
