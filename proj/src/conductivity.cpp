#include "instab/conductivity.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "instab/curve.hpp"
#include "instab/error.hpp"

namespace instab {

namespace {

constexpr double kPi = std::numbers::pi;

// Basis function of the full-circle ordering as scale * {cos, sin}(freq theta).
struct Mode {
  int freq;
  bool is_sin;
  double scale;
};

Mode mode(Eigen::Index i) {
  if (i == 0) return {0, false, 1.0 / std::sqrt(2.0 * kPi)};
  const int j = static_cast<int>((i + 1) / 2);
  return {j, i % 2 == 0, 1.0 / std::sqrt(kPi)};
}

// Integral of cos(p t) or sin(p t) over [a, b].
double trig_integral(int p, bool is_sin, double a, double b) {
  if (p == 0) return is_sin ? 0.0 : b - a;
  if (is_sin) return (std::cos(p * a) - std::cos(p * b)) / p;
  return (std::sin(p * b) - std::sin(p * a)) / p;
}

// Integral of mode(i) * mode(k) over [a, b].
double product_integral(Eigen::Index i, Eigen::Index k, double a, double b) {
  const Mode u = mode(i), v = mode(k);
  const int p = u.freq, q = v.freq;
  double val;
  if (!u.is_sin && !v.is_sin) {
    val = 0.5 * (trig_integral(p - q, false, a, b) + trig_integral(p + q, false, a, b));
  } else if (u.is_sin && v.is_sin) {
    val = 0.5 * (trig_integral(p - q, false, a, b) - trig_integral(p + q, false, a, b));
  } else {
    // cos(c t) sin(s t) = [sin((s+c) t) + sin((s-c) t)] / 2
    const int c = u.is_sin ? q : p;
    const int s = u.is_sin ? p : q;
    const int d = s - c;
    const double tail = d >= 0 ? trig_integral(d, true, a, b) : -trig_integral(-d, true, a, b);
    val = 0.5 * (trig_integral(s + c, true, a, b) + tail);
  }
  return u.scale * v.scale * val;
}

void check_problem(const InclusionProblem& prob) {
  if (prob.shape.kind() != ShapeKind::radial_subgraph)
    throw DomainError("inclusion must be a radial_subgraph shape");
  if (!(prob.a > 0.0)) throw DomainError("contrast a must be positive");
  if (prob.a != 1.0 && std::abs(prob.a - 1.0) < kContrastGuard)
    throw DomainError("contrast a too close to 1");
  if (prob.n_max < 1) throw DomainError("n_max must be >= 1");
  if (prob.quad_nodes < 16) throw DomainError("quad_nodes must be >= 16");
  const auto& p = prob.shape.radial();
  const double reach = std::hypot(p.center().x, p.center().y) + p.max_radius();
  if (reach > kInclusionMaxRadius + 1e-12)
    throw DomainError("inclusion must lie inside the disk of radius 4/5");
}

}  // namespace

std::vector<double> dtn_concentric(double rho, double a, int n_max) {
  if (!(rho > 0.0) || rho > kInclusionMaxRadius) throw DomainError("dtn_concentric: rho must lie in (0, 4/5]");
  if (!(a > 0.0)) throw DomainError("dtn_concentric: a must be positive");
  if (n_max < 0) throw DomainError("dtn_concentric: n_max must be >= 0");
  const double mu = (1.0 - a) / (1.0 + a);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double t = mu * std::pow(rho, 2.0 * n);
    out[static_cast<std::size_t>(n)] = n * (1.0 - t) / (1.0 + t);
  }
  return out;
}

std::vector<double> circle_degrees(int n_max) {
  std::vector<double> d(2 * static_cast<std::size_t>(n_max) + 1);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>((i + 1) / 2);
  return d;
}

Eigen::MatrixXd dtn_homogeneous(int n_max) {
  const auto deg = circle_degrees(n_max);
  return Eigen::Map<const Eigen::VectorXd>(deg.data(), static_cast<Eigen::Index>(deg.size())).asDiagonal();
}

Eigen::MatrixXd dtn_difference(const InclusionProblem& prob) {
  check_problem(prob);
  const Eigen::Index K = 2 * prob.n_max + 1;
  Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(K, K);
  if (prob.a == 1.0) return diff;

  const int N = prob.quad_nodes;
  if (prob.geometry_modes < 0) throw DomainError("geometry_modes must be >= 0");
  const int modes = prob.geometry_modes > 0 ? prob.geometry_modes : N / 4;
  const StarCurve curve(prob.shape.radial(), static_cast<std::size_t>(modes));
  std::vector<CurvePoint> pts(static_cast<std::size_t>(N));
  Eigen::VectorXd w(N);  // arc-length quadrature weights
  std::vector<double> nx(static_cast<std::size_t>(N)), ny(static_cast<std::size_t>(N)),
      curv(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const CurvePoint p = curve.at(2.0 * kPi * j / N);
    pts[ju] = p;
    const double speed = std::hypot(p.dx, p.dy);
    w(j) = speed * 2.0 * kPi / N;
    nx[ju] = p.dy / speed;
    ny[ju] = -p.dx / speed;
    curv[ju] = (p.dx * p.ddy - p.dy * p.ddx) / (speed * speed * speed);
  }

  // Normal derivative in x of the unit-disk Dirichlet Green's function
  // G(x,y) = (1/2pi)[log|x-y| - log|x-y*| - log|y|], y* = y/|y|^2.
  const double inv2pi = 1.0 / (2.0 * kPi);
  Eigen::MatrixXd A(N, N);
  const double kappa = 2.0 * (prob.a - 1.0) / (prob.a + 1.0);
  for (int j = 0; j < N; ++j) {
    const auto& y = pts[static_cast<std::size_t>(j)];
    const double r2y = y.x * y.x + y.y * y.y;
    const double ysx = y.x / r2y, ysy = y.y / r2y;
    for (int i = 0; i < N; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const auto& x = pts[iu];
      double direct;
      if (i == j) {
        direct = 0.5 * curv[iu];
      } else {
        const double dx = x.x - y.x, dy = x.y - y.y;
        direct = (nx[iu] * dx + ny[iu] * dy) / (dx * dx + dy * dy);
      }
      const double ex = x.x - ysx, ey = x.y - ysy;
      const double image = (nx[iu] * ex + ny[iu] * ey) / (ex * ex + ey * ey);
      A(i, j) = -kappa * inv2pi * (direct - image) * w(j);
    }
    A(j, j) += 1.0;
  }

  // Harmonic extensions of the basis functions and their normal derivatives.
  Eigen::MatrixXd H(N, K), rhs(N, K);
  for (int i = 0; i < N; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const std::complex<double> z(pts[iu].x, pts[iu].y);
    H(i, 0) = 1.0 / std::sqrt(2.0 * kPi);
    rhs(i, 0) = 0.0;
    std::complex<double> zp(1.0, 0.0);  // z^(j-1)
    const double s = 1.0 / std::sqrt(kPi);
    for (int j = 1; j <= prob.n_max; ++j) {
      const std::complex<double> dz = static_cast<double>(j) * zp;  // d/dz z^j
      zp *= z;
      const Eigen::Index c = 2 * j - 1, sn = 2 * j;
      H(i, c) = s * zp.real();
      H(i, sn) = s * zp.imag();
      // grad Re z^j = (Re dz, -Im dz), grad Im z^j = (Im dz, Re dz)
      rhs(i, c) = kappa * s * (nx[iu] * dz.real() - ny[iu] * dz.imag());
      rhs(i, sn) = kappa * s * (nx[iu] * dz.imag() + ny[iu] * dz.real());
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::MatrixXd phi = lu.solve(rhs);
  const double rnorm = rhs.norm();
  const double res = rnorm > 0.0 ? (A * phi - rhs).norm() / rnorm : 0.0;
  if (!(res < 1e-9)) throw SolverError("transmission integral equation did not converge", res);

  // Delta M_kl = integral over the interface of H_l phi_k.
  diff = phi.transpose() * w.asDiagonal() * H;
  return diff;
}

Eigen::MatrixXd dtn_numeric(const InclusionProblem& prob) {
  return dtn_homogeneous(prob.n_max) + dtn_difference(prob);
}

OperatorMatrix weight_dtn_difference(const Eigen::MatrixXd& diff, int n_max) {
  auto deg = circle_degrees(n_max);
  if (diff.rows() != static_cast<Eigen::Index>(deg.size()) || diff.cols() != diff.rows())
    throw DomainError("weight_dtn_difference: size does not match n_max");
  Eigen::VectorXd s(diff.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(1.0 + deg[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd b = s.asDiagonal() * diff * s.asDiagonal();
  return make_operator(std::move(b), std::move(deg), ClassConstants{});
}

OperatorMatrix delta_dtn_weighted(const InclusionProblem& prob) {
  OperatorMatrix g = weight_dtn_difference(dtn_difference(prob), prob.n_max);
  const DecayFit fit = fit_shell_decay(g);
  if (fit.alpha > 0.0) {
    g.constants.C2 = std::max(2.0, fit.C);
    g.constants.alpha2 = fit.alpha;
  }
  g.constants.p = 1;
  return g;
}

Eigen::MatrixXd ntd_from_dtn(const Eigen::MatrixXd& dtn) {
  if (dtn.rows() != dtn.cols() || dtn.rows() < 3 || dtn.rows() % 2 == 0)
    throw DomainError("ntd_from_dtn: expected a (2 n_max + 1)-square DtN matrix");
  const Eigen::Index n = dtn.rows() - 1;
  const Eigen::MatrixXd block = dtn.bottomRightCorner(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) throw SolverError("ntd_from_dtn: singular mean-zero block", rc);
  return lu.inverse();
}

namespace {

// Degree of mean-zero block index b (0-based): 1, 1, 2, 2, ...
double block_degree(Eigen::Index b) { return static_cast<double>(b / 2 + 1); }

}  // namespace

double dtn_tilde_norm(const Eigen::MatrixXd& dtn_block) {
  const Eigen::Index n = dtn_block.rows();
  Eigen::VectorXd left(n), right(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    left(b) = 1.0 / std::sqrt(block_degree(b));
    right(b) = 1.0 / std::sqrt(1.0 + block_degree(b));
  }
  return operator_norm(Eigen::MatrixXd(left.asDiagonal() * dtn_block * right.asDiagonal()));
}

Eigen::MatrixXd ntd_natural(const Eigen::MatrixXd& ntd) {
  const Eigen::Index n = ntd.rows();
  Eigen::VectorXd left(n), right(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    left(b) = std::sqrt(1.0 + block_degree(b));
    right(b) = std::sqrt(block_degree(b));
  }
  return left.asDiagonal() * ntd * right.asDiagonal();
}

double ntd_norm(const Eigen::MatrixXd& ntd) { return operator_norm(ntd_natural(ntd)); }

ElectrodeConfig ElectrodeConfig::equal_arcs(int L, double coverage, double z) {
  if (L < 2) throw DomainError("electrodes: need L >= 2");
  if (!(coverage > 0.0 && coverage < 1.0)) throw DomainError("electrodes: coverage must lie in (0, 1)");
  if (!(z > 0.0)) throw DomainError("electrodes: impedance must be positive");
  ElectrodeConfig cfg;
  const double sector = 2.0 * kPi / L;
  for (int l = 0; l < L; ++l) {
    const double len = coverage * sector;
    cfg.arcs.push_back(Arc{l * sector - 0.5 * len, len});
    cfg.impedance.push_back(z);
  }
  return cfg;
}

void ElectrodeConfig::validate() const {
  const std::size_t L = arcs.size();
  if (L < 2) throw DomainError("electrodes: need L >= 2");
  if (impedance.size() != L) throw DomainError("electrodes: one impedance per arc required");
  for (double z : impedance)
    if (!(z > 0.0)) throw DomainError("electrodes: impedances must be positive");
  std::vector<std::pair<double, double>> spans;
  for (const Arc& a : arcs) {
    if (!(a.length > 0.0)) throw DomainError("electrodes: arc lengths must be positive");
    double s = std::fmod(a.start, 2.0 * kPi);
    if (s < 0.0) s += 2.0 * kPi;
    spans.emplace_back(s, s + a.length);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 0; i < L; ++i) {
    const double next = i + 1 < L ? spans[i + 1].first : spans[0].first + 2.0 * kPi;
    if (!(spans[i].second < next)) throw DomainError("electrodes: arcs must be disjoint with gaps");
  }
}

ResistanceResult resistance_matrix(const Eigen::MatrixXd& ntd, const ElectrodeConfig& cfg) {
  cfg.validate();
  if (ntd.rows() != ntd.cols() || ntd.rows() < 2 || ntd.rows() % 2 != 0)
    throw DomainError("resistance_matrix: expected a (2 n_max)-square NtD matrix");
  const Eigen::Index n = ntd.rows();
  const Eigen::Index K = n + 1;
  const auto L = static_cast<Eigen::Index>(cfg.arcs.size());

  // a_l = Fourier coefficients of the arc indicator (mean-zero part), and the
  // mean-zero block of sum_l (1/z_l)(chi_l - a_l a_l^T / |e_l|).
  Eigen::MatrixXd arcs(n, L);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index l = 0; l < L; ++l) {
    const Arc& e = cfg.arcs[static_cast<std::size_t>(l)];
    const double a = e.start, b = e.start + e.length;
    Eigen::VectorXd coeff(n);
    for (Eigen::Index i = 1; i < K; ++i) {
      const Mode m = mode(i);
      coeff(i - 1) = m.scale * trig_integral(m.freq, m.is_sin, a, b);
    }
    arcs.col(l) = coeff;
    Eigen::MatrixXd chi(n, n);
    for (Eigen::Index i = 1; i < K; ++i)
      for (Eigen::Index k = i; k < K; ++k) chi(i - 1, k - 1) = chi(k - 1, i - 1) = product_integral(i, k, a, b);
    S += (chi - coeff * coeff.transpose() / e.length) / cfg.impedance[static_cast<std::size_t>(l)];
  }

  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) + S * ntd;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const auto& sv = svd.singularValues();
  ResistanceResult out;
  out.condition = sv(0) / sv(sv.size() - 1);
  if (!(out.condition < 1e12)) throw SolverError("electrode system ill-conditioned", out.condition);

  // Columns: current patterns e_l - 1/L.
  Eigen::MatrixXd currents = Eigen::MatrixXd::Identity(L, L) - Eigen::MatrixXd::Constant(L, L, 1.0 / L);
  Eigen::VectorXd inv_len(L);
  double total_len = 0.0;
  for (Eigen::Index l = 0; l < L; ++l) {
    inv_len(l) = 1.0 / cfg.arcs[static_cast<std::size_t>(l)].length;
    total_len += cfg.arcs[static_cast<std::size_t>(l)].length;
  }
  const Eigen::MatrixXd itilde = arcs * inv_len.asDiagonal() * currents;
  const Eigen::MatrixXd phi = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(itilde);
  Eigen::MatrixXd V = arcs.transpose() * (ntd * phi);
  for (Eigen::Index c = 0; c < L; ++c) {
    const double shift = -V.col(c).sum() / total_len;
    for (Eigen::Index l = 0; l < L; ++l) V(l, c) += shift * cfg.arcs[static_cast<std::size_t>(l)].length;
  }
  // R[1] = 0 and sum V = 0: project both sides onto the mean-zero patterns.
  const Eigen::MatrixXd P = currents;
  out.R = P * V * P;
  return out;
}

}  // namespace instab
