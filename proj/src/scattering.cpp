#include "instab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "instab/bessel.hpp"
#include "instab/conductivity.hpp"
#include "instab/error.hpp"

namespace instab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kObstacleMaxRadius = 1.8;
const std::complex<double> kI(0.0, 1.0);

double basis_value(Eigen::Index idx, double theta) {
  if (idx == 0) return 1.0 / std::sqrt(2.0 * kPi);
  const double j = static_cast<double>((idx + 1) / 2);
  return (idx % 2 == 1 ? std::cos(j * theta) : std::sin(j * theta)) / std::sqrt(kPi);
}

std::vector<double> uniform_angles(int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = 2.0 * kPi * i / count;
  return t;
}

}  // namespace

std::complex<double> disk_mode_coefficient(int n, double R, double a) {
  if (!(R > 0.0) || !(a > 0.0)) throw DomainError("disk far field: R and a must be positive");
  const double k = std::sqrt(a);
  const auto t = bessel_table(std::abs(n), k * R);
  const std::complex<double> ratio = t.j[static_cast<std::size_t>(std::abs(n))] / t.h(std::abs(n));
  return -std::sqrt(2.0 / (kPi * k)) * std::polar(1.0, -kPi / 4.0) * ratio;
}

FarFieldMatrix farfield_disk(double R, double a, int n_max) {
  if (!(R > 0.0) || R > 1.5) throw DomainError("farfield_disk: R must lie in (0, 3/2]");
  if (n_max < 0) throw DomainError("farfield_disk: n_max must be >= 0");
  FarFieldMatrix f;
  f.a = a;
  f.degrees = circle_degrees(n_max);
  const Eigen::Index K = 2 * n_max + 1;
  f.b = Eigen::MatrixXcd::Zero(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    f.b(i, i) = 2.0 * kPi * disk_mode_coefficient(static_cast<int>((i + 1) / 2), R, a);
  return f;
}

SoundSoftSolver::SoundSoftSolver(const StarCurve& curve, double a, int quad_nodes)
    : k_(std::sqrt(a)), eta_(std::sqrt(a)), n_(quad_nodes / 2) {
  if (!(a > 0.0)) throw DomainError("sound-soft solver: a must be positive");
  if (quad_nodes < 16 || quad_nodes % 2 != 0) throw DomainError("sound-soft solver: quad_nodes must be even and >= 16");
  const int N = 2 * n_;
  pts_.resize(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) pts_[static_cast<std::size_t>(j)] = curve.at(kPi * j / n_);

  // Weights of the logarithmic product rule, R(t_i - t_j) depends on i - j only.
  std::vector<double> logw(static_cast<std::size_t>(N));
  for (int d = 0; d < N; ++d) {
    double s = 0.0;
    for (int m = 1; m < n_; ++m) s += std::cos(m * d * kPi / n_) / m;
    logw[static_cast<std::size_t>(d)] = -2.0 * kPi / n_ * s - kPi / (static_cast<double>(n_) * n_) * std::cos(d * kPi);
  }

  const double trap = kPi / n_;
  Eigen::MatrixXcd A(N, N);
  for (int i = 0; i < N; ++i) {
    const CurvePoint& x = pts_[static_cast<std::size_t>(i)];
    for (int j = 0; j < N; ++j) {
      const CurvePoint& y = pts_[static_cast<std::size_t>(j)];
      const double speed = std::hypot(y.dx, y.dy);
      std::complex<double> k1, k2;
      if (i == j) {
        const double l2 = (y.dy * y.ddx - y.dx * y.ddy) / (2.0 * kPi * speed * speed);
        const double m1 = -speed / (2.0 * kPi);
        const std::complex<double> m2 =
            speed * (0.5 * kI - kEulerGamma / kPi - std::log(k_ * speed / 2.0) / kPi);
        k1 = -kI * eta_ * m1;
        k2 = l2 - kI * eta_ * m2;
      } else {
        const double dx = x.x - y.x, dy = x.y - y.y;
        const double r = std::hypot(dx, dy);
        const auto bt = bessel_table(1, k_ * r);
        const std::complex<double> h0 = bt.h(0), h1 = bt.h(1);
        const double nrm = y.dy * dx - y.dx * dy;
        const double lg = std::log(4.0 * std::pow(std::sin(0.5 * (i - j) * kPi / n_), 2));
        const std::complex<double> L = 0.5 * kI * k_ * nrm * h1 / r;
        const double L1 = -k_ / (2.0 * kPi) * nrm * bt.j[1] / r;
        const std::complex<double> M = 0.5 * kI * h0 * speed;
        const double M1 = -bt.j[0] * speed / (2.0 * kPi);
        k1 = L1 - kI * eta_ * M1;
        k2 = (L - L1 * lg) - kI * eta_ * (M - M1 * lg);
      }
      const int d = ((i - j) % N + N) % N;
      A(i, j) = logw[static_cast<std::size_t>(d)] * k1 + trap * k2;
    }
    A(i, i) += 1.0;
  }
  lu_.compute(A);
  const double rc = lu_.rcond();
  if (!(rc > 1e-13)) throw SolverError("sound-soft integral equation is singular", rc);
}

Eigen::MatrixXcd SoundSoftSolver::densities(const std::vector<double>& incidence) const {
  const auto N = static_cast<Eigen::Index>(pts_.size());
  Eigen::MatrixXcd rhs(N, static_cast<Eigen::Index>(incidence.size()));
  for (std::size_t c = 0; c < incidence.size(); ++c) {
    const double d1 = std::cos(incidence[c]), d2 = std::sin(incidence[c]);
    for (Eigen::Index i = 0; i < N; ++i) {
      const CurvePoint& p = pts_[static_cast<std::size_t>(i)];
      rhs(i, static_cast<Eigen::Index>(c)) = -2.0 * std::polar(1.0, k_ * (p.x * d1 + p.y * d2));
    }
  }
  return lu_.solve(rhs);
}

Eigen::MatrixXcd SoundSoftSolver::far_field(const std::vector<double>& observation,
                                            const Eigen::MatrixXcd& psi) const {
  const auto N = static_cast<Eigen::Index>(pts_.size());
  const auto Q = static_cast<Eigen::Index>(observation.size());
  const std::complex<double> pre = std::polar(1.0 / std::sqrt(8.0 * kPi * k_), -kPi / 4.0) * (kPi / n_);
  Eigen::MatrixXcd E(Q, N);
  for (Eigen::Index q = 0; q < Q; ++q) {
    const double x1 = std::cos(observation[static_cast<std::size_t>(q)]);
    const double x2 = std::sin(observation[static_cast<std::size_t>(q)]);
    for (Eigen::Index j = 0; j < N; ++j) {
      const CurvePoint& y = pts_[static_cast<std::size_t>(j)];
      const double speed = std::hypot(y.dx, y.dy);
      const double nu_dot = y.dy * x1 - y.dx * x2;  // |x'| nu . xhat
      E(q, j) = pre * (k_ * nu_dot + eta_ * speed) * std::polar(1.0, -k_ * (x1 * y.x + x2 * y.y));
    }
  }
  return E * psi;
}

std::complex<double> SoundSoftSolver::scattered_field(double x, double y, const Eigen::VectorXcd& psi) const {
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < pts_.size(); ++j) {
    const CurvePoint& p = pts_[j];
    const double dx = x - p.x, dy = y - p.y;
    const double r = std::hypot(dx, dy);
    const auto bt = bessel_table(1, k_ * r);
    const double speed = std::hypot(p.dx, p.dy);
    const double nrm = p.dy * dx - p.dx * dy;
    const std::complex<double> dlp = 0.25 * kI * k_ * bt.h(1) * nrm / r;
    const std::complex<double> slp = 0.25 * kI * bt.h(0) * speed;
    sum += (dlp - kI * eta_ * slp) * psi(static_cast<Eigen::Index>(j));
  }
  return sum * (kPi / n_);
}

Eigen::MatrixXcd project_pattern(const Eigen::MatrixXcd& pattern, int n_max) {
  const Eigen::Index Q = pattern.rows();
  if (pattern.cols() != Q) throw DomainError("project_pattern: expected a square direction grid");
  const Eigen::Index K = 2 * n_max + 1;
  Eigen::MatrixXd V(Q, K);
  for (Eigen::Index q = 0; q < Q; ++q)
    for (Eigen::Index k = 0; k < K; ++k) V(q, k) = basis_value(k, 2.0 * kPi * q / Q);
  const double w = 2.0 * kPi / Q;
  const Eigen::MatrixXcd Vc = V.cast<std::complex<double>>();
  return (w * w) * (Vc.transpose() * pattern * Vc);
}

double reciprocity_residual(const Eigen::MatrixXcd& pattern) {
  const Eigen::Index Q = pattern.rows();
  if (pattern.cols() != Q || Q % 2 != 0) throw DomainError("reciprocity_residual: need an even square grid");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < Q; ++i)
    for (Eigen::Index j = 0; j < Q; ++j)
      worst = std::max(worst, std::abs(pattern(i, j) - pattern((j + Q / 2) % Q, (i + Q / 2) % Q)));
  return worst;
}

std::vector<FarFieldMatrix> farfield_numeric(const ObstacleProblem& prob) {
  if (prob.shape.kind() != ShapeKind::radial_subgraph) throw DomainError("obstacle must be a radial_subgraph shape");
  const auto& rp = prob.shape.radial();
  if (std::hypot(rp.center().x, rp.center().y) + rp.max_radius() > kObstacleMaxRadius)
    throw DomainError("obstacle must lie inside the disk of radius 9/5");
  if (prob.n_max < 0) throw DomainError("n_max must be >= 0");
  const int Q = prob.directions > 0 ? prob.directions : std::max(64, 4 * (prob.n_max + 2));
  if (Q % 2 != 0) throw DomainError("direction count must be even");
  const auto angles = uniform_angles(Q);
  const int modes = prob.geometry_modes > 0 ? prob.geometry_modes : std::max(8, prob.quad_nodes / 8);
  if (prob.geometry_modes < 0) throw DomainError("geometry_modes must be >= 0");
  const StarCurve curve(rp, static_cast<std::size_t>(modes));

  std::vector<FarFieldMatrix> out;
  for (double a : prob.a_list) {
    if (!(a > 0.0)) throw DomainError("wave parameter a must be positive");
    const SoundSoftSolver solver(curve, a, prob.quad_nodes);
    FarFieldMatrix f;
    f.a = a;
    f.degrees = circle_degrees(prob.n_max);
    f.pattern = solver.far_field(angles, solver.densities(angles));
    f.b = project_pattern(f.pattern, prob.n_max);
    f.reciprocity_residual = reciprocity_residual(f.pattern);
    out.push_back(std::move(f));
  }
  return out;
}

double farfield_l2_norm(const FarFieldMatrix& f) { return f.b.norm(); }

}  // namespace instab
