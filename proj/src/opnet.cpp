#include "instab/opnet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "instab/error.hpp"

namespace instab {

namespace {

void check_constants(const ClassConstants& c) {
  if (!(c.C2 > 0.0) || !(c.alpha2 > 0.0) || c.p < 0)
    throw DomainError("class constants need C2 > 0, alpha2 > 0, p >= 0");
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !(delta < std::exp(-1.0)))
    throw DomainError("delta must lie in (0, 1/e)");
}

// Round |x| / step to the nearest integer, ties toward zero.
double round_ties_to_zero(double u) {
  const double f = std::floor(u);
  const double frac = u - f;
  return frac > 0.5 ? f + 1.0 : f;
}

double quantize_component(double x, double step, double C2) {
  const double top = std::floor(C2 / step);
  const double q = std::min(round_ties_to_zero(std::abs(x) / step), top);
  return std::copysign(q * step, x);
}

}  // namespace

OperatorMatrix make_operator(Eigen::MatrixXd b, std::vector<double> degrees, ClassConstants c) {
  OperatorMatrix g = make_operator(Eigen::MatrixXcd(b.cast<std::complex<double>>()),
                                   std::move(degrees), c);
  g.complex_entries = false;
  return g;
}

OperatorMatrix make_operator(Eigen::MatrixXcd b, std::vector<double> degrees, ClassConstants c) {
  if (b.rows() != b.cols() || static_cast<std::size_t>(b.rows()) != degrees.size())
    throw DomainError("operator matrix must be square with one degree per index");
  OperatorMatrix g;
  g.b = std::move(b);
  g.degrees = std::move(degrees);
  g.constants = c;
  g.complex_entries = true;
  return g;
}

std::vector<double> sequential_degrees(std::size_t K) {
  std::vector<double> d(K);
  for (std::size_t k = 0; k < K; ++k) d[k] = static_cast<double>(k);
  return d;
}

OperatorMatrix random_class_member(const std::vector<double>& degrees, const ClassConstants& c,
                                   std::mt19937_64& rng, bool complex) {
  check_constants(c);
  const auto K = static_cast<Eigen::Index>(degrees.size());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXcd b(K, K);
  for (Eigen::Index l = 0; l < K; ++l)
    for (Eigen::Index k = 0; k < K; ++k) {
      const double bound = c.C2 * std::exp(-c.alpha2 * std::max(degrees[k], degrees[l]));
      const double re = bound * unit(rng);
      const double im = complex ? bound * unit(rng) : 0.0;
      b(k, l) = {re, im};
    }
  OperatorMatrix g = make_operator(std::move(b), degrees, c);
  g.complex_entries = complex;
  return g;
}

namespace {

// Largest singular value as the square root of the top Gram eigenvalue; the
// eigenvalue carries a relative error of a few ulps, which is all a norm needs.
template <class Mat>
double top_singular_value(const Mat& b) {
  if (b.size() == 0) return 0.0;
  const double scale = b.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Mat s = b / scale;
  const Mat gram = s.rows() >= s.cols() ? Mat(s.adjoint() * s) : Mat(s * s.adjoint());
  const Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
  return scale * std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

}  // namespace

double operator_norm(const Eigen::MatrixXd& b) { return top_singular_value(b); }

double operator_norm(const Eigen::MatrixXcd& b) { return top_singular_value(b); }

double operator_norm(const OperatorMatrix& g) {
  if (!g.complex_entries) return operator_norm(Eigen::MatrixXd(g.b.real()));
  return operator_norm(g.b);
}

double y_norm(const OperatorMatrix& g) {
  const auto K = static_cast<Eigen::Index>(g.size());
  const double e = g.constants.p + 1.0;
  double sup = 0.0;
  for (Eigen::Index l = 0; l < K; ++l)
    for (Eigen::Index k = 0; k < K; ++k) {
      const double d = std::max(g.degrees[k], g.degrees[l]);
      sup = std::max(sup, std::abs(g.b(k, l)) * std::pow(2.0 + d, e));
    }
  return sup;
}

double c4_constant(double C2) {
  if (C2 < 0.0) throw DomainError("c4_constant: C2 must be >= 0");
  // sum_{n=1}^{N} (1+n)^-2, then the tail sum_{k>N+1} k^-2 = 1/(N+3/2) + O(N^-3).
  constexpr int N = 200000;
  double s = 0.0;
  for (int n = N; n >= 1; --n) s += 1.0 / ((1.0 + n) * (1.0 + n));
  s += 1.0 / (N + 1.5);
  return C2 * std::sqrt(s);
}

NormComparison op_norm_bound_check(const OperatorMatrix& g) {
  NormComparison r;
  r.op_norm = operator_norm(g);
  r.bound = c4_constant(g.constants.C2) * y_norm(g);
  r.holds = r.op_norm <= r.bound * (1.0 + 1e-12) + 1e-300;
  return r;
}

double net_envelope(double t, const ClassConstants& c) {
  return c.C2 * std::exp(-c.alpha2 * (t - 1.0)) * std::pow(2.0 + t, c.p + 1.0);
}

int n_tilde(double delta, const ClassConstants& c) {
  check_delta(delta);
  check_constants(c);
  const double threshold = delta / (2.0 * c4_constant(c.C2));
  // The envelope increases up to t* and decreases afterwards, so
  // sup_{t >= n} envelope = envelope(max(n, t*)).
  const double t_star = (c.p + 1.0) / c.alpha2 - 2.0;
  for (int n = 1; n < 10000000; ++n) {
    if (net_envelope(std::max<double>(n, t_star), c) <= threshold) return n;
  }
  throw DomainError("n_tilde: no cutoff found");
}

NetParams make_net_params(double delta, const ClassConstants& c) {
  NetParams p;
  p.delta = delta;
  p.n_tilde = n_tilde(delta, c);
  p.c4 = c4_constant(c.C2);
  p.delta_prime = std::pow(2.0 + p.n_tilde, -(c.p + 1.0)) * delta / (2.0 * p.c4);
  p.constants = c;
  return p;
}

std::size_t truncation_degree(int n_tilde) {
  return static_cast<std::size_t>(std::max(2 * n_tilde, 64));
}

OperatorMatrix quantize(const OperatorMatrix& g, const NetParams& params) {
  const double C2 = params.constants.C2;
  const double slack = 1e-12;
  OperatorMatrix q = g;
  const auto K = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index l = 0; l < K; ++l)
    for (Eigen::Index k = 0; k < K; ++k) {
      const std::complex<double> v = g.b(k, l);
      if (std::abs(v.real()) > C2 + slack || std::abs(v.imag()) > C2 + slack)
        throw DomainError("quantize: entry outside [-C2, C2]");
      if (std::max(g.degrees[k], g.degrees[l]) > params.n_tilde) {
        q.b(k, l) = 0.0;
        continue;
      }
      q.b(k, l) = {quantize_component(v.real(), params.delta_prime, C2),
                   quantize_component(v.imag(), params.delta_prime, C2)};
    }
  return q;
}

NetSize net_size(double delta, const ClassConstants& c, bool complex) {
  const NetParams np = make_net_params(delta, c);
  NetSize s;
  s.n_tilde = np.n_tilde;
  s.delta_prime = np.delta_prime;
  s.psi_count = 2.0 * std::floor(c.C2 / np.delta_prime) + 1.0;
  const double basis = std::floor(c.C2 * std::pow(1.0 + np.n_tilde, c.p));
  s.kept_entries = basis * basis;
  s.log_bound = s.kept_entries * std::log(s.psi_count) * (complex ? 2.0 : 1.0);
  const double ld = -std::log(delta);
  s.c3 = s.log_bound / std::pow(ld, 2.0 * c.p + 1.0);
  s.c5 = np.n_tilde / ld;
  return s;
}

double net_size_log_bound(double delta, const ClassConstants& c) { return net_size(delta, c).log_bound; }

double delta_of_epsilon(double eps, double alpha1, int p, double alpha3) {
  if (!(eps > 0.0)) throw DomainError("delta_of_epsilon: eps must be positive");
  return std::exp(-std::pow(eps, -alpha1 / (2.0 * p + 1.0 + alpha3)));
}

CountingResult counting_check(double packing_log_count, double net_log_bound) {
  CountingResult r;
  r.margin = packing_log_count - net_log_bound;
  r.exceeds = r.margin > 0.0;
  return r;
}

std::vector<double> shell_maxima(const OperatorMatrix& g) {
  double top = 0.0;
  for (double d : g.degrees) top = std::max(top, d);
  std::vector<double> out(static_cast<std::size_t>(std::ceil(top)) + 1, 0.0);
  const auto K = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index l = 0; l < K; ++l)
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto shell = static_cast<std::size_t>(std::ceil(std::max(g.degrees[k], g.degrees[l])));
      out[shell] = std::max(out[shell], std::abs(g.b(k, l)));
    }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double r2 = 0.0;
  bool ok = false;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit f;
  if (xs.size() < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.ok = true;
  return f;
}

}  // namespace

DecayFit fit_exponential_decay(const std::vector<double>& n, const std::vector<double>& v,
                               double rel_floor, double train_max) {
  if (n.size() != v.size()) throw DomainError("fit_exponential_decay: size mismatch");
  DecayFit fit;
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, x);
  if (!(vmax > 0.0)) return fit;
  const double floor = rel_floor * vmax;
  std::vector<double> xs, ys, tx, ty;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (v[i] > floor) {
      xs.push_back(n[i]);
      ys.push_back(std::log(v[i]));
      if (n[i] > train_max) {
        tx.push_back(n[i]);
        ty.push_back(std::log(v[i]));
      }
    } else {
      ++fit.below_floor;
    }
  }
  fit.points_used = static_cast<int>(xs.size());
  const LineFit all = least_squares(xs, ys);
  if (!all.ok) return fit;
  fit.alpha = -all.slope;
  fit.r2 = all.r2;
  // When the rate flattens towards the tail (log v convex) the whole-range
  // slope overstates the asymptotic rate; take the tail slope instead.
  if (tx.size() >= 3) {
    const LineFit tail = least_squares(tx, ty);
    if (tail.ok && -tail.slope < fit.alpha) {
      fit.alpha = -tail.slope;
      fit.r2 = tail.r2;
    }
  }
  double log_c = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] <= train_max) log_c = std::max(log_c, ys[i] + fit.alpha * xs[i]);
  if (!std::isfinite(log_c)) return fit;
  fit.C = std::exp(log_c);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (ys[i] > log_c - fit.alpha * xs[i] + 1e-9) ++fit.violations;
  return fit;
}

DecayFit fit_shell_decay(const OperatorMatrix& g, double rel_floor) {
  const auto shells = shell_maxima(g);
  std::vector<double> n, v;
  for (std::size_t s = 1; s < shells.size(); ++s) {
    n.push_back(static_cast<double>(s));
    v.push_back(shells[s]);
  }
  const double top = shells.empty() ? 0.0 : static_cast<double>(shells.size() - 1);
  return fit_exponential_decay(n, v, rel_floor, 0.5 * top);
}

}  // namespace instab
