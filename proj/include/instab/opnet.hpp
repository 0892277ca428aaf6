#pragma once

// Weighted operator matrices, the Y-norm, the quantization net and the
// epsilon/delta bookkeeping that turns a packing into an instability bound.

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace instab {

/// Class constants: entries bounded by C2 exp(-alpha2 (n-1)) on degree shell n,
/// and #{k : degree_k <= n} <= C2 (1+n)^p.
struct ClassConstants {
  double C2 = 1.0;
  double alpha2 = 0.5;
  int p = 1;
};

struct OperatorMatrix {
  Eigen::MatrixXcd b;
  std::vector<double> degrees;  // degree of basis index k
  ClassConstants constants;
  bool complex_entries = false;

  std::size_t size() const { return degrees.size(); }
};

OperatorMatrix make_operator(Eigen::MatrixXd b, std::vector<double> degrees, ClassConstants c);
OperatorMatrix make_operator(Eigen::MatrixXcd b, std::vector<double> degrees, ClassConstants c);

/// Degrees 0, 1, ..., K-1 of the abstract test class.
std::vector<double> sequential_degrees(std::size_t K);

/// Entries uniform in [-C2 e^{-alpha2 d}, C2 e^{-alpha2 d}] with d the larger
/// degree of the pair (each component independently when `complex`).
OperatorMatrix random_class_member(const std::vector<double>& degrees, const ClassConstants& c,
                                   std::mt19937_64& rng, bool complex = false);

/// Largest singular value of the truncated matrix.
double operator_norm(const Eigen::MatrixXcd& b);
double operator_norm(const Eigen::MatrixXd& b);
double operator_norm(const OperatorMatrix& g);

/// sup_{k,l} |b_kl| (2 + max(degree_k, degree_l))^(p+1).
double y_norm(const OperatorMatrix& g);

/// C2 (sum_{n>=1} (1+n)^-2)^(1/2), from partial sums closed by an integral tail estimate.
double c4_constant(double C2);

struct NormComparison {
  double op_norm = 0.0;
  double bound = 0.0;  // C4 * y_norm
  bool holds = true;
};
NormComparison op_norm_bound_check(const OperatorMatrix& g);

/// C2 e^{-alpha2 (t-1)} (2+t)^(p+1).
double net_envelope(double t, const ClassConstants& c);

/// Smallest positive integer n with net_envelope(t) <= delta / (2 C4) for all t >= n.
int n_tilde(double delta, const ClassConstants& c);

struct NetParams {
  double delta = 0.0;
  int n_tilde = 0;
  double delta_prime = 0.0;
  double c4 = 0.0;
  ClassConstants constants;
};
NetParams make_net_params(double delta, const ClassConstants& c);

/// Degree cutoff of the finite computation, max(2 n_tilde, 64).
std::size_t truncation_degree(int n_tilde);

/// Entries with max degree <= n_tilde rounded to the nearest point of
/// delta' Z within [-C2, C2] (ties toward zero, complex parts separately);
/// all other entries set to zero.
OperatorMatrix quantize(const OperatorMatrix& g, const NetParams& params);

struct NetSize {
  int n_tilde = 0;
  double delta_prime = 0.0;
  double psi_count = 0.0;     // #Psi_delta = 2 floor(C2 / delta') + 1
  double kept_entries = 0.0;  // s = #{(k,l) : max degree <= n_tilde}
  double log_bound = 0.0;     // s log #Psi_delta (doubled for complex entries)
  double c3 = 0.0;            // log_bound / (-log delta)^(2p+1)
  double c5 = 0.0;            // n_tilde / log(1/delta)
};

/// Net size for a class saturating the growth condition: floor(C2 (1+n)^p)
/// basis elements of degree <= n.
NetSize net_size(double delta, const ClassConstants& c, bool complex = false);
double net_size_log_bound(double delta, const ClassConstants& c);

/// exp(-eps^(-alpha1 / (2p + 1 + alpha3))); alpha3 = 1 is the unimproved exponent.
double delta_of_epsilon(double eps, double alpha1, int p, double alpha3 = 1.0);

struct CountingResult {
  bool exceeds = false;
  double margin = 0.0;  // packing log count minus net log bound
};
CountingResult counting_check(double packing_log_count, double net_log_bound);

/// max |b_kl| over the shell max(degree_k, degree_l) in (n-1, n], n = 0..ceil(max degree).
std::vector<double> shell_maxima(const OperatorMatrix& g);

struct DecayFit {
  double alpha = 0.0;  // fitted rate, from the slope of log v against n
  double C = 0.0;      // smallest constant covering the training points
  double r2 = 0.0;       // of the regression that produced alpha
  int points_used = 0;
  int below_floor = 0;  // points excluded as below the resolution floor
  int violations = 0;   // fitted points above C exp(-alpha n)
};

/// Least-squares fit of log v_n = log C - alpha n over the points with
/// v_n > rel_floor * max v; alpha is the smaller of the whole-range slope and
/// the slope over n > train_max (when that tail has three points). C is the
/// smallest constant covering the points with n <= train_max; violations are
/// then counted over every fitted point.
DecayFit fit_exponential_decay(const std::vector<double>& n, const std::vector<double>& v,
                               double rel_floor, double train_max);

/// Shell-maximum fit of an operator matrix (shells n >= 1, training on n <= n_max/2).
DecayFit fit_shell_decay(const OperatorMatrix& g, double rel_floor = 1e-12);

}  // namespace instab
