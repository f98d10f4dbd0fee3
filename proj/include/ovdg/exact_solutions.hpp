#ifndef OVDG_EXACT_SOLUTIONS_HPP
#define OVDG_EXACT_SOLUTIONS_HPP

#include <vector>

namespace ovdg {

// Manufactured smooth solution on [0, 2pi] with gamma = +1.
double manufactured(double x, double t);
/// Split-system source g with g_x = cos 2(x+t).
double manufactured_source(double x, double t);
/// Zero-mean antiderivative of the manufactured u.
double manufactured_v(double x, double t);

/// Piecewise-quadratic corner wave on [0,1], periodic, gamma = -1, speed 1/36.
double peakon_initial(double x);
double peakon(double x, double t);

double shock_initial(double x);

/// f(y, s) = sum_a c_a exp(p_a s + r_a y) with every c_a > 0.
class ExpSumTau {
 public:
  struct Term {
    double amplitude;
    double s_rate;
    double y_rate;
  };

  explicit ExpSumTau(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  double value(double y, double s) const;
  double log_value(double y, double s) const;
  /// d^{ns+ny} ln f / ds^ns dy^ny for ns + ny <= 4, in closed form (joint cumulants).
  double log_partial(int ns, int ny, double y, double s) const;

 private:
  std::vector<Term> terms_;
};

struct SolitonParams {
  std::vector<double> k;     // wavenumbers k_i
  double c = 0.0;            // two-component coupling
  std::vector<double> eta0;  // phase offsets eta_{i0}
  double gamma = -3.0;
};

/// y-rate of eta_i: 3 k / (k^2 - c).
double phase_y_rate(double k, double c);
double interaction_coefficient(double k1, double k2, double c);

ExpSumTau build_tau(const SolitonParams& params, int n_solitons);

struct CDExact {
  double u;
  double q;
  double omega;
  double x;
};

/// u = -2 (ln f)_ss, q = 1 - 2 (ln f)_ys, omega = u_y, x = y - 2 (ln f)_s.
CDExact cd_exact(const ExpSumTau& tau, double y, double s);
/// s-derivatives of q and omega from the tau function (q_s = omega, omega_s = u_ys).
struct CDExactRates {
  double q_s;
  double omega_s;
};
CDExactRates cd_exact_rates(const ExpSumTau& tau, double y, double s);

}  // namespace ovdg

#endif
