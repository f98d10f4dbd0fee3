#include "ovdg/exact_solutions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ovdg {

double manufactured(double x, double t) { return std::sin(x + t); }
double manufactured_source(double x, double t) { return 0.5 * std::sin(2.0 * (x + t)); }
double manufactured_v(double x, double t) { return -std::cos(x + t); }

double peakon_initial(double x) {
  const double z = x - 0.5;
  return z <= 0.0 ? z * z / 6.0 + z / 6.0 + 1.0 / 36.0 : z * z / 6.0 - z / 6.0 + 1.0 / 36.0;
}

double peakon(double x, double t) {
  double z = x - t / 36.0;
  z -= std::floor(z);
  return peakon_initial(z);
}

double shock_initial(double x) { return -0.05 * std::cos(2.0 * M_PI * x); }

ExpSumTau::ExpSumTau(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("tau function needs at least one term");
  for (const Term& t : terms_)
    if (!(t.amplitude > 0.0)) throw std::invalid_argument("tau amplitudes must be positive");
}

namespace {

struct Weighted {
  double log_max;
  std::vector<double> w;  // normalized, sum to 1
  double log_sum;
};

Weighted weights(const std::vector<ExpSumTau::Term>& terms, double y, double s) {
  Weighted out;
  out.w.resize(terms.size());
  out.log_max = -INFINITY;
  for (size_t a = 0; a < terms.size(); ++a) {
    out.w[a] = std::log(terms[a].amplitude) + terms[a].s_rate * s + terms[a].y_rate * y;
    out.log_max = std::max(out.log_max, out.w[a]);
  }
  double sum = 0.0;
  for (double& e : out.w) {
    e = std::exp(e - out.log_max);
    sum += e;
  }
  for (double& e : out.w) e /= sum;
  out.log_sum = std::log(sum);
  return out;
}

}  // namespace

double ExpSumTau::value(double y, double s) const { return std::exp(log_value(y, s)); }

double ExpSumTau::log_value(double y, double s) const {
  const Weighted w = weights(terms_, y, s);
  return w.log_max + w.log_sum;
}

double ExpSumTau::log_partial(int ns, int ny, double y, double s) const {
  const int order = ns + ny;
  if (ns < 0 || ny < 0 || order > 4) throw std::invalid_argument("log_partial supports total order <= 4");
  const Weighted w = weights(terms_, y, s);
  if (order == 0) return w.log_max + w.log_sum;

  // Partials of ln f are joint cumulants of the rates (p, r) under the weights w_a.
  std::array<int, 4> vars{};
  for (int i = 0; i < order; ++i) vars[i] = i < ns ? 0 : 1;
  double mean_p = 0.0, mean_r = 0.0;
  for (size_t a = 0; a < terms_.size(); ++a) {
    mean_p += w.w[a] * terms_[a].s_rate;
    mean_r += w.w[a] * terms_[a].y_rate;
  }
  if (order == 1) return ns == 1 ? mean_p : mean_r;

  auto centred = [&](size_t a, int var) {
    return var == 0 ? terms_[a].s_rate - mean_p : terms_[a].y_rate - mean_r;
  };
  auto moment = [&](std::initializer_list<int> idx) {
    double sum = 0.0;
    for (size_t a = 0; a < terms_.size(); ++a) {
      double prod = w.w[a];
      for (int i : idx) prod *= centred(a, vars[i]);
      sum += prod;
    }
    return sum;
  };
  if (order == 2) return moment({0, 1});
  if (order == 3) return moment({0, 1, 2});
  return moment({0, 1, 2, 3}) - moment({0, 1}) * moment({2, 3}) - moment({0, 2}) * moment({1, 3}) -
         moment({0, 3}) * moment({1, 2});
}

double phase_y_rate(double k, double c) {
  const double den = k * k - c;
  if (den == 0.0) throw std::invalid_argument("soliton wavenumber needs k^2 != c");
  return 3.0 * k / den;
}

double interaction_coefficient(double k1, double k2, double c) {
  const double num = (k1 - k2) * (k1 - k2) * (k1 * k1 - k1 * k2 + k2 * k2 - 3.0 * c);
  const double den = (k1 + k2) * (k1 + k2) * (k1 * k1 + k1 * k2 + k2 * k2 - 3.0 * c);
  if (den == 0.0) throw std::invalid_argument("two-soliton interaction coefficient has a zero denominator");
  return num / den;
}

ExpSumTau build_tau(const SolitonParams& params, int n_solitons) {
  if (n_solitons != 1 && n_solitons != 2) throw std::invalid_argument("only one- and two-soliton tau functions");
  if (static_cast<int>(params.k.size()) < n_solitons || static_cast<int>(params.eta0.size()) < n_solitons)
    throw std::invalid_argument("soliton parameters missing k_i or eta_i0");
  std::vector<ExpSumTau::Term> terms{{1.0, 0.0, 0.0}};
  std::array<ExpSumTau::Term, 2> single{};
  for (int i = 0; i < n_solitons; ++i) {
    const double k = params.k[i];
    single[i] = {std::exp(params.eta0[i]), k, phase_y_rate(k, params.c)};
    terms.push_back(single[i]);
  }
  if (n_solitons == 2) {
    const double b12 = interaction_coefficient(params.k[0], params.k[1], params.c);
    if (!(b12 > 0.0)) throw std::invalid_argument("two-soliton tau needs b12 > 0");
    terms.push_back({b12 * single[0].amplitude * single[1].amplitude, single[0].s_rate + single[1].s_rate,
                     single[0].y_rate + single[1].y_rate});
  }
  return ExpSumTau(std::move(terms));
}

CDExact cd_exact(const ExpSumTau& tau, double y, double s) {
  return {-2.0 * tau.log_partial(2, 0, y, s), 1.0 - 2.0 * tau.log_partial(1, 1, y, s),
          -2.0 * tau.log_partial(2, 1, y, s), y - 2.0 * tau.log_partial(1, 0, y, s)};
}

CDExactRates cd_exact_rates(const ExpSumTau& tau, double y, double s) {
  return {-2.0 * tau.log_partial(2, 1, y, s), -2.0 * tau.log_partial(3, 1, y, s)};
}

}  // namespace ovdg
