#ifndef OVDG_TIME_INTEGRATION_HPP
#define OVDG_TIME_INTEGRATION_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ovdg {

/// State vectors the stepper can combine: copyable with in-place axpy pieces.
template <class S>
concept VectorState = std::copyable<S> && requires(S a, const S& b, double c) {
  { a += b } -> std::same_as<S&>;
  { a *= c } -> std::same_as<S&>;
};

struct NoStageHook {
  template <class S>
  void operator()(S&) const {}
};

/// One Shu-Osher SSP-RK3 step of u' = L(u, t). The hook runs after every stage.
template <VectorState S, class Rhs, class Hook = NoStageHook>
S ssp_rk3_step(const S& u, double t, double dt, Rhs&& rhs, Hook&& post_stage = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("ssp_rk3_step needs dt > 0");
  S s1 = rhs(u, t);
  s1 *= dt;
  s1 += u;
  post_stage(s1);

  S s2 = rhs(s1, t + dt);
  s2 *= dt;
  s2 += s1;
  s2 *= 0.25;
  {
    S tmp = u;
    tmp *= 0.75;
    s2 += tmp;
  }
  post_stage(s2);

  S out = rhs(s2, t + 0.5 * dt);
  out *= dt;
  out += s2;
  out *= 2.0 / 3.0;
  {
    S tmp = u;
    tmp *= 1.0 / 3.0;
    out += tmp;
  }
  post_stage(out);
  return out;
}

/// Fixed-step schedule: dt = cfl * h, shortened where needed to land on every
/// stop time and exactly on T.
struct StepPlan {
  double dt = 0.0;
  double t0 = 0.0;
  double T = 0.0;
  std::vector<double> stop_times;

  static StepPlan from_cfl(double cfl, double h, double T, std::vector<double> stops = {}) {
    StepPlan p;
    p.dt = cfl * h;
    p.T = T;
    p.stop_times = std::move(stops);
    return p;
  }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step plan needs dt > 0");
    if (!(T >= t0)) throw std::invalid_argument("step plan needs T >= t0");
  }

  /// Ordered segment ends in (t0, T], always ending with T.
  std::vector<double> segments() const {
    std::vector<double> ends;
    for (double s : stop_times)
      if (s > t0 && s < T) ends.push_back(s);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    if (T > t0) ends.push_back(T);
    return ends;
  }
};

class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(long step, double t)
      : std::runtime_error("state became non-finite at step " + std::to_string(step) + " (t = " +
                           std::to_string(t) + ")"),
        step_(step),
        time_(t) {}
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

template <class S>
struct Observers {
  /// Called at t0 (step 0) and after every step.
  std::function<void(long step, double t, const S&)> each_step;
  /// Called at t0 and T when they are listed stop times, and at each interior stop.
  std::function<void(double t, const S&)> at_stop;
};

template <class S>
struct IntegrationResult {
  S state;
  long steps = 0;
  double t = 0.0;
};

template <VectorState S, class Rhs, class Hook = NoStageHook>
IntegrationResult<S> integrate(S state, Rhs&& rhs, const StepPlan& plan, const Observers<S>& obs = {},
                               Hook&& post_stage = {}) {
  plan.validate();
  auto is_stop = [&](double t) {
    return std::any_of(plan.stop_times.begin(), plan.stop_times.end(),
                       [&](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
  };
  long step = 0;
  double t = plan.t0;
  if (obs.each_step) obs.each_step(0, t, state);
  if (obs.at_stop && is_stop(t)) obs.at_stop(t, state);

  for (double end : plan.segments()) {
    const double start = t;
    const double span = end - start;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(span / plan.dt * (1.0 - 1e-12))));
    for (long i = 0; i < n; ++i) {
      const double t_next = (i + 1 == n) ? end : start + (i + 1) * plan.dt;
      state = ssp_rk3_step(state, t, t_next - t, rhs, post_stage);
      t = t_next;
      ++step;
      if (!is_finite(state)) throw NonFiniteState(step, t);
      if (obs.each_step) obs.each_step(step, t, state);
    }
    if (obs.at_stop && is_stop(end)) obs.at_stop(end, state);
  }
  return {std::move(state), step, t};
}

}  // namespace ovdg

#endif
