#include "ovdg/limiter.hpp"

#include <algorithm>
#include <cmath>

namespace ovdg {

double minmod(double a1, double a2, double a3) {
  if (a1 > 0.0 && a2 > 0.0 && a3 > 0.0) return std::min({a1, a2, a3});
  if (a1 < 0.0 && a2 < 0.0 && a3 < 0.0) return std::max({a1, a2, a3});
  return 0.0;
}

double minmod_tvb(double a1, double a2, double a3, double M, double h) {
  if (std::abs(a1) <= M * h * h) return a1;
  return minmod(a1, a2, a3);
}

namespace {

struct Differences {
  double forward = 0.0;
  double backward = 0.0;
};

Differences average_differences(const DGField& u, int j, bool periodic) {
  const int n = u.n_cells();
  const double mid = u.cell_average(j);
  const bool has_left = periodic || j > 0;
  const bool has_right = periodic || j + 1 < n;
  const double left = has_left ? u.cell_average((j + n - 1) % n) : mid;
  const double right = has_right ? u.cell_average((j + 1) % n) : mid;
  Differences d{right - mid, mid - left};
  // Missing neighbour at a non-periodic end: reuse the one-sided difference.
  if (!has_left) d.backward = d.forward;
  if (!has_right) d.forward = d.backward;
  return d;
}

bool is_troubled(const DGField& u, int j, const LimiterConfig& cfg, const Differences& d) {
  const double h = u.mesh().h(j);
  const double avg = u.cell_average(j);
  const double dev_right = u.right_trace(j) - avg;
  const double dev_left = avg - u.left_trace(j);
  const double scale = cfg.tolerance * (std::abs(dev_right) + std::abs(dev_left) + std::abs(d.forward) +
                                       std::abs(d.backward));
  auto modified = [&](double dev) {
    return std::abs(minmod_tvb(dev, d.forward, d.backward, cfg.M, h) - dev) > scale;
  };
  return modified(dev_right) || modified(dev_left);
}

}  // namespace

std::vector<int> troubled_cells(const DGField& u, const LimiterConfig& cfg) {
  std::vector<int> out;
  if (u.degree() == 0) return out;
  for (int j = 0; j < u.n_cells(); ++j)
    if (is_troubled(u, j, cfg, average_differences(u, j, cfg.periodic))) out.push_back(j);
  return out;
}

DGField tvb_limit(const DGField& u, const LimiterConfig& cfg) {
  if (!cfg.enabled || u.degree() == 0) return u;
  DGField out = u;
  const double sqrt3 = std::sqrt(3.0);
  for (int j = 0; j < u.n_cells(); ++j) {
    const Differences d = average_differences(u, j, cfg.periodic);
    if (!is_troubled(u, j, cfg, d)) continue;
    const double sh = std::sqrt(u.mesh().h(j));
    // phi_1 = sqrt(3) xi / sqrt(h): the P1 part deviates by c_1 sqrt(3) / sqrt(h) at the right end.
    const double slope_dev = minmod(u(j, 1) * sqrt3 / sh, d.forward, d.backward);
    auto c = out.cell(j);
    std::fill(c.begin() + 1, c.end(), 0.0);
    c[1] = slope_dev * sh / sqrt3;
  }
  return out;
}

}  // namespace ovdg
