#ifndef OVDG_TEST_UTIL_HPP
#define OVDG_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "ovdg/mesh_basis.hpp"

namespace ovdg::test {

/// Composite 5-point Gauss rule (literal nodes) with `panels` panels per cell.
inline double panel_integral(const Mesh1D& mesh, const std::function<double(int j, double x)>& f,
                            int panels = 16) {
  static constexpr double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                     0.9061798459386640};
  static constexpr double weight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                       0.4786286704993665, 0.2369268850561891};
  double total = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    const double h = mesh.h(j) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = mesh.left(j) + (p + 0.5) * h;
      for (int i = 0; i < 5; ++i) total += 0.5 * h * weight[i] * f(j, c + 0.5 * h * node[i]);
    }
  }
  return total;
}

/// L2 distance between u_h and f sampled cell by cell (no trace ambiguity at nodes).
inline double l2_distance(const DGField& u, const std::function<double(double)>& f, int panels = 16) {
  const Mesh1D& m = u.mesh();
  return std::sqrt(panel_integral(
      m,
      [&](int j, double x) {
        const double d = u.evaluate_local(j, m.to_local(j, x)) - f(x);
        return d * d;
      },
      panels));
}

inline DGField random_field(const MeshPtr& mesh, int k, std::mt19937& rng, bool zero_mean = true) {
  std::normal_distribution<double> dist;
  DGField u(mesh, k);
  for (double& c : u.coeffs()) c = dist(rng);
  if (zero_mean) {
    const double mean = u.integral() / mesh->length();
    for (int j = 0; j < mesh->size(); ++j) u(j, 0) -= mean * std::sqrt(mesh->h(j));
  }
  return u;
}

/// Fourth-order central difference.
inline double fd(const std::function<double(double)>& f, double x, double eps = 1e-3) {
  return (-f(x + 2 * eps) + 8 * f(x + eps) - 8 * f(x - eps) + f(x - 2 * eps)) / (12 * eps);
}

}  // namespace ovdg::test

#endif
