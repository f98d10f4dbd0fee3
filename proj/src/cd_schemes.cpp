#include "ovdg/cd_schemes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ovdg {

bool is_finite(const CDVars& v) { return is_finite(v.q) && is_finite(v.omega); }

namespace {

double boundary_value(const CDConfig& cfg, double s) { return cfg.u_boundary ? cfg.u_boundary(s) : 0.0; }

// B_mn = -P_n(-1) P_m(-1) - D_mn on the reference cell; the cell block is B / h.
const Eigen::MatrixXd& sweep_inverse(int k) {
  static thread_local std::vector<Eigen::MatrixXd> cache;
  if (static_cast<int>(cache.size()) <= k) cache.resize(k + 1);
  Eigen::MatrixXd& inv = cache[k];
  if (inv.size() == 0) {
    const BasisTable basis(k, default_quad_points(k));
    const int nm = k + 1;
    Eigen::MatrixXd b(nm, nm);
    for (int m = 0; m < nm; ++m)
      for (int n = 0; n < nm; ++n) b(m, n) = -basis.at_left(n) * basis.at_left(m) - basis.stiffness(m, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) throw std::logic_error("u-recovery cell block is singular");
    inv = lu.inverse();
  }
  return inv;
}

}  // namespace

DGField dg_weak_derivative(const DGField& u, double u_right_boundary) {
  const int k = u.degree();
  const int n = u.n_cells();
  const BasisTable basis(k, default_quad_points(k));
  DGField w(u.mesh_ptr(), k);
  for (int j = 0; j < n; ++j) {
    const double h = u.mesh().h(j);
    const double sh = std::sqrt(h);
    const double right_flux = j + 1 < n ? u.left_trace(j + 1) : u_right_boundary;
    const double left_flux = u.left_trace(j);
    for (int m = 0; m < k + 1; ++m) {
      double vol = 0.0;
      for (int l = 0; l < m; ++l) vol += basis.stiffness(m, l) * u(j, l);
      w(j, m) = (right_flux * basis.at_right(m) - left_flux * basis.at_left(m)) / sh - vol / h;
    }
  }
  return w;
}

DGField recover_u_dg(const DGField& omega, double s, const CDConfig& cfg) {
  const int k = omega.degree();
  const int nm = k + 1;
  const int n = omega.n_cells();
  const BasisTable basis(k, default_quad_points(k));
  const Eigen::MatrixXd& inv = sweep_inverse(k);
  DGField u(omega.mesh_ptr(), k);
  double right_flux = boundary_value(cfg, s);
  Eigen::VectorXd rhs(nm);
  for (int j = n - 1; j >= 0; --j) {
    const double h = omega.mesh().h(j);
    const double sh = std::sqrt(h);
    for (int m = 0; m < nm; ++m) rhs[m] = h * omega(j, m) - sh * right_flux * basis.at_right(m);
    const Eigen::VectorXd c = inv * rhs;
    for (int m = 0; m < nm; ++m) u(j, m) = c[m];
    right_flux = u.left_trace(j);
  }
  return u;
}

DGField recover_u_integration(const DGField& omega, double s, const CDConfig& cfg) {
  DGField u = antiderivative(omega, 0.0);
  const double shift = boundary_value(cfg, s) - u.right_trace(u.n_cells() - 1);
  for (int j = 0; j < u.n_cells(); ++j) u(j, 0) += shift * std::sqrt(u.mesh().h(j));
  return u;
}

CDOperator::CDOperator(MeshPtr mesh, int degree, CDConfig cfg)
    : mesh_(std::move(mesh)), k_(degree), cfg_(std::move(cfg)) {
  if (k_ < 0) throw std::invalid_argument("CD degree must be >= 0");
  // q u has degree 3k+1 and is tested against degree k.
  nq_ = std::max(default_quad_points(k_), (3 * k_ + 4) / 2 + 1);
}

DGField CDOperator::recover_u(const DGField& omega, double s) const {
  return cfg_.scheme == CDScheme::DG ? recover_u_dg(omega, s, cfg_) : recover_u_integration(omega, s, cfg_);
}

CDVars CDOperator::rhs_given_u(const CDVars& v, const DGField& u) const {
  const Mesh1D& mesh = *mesh_;
  const QuadRule& rule = gauss_rule(nq_);
  DGField dw(mesh_, k_);
  std::vector<double> p(k_ + 1);
  for (int j = 0; j < mesh.size(); ++j) {
    const double sh = std::sqrt(mesh.h(j));
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double qv = v.q.evaluate_local(j, xi);
      const double uv = u.evaluate_local(j, xi);
      const double g = -cfg_.gamma * qv * uv - cfg_.c * (1.0 - qv);
      legendre_values(xi, p);
      const double w = g * rule.weights[q] * 0.5 * sh;
      for (int m = 0; m <= k_; ++m) dw(j, m) += w * std::sqrt(2.0 * m + 1.0) * p[m];
    }
  }
  return {v.omega, std::move(dw)};
}

CDVars CDOperator::rhs(const CDVars& v, double s) const { return rhs_given_u(v, recover_u(v.omega, s)); }

CDVars rhs_cd(const CDState& state, const CDConfig& cfg) {
  return CDOperator(state.q.mesh_ptr(), state.q.degree(), cfg).rhs_given_u({state.q, state.omega}, state.u);
}

std::vector<ProfilePoint> hodograph_profile(const CDState& state, double x_ref, int samples_per_cell) {
  if (samples_per_cell < 1) throw std::invalid_argument("hodograph_profile needs samples_per_cell >= 1");
  const DGField x = antiderivative(state.q, x_ref);
  std::vector<ProfilePoint> out;
  out.reserve(static_cast<size_t>(state.q.n_cells()) * samples_per_cell + 1);
  const int last = state.q.n_cells() - 1;
  for (int j = 0; j <= last; ++j) {
    const int count = samples_per_cell + (j == last ? 1 : 0);
    for (int i = 0; i < count; ++i) {
      const double xi = -1.0 + 2.0 * i / samples_per_cell;
      out.push_back({state.q.mesh().to_global(j, xi), x.evaluate_local(j, xi), state.u.evaluate_local(j, xi),
                     state.q.evaluate_local(j, xi)});
    }
  }
  return out;
}

std::string to_string(CDScheme s) { return s == CDScheme::DG ? "cd-dg" : "cd-int"; }

}  // namespace ovdg
