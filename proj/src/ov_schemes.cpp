#include "ovdg/ov_schemes.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <vector>

namespace ovdg {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// v^ at one node as a combination of the two adjacent traces.
struct NodeFlux {
  int left_cell = -1;  // cell whose right trace enters (weight w_minus)
  int right_cell = -1;
  double w_minus = 0.0;
  double w_plus = 0.0;
};

std::vector<NodeFlux> node_fluxes(int n, double gamma, VFlux flux, VConstraint constraint) {
  const bool periodic = constraint == VConstraint::ZeroMean;
  double wm = 0.5, wp = 0.5;
  if (flux == VFlux::Upwind) {
    if (gamma == 0.0) throw std::invalid_argument("upwind v-flux needs gamma != 0");
    wm = gamma > 0.0 ? 1.0 : 0.0;
    wp = 1.0 - wm;
    if ((gamma > 0.0 && constraint == VConstraint::DirichletRight) ||
        (gamma < 0.0 && constraint == VConstraint::DirichletLeft))
      throw std::invalid_argument("Dirichlet anchor for v must sit on the upwind side of the v-flux");
  }
  std::vector<NodeFlux> nodes(n + 1);
  for (int i = 1; i < n; ++i) nodes[i] = {i - 1, i, wm, wp};
  if (periodic) {
    nodes[0] = {n - 1, 0, wm, wp};
    nodes[n] = nodes[0];
  } else {
    if (constraint != VConstraint::DirichletLeft) nodes[0] = {-1, 0, 0.0, 1.0};
    if (constraint != VConstraint::DirichletRight) nodes[n] = {n - 1, -1, 1.0, 0.0};
  }
  return nodes;
}

SparseMat assemble(const Mesh1D& mesh, const BasisTable& basis, const std::vector<NodeFlux>& nodes,
                   bool periodic) {
  const int n = mesh.size();
  const int nm = basis.n_modes();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(n) * nm * nm * 5);
  for (int j = 0; j < n; ++j) {
    const double h = mesh.h(j);
    for (int m = 0; m < nm; ++m)
      for (int l = 0; l < nm; ++l) {
        const double d = basis.stiffness(m, l);
        if (d != 0.0) trip.emplace_back(j * nm + m, j * nm + l, -d / h);
      }
  }
  // Node i is the right end of cell i-1 and the left end of cell i.
  const int last = periodic ? n - 1 : n;
  for (int i = 0; i <= last; ++i) {
    const NodeFlux& f = nodes[i];
    const int row_cell_right_end = periodic ? (i + n - 1) % n : i - 1;  // test cell with the node on its right
    const int row_cell_left_end = periodic ? i % n : (i < n ? i : -1);
    auto add_trace_terms = [&](int row_cell, bool node_is_right_end) {
      if (row_cell < 0) return;
      const double row_scale = 1.0 / std::sqrt(mesh.h(row_cell));
      for (int m = 0; m < nm; ++m) {
        const double test = row_scale * (node_is_right_end ? basis.at_right(m) : -basis.at_left(m));
        if (f.left_cell >= 0 && f.w_minus != 0.0) {
          const double s = f.w_minus / std::sqrt(mesh.h(f.left_cell));
          for (int l = 0; l < nm; ++l)
            trip.emplace_back(row_cell * nm + m, f.left_cell * nm + l, test * s * basis.at_right(l));
        }
        if (f.right_cell >= 0 && f.w_plus != 0.0) {
          const double s = f.w_plus / std::sqrt(mesh.h(f.right_cell));
          for (int l = 0; l < nm; ++l)
            trip.emplace_back(row_cell * nm + m, f.right_cell * nm + l, test * s * basis.at_left(l));
        }
      }
    };
    add_trace_terms(row_cell_right_end, true);   // + v^_{j+1/2} phi_m(x_{j+1/2}^-)
    add_trace_terms(row_cell_left_end, false);   // - v^_{j-1/2} phi_m(x_{j-1/2}^+)
  }
  SparseMat a(n * nm, n * nm);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

struct AuxSolve::Impl {
  MeshPtr mesh;
  int k = 0;
  bool periodic = false;
  SparseMat a;
  Eigen::MatrixXd kernel;  // orthonormal columns; column 0 is the constant
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
};

AuxSolve::AuxSolve(MeshPtr mesh, int degree, double gamma, VFlux flux, VConstraint constraint, bool augment)
    : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.mesh = std::move(mesh);
  s.k = degree;
  s.periodic = constraint == VConstraint::ZeroMean;
  const Mesh1D& mesh_ref = *s.mesh;
  const BasisTable basis(degree, default_quad_points(degree));
  s.a = assemble(mesh_ref, basis, node_fluxes(mesh_ref.size(), gamma, flux, constraint), s.periodic);
  const int n = static_cast<int>(s.a.rows());
  const int nm = degree + 1;

  if (!s.periodic) {
    s.lu.compute(s.a);
    if (s.lu.info() != Eigen::Success) throw RankDeficiency("v-system is singular: " + s.lu.lastErrorMessage());
    return;
  }

  Eigen::VectorXd constant = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < mesh_ref.size(); ++j) constant[j * nm] = std::sqrt(mesh_ref.h(j));
  constant /= constant.norm();
  if (!augment) {
    const double residual = (s.a * constant).norm();
    if (residual <= 1e-10 * (1.0 + s.a.norm()))
      throw RankDeficiency("periodic v-system has the constants in its kernel; it needs the zero-mean augmentation");
  }

  std::vector<Eigen::VectorXd> basis_vectors{constant};
  if (flux == VFlux::Central) {
    Eigen::FullPivLU<Eigen::MatrixXd> dense(Eigen::MatrixXd(s.a));
    dense.setThreshold(1e-10);
    const Eigen::MatrixXd ker = dense.kernel();
    for (int c = 0; c < ker.cols(); ++c) {
      Eigen::VectorXd z = ker.col(c);
      for (const auto& b : basis_vectors) z -= b.dot(z) * b;
      for (const auto& b : basis_vectors) z -= b.dot(z) * b;
      if (z.norm() > 1e-8) basis_vectors.push_back(z / z.norm());
    }
  }
  const int p = static_cast<int>(basis_vectors.size());
  s.kernel.resize(n, p);
  for (int c = 0; c < p; ++c) s.kernel.col(c) = basis_vectors[c];

  std::vector<Triplet> trip;
  trip.reserve(s.a.nonZeros() + 2 * static_cast<size_t>(n) * p);
  for (int col = 0; col < s.a.outerSize(); ++col)
    for (SparseMat::InnerIterator it(s.a, col); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < n; ++r) {
      const double z = s.kernel(r, c);
      if (z == 0.0) continue;
      trip.emplace_back(r, n + c, z);
      trip.emplace_back(n + c, r, z);
    }
  SparseMat bordered(n + p, n + p);
  bordered.setFromTriplets(trip.begin(), trip.end());
  s.lu.compute(bordered);
  if (s.lu.info() != Eigen::Success)
    throw RankDeficiency("bordered v-system is singular: " + s.lu.lastErrorMessage());
}

AuxSolve::~AuxSolve() = default;
AuxSolve::AuxSolve(AuxSolve&&) noexcept = default;
AuxSolve& AuxSolve::operator=(AuxSolve&&) noexcept = default;

int AuxSolve::kernel_dimension() const { return static_cast<int>(impl_->kernel.cols()); }

DGField AuxSolve::solve(const DGField& u) const {
  const Impl& s = *impl_;
  const int n = static_cast<int>(s.a.rows());
  const DGField data = u.degree() == s.k ? u : u.with_degree(s.k);
  Eigen::Map<const Eigen::VectorXd> rhs_u(data.coeffs().data(), n);
  DGField v(s.mesh, s.k);
  if (!s.periodic) {
    Eigen::VectorXd x = s.lu.solve(rhs_u);
    std::copy(x.data(), x.data() + n, v.coeffs().begin());
    return v;
  }
  const int p = static_cast<int>(s.kernel.cols());
  Eigen::VectorXd rhs(n + p);
  rhs.head(n) = rhs_u;
  rhs.tail(p).setZero();
  Eigen::VectorXd x = s.lu.solve(rhs);
  const double mean_multiplier = x[n];
  if (std::abs(mean_multiplier) > 1e-9 * (1.0 + rhs_u.norm()))
    throw IncompatibleDatum("periodic v_x = u needs a mean-free u_h (mean multiplier " +
                            std::to_string(mean_multiplier) + ")");
  std::copy(x.data(), x.data() + n, v.coeffs().begin());
  return v;
}

DGField AuxSolve::apply(const DGField& v) const {
  const Impl& s = *impl_;
  const int n = static_cast<int>(s.a.rows());
  Eigen::Map<const Eigen::VectorXd> x(v.coeffs().data(), n);
  Eigen::VectorXd y = s.a * x;
  DGField out(s.mesh, s.k);
  std::copy(y.data(), y.data() + n, out.coeffs().begin());
  return out;
}

// ---------------------------------------------------------------------------

double lax_friedrichs(double u_left, double u_right, double alpha) {
  return 0.5 * (0.5 * u_right * u_right + 0.5 * u_left * u_left - alpha * (u_right - u_left));
}

double compute_alpha(const DGField& u) {
  const BasisTable basis(u.degree(), default_quad_points(u.degree()));
  double alpha = 0.0;
  for (int j = 0; j < u.n_cells(); ++j) {
    const double inv_sh = 1.0 / std::sqrt(u.mesh().h(j));
    for (int q = 0; q < basis.n_quad(); ++q) {
      double uq = 0.0;
      for (int m = 0; m < basis.n_modes(); ++m) uq += u(j, m) * basis.value(q, m);
      alpha = std::max(alpha, std::abs(uq * inv_sh));
    }
    alpha = std::max({alpha, std::abs(u.left_trace(j)), std::abs(u.right_trace(j))});
  }
  return alpha;
}

namespace {

void add_constant(DGField& v, double c) {
  for (int j = 0; j < v.n_cells(); ++j) v(j, 0) += c * std::sqrt(v.mesh().h(j));
}

}  // namespace

DGField solve_v_dg(const DGField& u, const OVConfig& cfg) {
  const AuxSolve aux(u.mesh_ptr(), u.degree(), cfg.gamma, VFlux::Upwind, cfg.constraint);
  return aux.solve(u);
}

DGField recover_v_integration(const DGField& u, const OVConfig& cfg) {
  DGField v = antiderivative(u, 0.0);
  if (cfg.constraint == VConstraint::DirichletLeft) return v;
  add_constant(v, -v.right_trace(v.n_cells() - 1));
  if (cfg.constraint == VConstraint::ZeroMean) add_constant(v, -v.integral() / v.mesh().length());
  return v;
}

// ---------------------------------------------------------------------------
// OVOperator

OVOperator::OVOperator(MeshPtr mesh, int degree, OVConfig cfg)
    : mesh_(std::move(mesh)), k_(degree), cfg_(std::move(cfg)), basis_(degree, default_quad_points(degree)) {
  switch (cfg_.scheme) {
    case OVScheme::EnergyDG:
      aux_ = std::make_shared<const AuxSolve>(mesh_, k_, cfg_.gamma, VFlux::Upwind, cfg_.constraint);
      break;
    case OVScheme::HamiltonianDG:
      aux_ = std::make_shared<const AuxSolve>(mesh_, k_, cfg_.gamma, VFlux::Central, cfg_.constraint);
      break;
    case OVScheme::EnergyIntegrationDG:
      break;
  }
}

DGField OVOperator::auxiliary(const DGField& u) const {
  if (cfg_.scheme == OVScheme::EnergyIntegrationDG) return recover_v_integration(u, cfg_);
  return aux_->solve(u);
}

DGField OVOperator::central_solve(const DGField& data) const {
  if (cfg_.scheme != OVScheme::HamiltonianDG) throw std::logic_error("central_solve needs the Hamiltonian scheme");
  return aux_->solve(data);
}

DGField OVOperator::rhs(const DGField& u, double t) const {
  return cfg_.scheme == OVScheme::HamiltonianDG ? hamiltonian_rhs(u, t) : energy_rhs(u, t);
}

DGField OVOperator::energy_rhs(const DGField& u, double t) const {
  const Mesh1D& mesh = *mesh_;
  const int n = mesh.size();
  const int nm = k_ + 1;
  const int nq = basis_.n_quad();
  const auto& rule = basis_.rule();
  const DGField v = auxiliary(u);
  const double alpha = compute_alpha(u);
  const InterfaceTraces tr = traces(u, cfg_.periodic());

  std::vector<double> fhat(n + 1);
  for (int i = 0; i <= n; ++i) fhat[i] = lax_friedrichs(tr.minus[i], tr.plus[i], alpha);

  DGField out(mesh_, k_);
  for (int j = 0; j < n; ++j) {
    const double sh = std::sqrt(mesh.h(j));
    auto c = u.cell(j);
    auto r = out.cell(j);
    for (int q = 0; q < nq; ++q) {
      double uq = 0.0;
      for (int m = 0; m < nm; ++m) uq += c[m] * basis_.value(q, m);
      uq /= sh;
      const double fw = 0.5 * uq * uq * rule.weights[q] / sh;
      double gw = 0.0;
      if (cfg_.source) gw = cfg_.source(mesh.to_global(j, rule.nodes[q]), t) * rule.weights[q] * 0.5 * sh;
      for (int m = 0; m < nm; ++m) r[m] += fw * basis_.deriv(q, m) + gw * basis_.value(q, m);
    }
    for (int m = 0; m < nm; ++m) {
      r[m] -= (fhat[j + 1] * basis_.at_right(m) - fhat[j] * basis_.at_left(m)) / sh;
      r[m] -= cfg_.gamma * v(j, m);
    }
  }
  return out;
}

DGField OVOperator::hamiltonian_rhs(const DGField& u, double t) const {
  const Mesh1D& mesh = *mesh_;
  const int n = mesh.size();
  const int nm = k_ + 1;
  const int nq = basis_.n_quad();
  const auto& rule = basis_.rule();

  DGField w(mesh_, k_);
  for (int j = 0; j < n; ++j) {
    const double sh = std::sqrt(mesh.h(j));
    auto c = u.cell(j);
    auto wc = w.cell(j);
    for (int q = 0; q < nq; ++q) {
      double uq = 0.0;
      for (int m = 0; m < nm; ++m) uq += c[m] * basis_.value(q, m);
      uq /= sh;
      const double fw = 0.5 * uq * uq * rule.weights[q] * 0.5 * sh;
      for (int m = 0; m < nm; ++m) wc[m] += fw * basis_.value(q, m);
    }
  }
  DGField out(mesh_, k_);
  if (cfg_.source) {
    for (int j = 0; j < n; ++j) {
      const double sh = std::sqrt(mesh.h(j));
      for (int q = 0; q < nq; ++q) {
        const double gw = cfg_.source(mesh.to_global(j, rule.nodes[q]), t) * rule.weights[q] * 0.5 * sh;
        for (int m = 0; m < nm; ++m) out(j, m) += gw * basis_.value(q, m);
      }
    }
  }
  const DGField v = aux_->solve(u);
  const InterfaceTraces tr = traces(w, cfg_.periodic());

  for (int j = 0; j < n; ++j) {
    const double h = mesh.h(j);
    const double sh = std::sqrt(h);
    auto wc = w.cell(j);
    auto r = out.cell(j);
    for (int m = 0; m < nm; ++m) {
      double vol = 0.0;
      for (int l = 0; l < m; ++l) vol += basis_.stiffness(m, l) * wc[l];
      r[m] += vol / h - (tr.average(j + 1) * basis_.at_right(m) - tr.average(j) * basis_.at_left(m)) / sh -
             cfg_.gamma * v(j, m);
    }
  }
  return out;
}

DGField rhs_energy(const DGField& u, double t, const OVConfig& cfg) {
  if (cfg.scheme == OVScheme::HamiltonianDG) throw std::invalid_argument("rhs_energy needs an energy-stable scheme");
  return OVOperator(u.mesh_ptr(), u.degree(), cfg).rhs(u, t);
}

DGField rhs_hamiltonian(const DGField& u, const OVConfig& cfg, double t) {
  if (cfg.scheme != OVScheme::HamiltonianDG) throw std::invalid_argument("rhs_hamiltonian needs HamiltonianDG");
  return OVOperator(u.mesh_ptr(), u.degree(), cfg).rhs(u, t);
}

// ---------------------------------------------------------------------------

double energy(const DGField& u) { return l2_inner(u, u); }

double hamiltonian(const DGField& u, const DGField& v, double gamma) {
  const int k = u.degree();
  const QuadRule& rule = gauss_rule(default_quad_points(k));
  double cubic = 0.0;
  for (int j = 0; j < u.n_cells(); ++j) {
    double cell = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double uq = u.evaluate_local(j, rule.nodes[q]);
      cell += rule.weights[q] * uq * uq * uq;
    }
    cubic += 0.5 * u.mesh().h(j) * cell;
  }
  return -cubic / 6.0 + 0.5 * gamma * l2_inner(v, v);
}

std::string to_string(OVScheme s) {
  switch (s) {
    case OVScheme::EnergyDG: return "energy-dg";
    case OVScheme::EnergyIntegrationDG: return "energy-int";
    case OVScheme::HamiltonianDG: return "hamiltonian";
  }
  return "?";
}

std::string to_string(VConstraint c) {
  switch (c) {
    case VConstraint::ZeroMean: return "zero-mean";
    case VConstraint::DirichletLeft: return "dirichlet-left";
    case VConstraint::DirichletRight: return "dirichlet-right";
  }
  return "?";
}

}  // namespace ovdg
