#include "ovdg/mesh_basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ovdg {

// ---------------------------------------------------------------------------
// Mesh1D

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least one cell");
  sizes_.resize(nodes_.size() - 1);
  for (size_t j = 0; j + 1 < nodes_.size(); ++j) {
    sizes_[j] = nodes_[j + 1] - nodes_[j];
    if (!(sizes_[j] > 0.0)) throw std::invalid_argument("mesh nodes must be strictly increasing");
    hmax_ = std::max(hmax_, sizes_[j]);
  }
}

Mesh1D Mesh1D::uniform(double a, double b, int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("mesh needs N >= 1 cells");
  if (!(a < b)) throw std::invalid_argument("mesh needs a < b");
  std::vector<double> nodes(n_cells + 1);
  const double h = (b - a) / n_cells;
  for (int i = 0; i <= n_cells; ++i) nodes[i] = a + h * i;
  nodes.back() = b;
  return Mesh1D(std::move(nodes));
}

Mesh1D Mesh1D::from_nodes(std::vector<double> nodes) { return Mesh1D(std::move(nodes)); }

int Mesh1D::locate(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  int j = static_cast<int>(it - nodes_.begin()) - 1;
  return std::clamp(j, 0, size() - 1);
}

MeshPtr build_mesh(double a, double b, int n_cells) {
  return std::make_shared<const Mesh1D>(Mesh1D::uniform(a, b, n_cells));
}

// ---------------------------------------------------------------------------
// Legendre polynomials and Gauss rules

void legendre_values(double xi, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (n == 0) return;
  out[0] = 1.0;
  if (n > 1) out[1] = xi;
  for (int m = 1; m + 1 < n; ++m) out[m + 1] = ((2 * m + 1) * xi * out[m] - m * out[m - 1]) / (m + 1);
}

void legendre_values_and_derivatives(double xi, std::span<double> p, std::span<double> dp) {
  legendre_values(xi, p);
  const int n = static_cast<int>(p.size());
  if (n == 0) return;
  dp[0] = 0.0;
  if (n > 1) dp[1] = 1.0;
  // P'_{m+1} = P'_{m-1} + (2m+1) P_m
  for (int m = 1; m + 1 < n; ++m) dp[m + 1] = dp[m - 1] + (2 * m + 1) * p[m];
}

namespace {

QuadRule compute_gauss(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> p(n + 1), dp(n + 1);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre_values_and_derivatives(x, p, dp);
      const double dx = p[n] / dp[n];
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_values_and_derivatives(x, p, dp);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp[n] * dp[n]);
  }
  return rule;
}

constexpr int kMaxGauss = 16;

}  // namespace

const QuadRule& gauss_rule(int n) {
  if (n < 1 || n > kMaxGauss) throw std::invalid_argument("unsupported Gauss rule size " + std::to_string(n));
  static const std::array<QuadRule, kMaxGauss> rules = [] {
    std::array<QuadRule, kMaxGauss> r;
    for (int i = 0; i < kMaxGauss; ++i) r[i] = compute_gauss(i + 1);
    return r;
  }();
  return rules[n - 1];
}

// ---------------------------------------------------------------------------
// BasisTable

BasisTable::BasisTable(int degree, int n_quad) : k_(degree), rule_(&gauss_rule(n_quad)) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  const int nm = k_ + 1;
  const int nq = rule_->size();
  val_.resize(nq * nm);
  der_.resize(nq * nm);
  std::vector<double> p(nm), dp(nm);
  for (int q = 0; q < nq; ++q) {
    legendre_values_and_derivatives(rule_->nodes[q], p, dp);
    for (int m = 0; m < nm; ++m) {
      const double s = std::sqrt(2.0 * m + 1.0);
      val_[q * nm + m] = s * p[m];
      der_[q * nm + m] = s * dp[m];
    }
  }
  left_.resize(nm);
  right_.resize(nm);
  for (int m = 0; m < nm; ++m) {
    const double s = std::sqrt(2.0 * m + 1.0);
    right_[m] = s;
    left_[m] = (m % 2 == 0) ? s : -s;
  }
  // Exact: \int P_n P_m' = 2 when m > n and m+n odd.
  stiff_.assign(nm * nm, 0.0);
  for (int m = 0; m < nm; ++m)
    for (int n = 0; n < m; ++n)
      if ((m + n) % 2 == 1) stiff_[m * nm + n] = 2.0 * std::sqrt((2.0 * m + 1.0) * (2.0 * n + 1.0));
}

// ---------------------------------------------------------------------------
// DGField

DGField::DGField(MeshPtr mesh, int degree) : mesh_(std::move(mesh)), k_(degree) {
  if (!mesh_) throw std::invalid_argument("DGField needs a mesh");
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  coeffs_.assign(static_cast<size_t>(mesh_->size()) * (k_ + 1), 0.0);
}

DGField::DGField(MeshPtr mesh, int degree, std::vector<double> coeffs) : DGField(std::move(mesh), degree) {
  if (coeffs.size() != coeffs_.size()) throw std::invalid_argument("coefficient array does not match (N, k+1)");
  coeffs_ = std::move(coeffs);
}

double DGField::evaluate_local(int j, double xi) const {
  double p_prev = 1.0, p = xi;
  double sum = (*this)(j, 0);
  if (k_ >= 1) sum += (*this)(j, 1) * std::sqrt(3.0) * xi;
  for (int m = 1; m < k_; ++m) {
    const double p_next = ((2 * m + 1) * xi * p - m * p_prev) / (m + 1);
    p_prev = p;
    p = p_next;
    sum += (*this)(j, m + 1) * std::sqrt(2.0 * (m + 1) + 1.0) * p;
  }
  return sum / std::sqrt(mesh_->h(j));
}

double DGField::evaluate(double x) const {
  const int j = mesh_->locate(x);
  return evaluate_local(j, mesh_->to_local(j, x));
}

double DGField::right_trace(int j) const {
  double sum = 0.0;
  for (int m = 0; m <= k_; ++m) sum += (*this)(j, m) * std::sqrt(2.0 * m + 1.0);
  return sum / std::sqrt(mesh_->h(j));
}

double DGField::left_trace(int j) const {
  double sum = 0.0;
  for (int m = 0; m <= k_; ++m) sum += (m % 2 == 0 ? 1.0 : -1.0) * (*this)(j, m) * std::sqrt(2.0 * m + 1.0);
  return sum / std::sqrt(mesh_->h(j));
}

double DGField::cell_average(int j) const { return (*this)(j, 0) / std::sqrt(mesh_->h(j)); }

double DGField::integral() const {
  double sum = 0.0;
  for (int j = 0; j < n_cells(); ++j) sum += (*this)(j, 0) * std::sqrt(mesh_->h(j));
  return sum;
}

DGField DGField::with_degree(int degree) const {
  DGField out(mesh_, degree);
  const int nm = std::min(degree, k_) + 1;
  for (int j = 0; j < n_cells(); ++j)
    for (int m = 0; m < nm; ++m) out(j, m) = (*this)(j, m);
  return out;
}

void DGField::check_compatible(const DGField& other) const {
  if (k_ != other.k_ || coeffs_.size() != other.coeffs_.size())
    throw std::invalid_argument("DGField arithmetic on mismatched spaces");
}

DGField& DGField::operator+=(const DGField& other) {
  check_compatible(other);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

DGField& DGField::operator-=(const DGField& other) {
  check_compatible(other);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

DGField& DGField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

DGField operator+(DGField a, const DGField& b) { return a += b; }
DGField operator-(DGField a, const DGField& b) { return a -= b; }
DGField operator*(double s, DGField a) { return a *= s; }
DGField operator*(DGField a, double s) { return a *= s; }

bool is_finite(const DGField& u) {
  return std::all_of(u.coeffs().begin(), u.coeffs().end(), [](double c) { return std::isfinite(c); });
}

// ---------------------------------------------------------------------------
// Projections

DGField l2_project(const ScalarFn& f, const MeshPtr& mesh, int degree, int n_quad) {
  const BasisTable basis(degree, n_quad > 0 ? n_quad : default_quad_points(degree));
  const auto& rule = basis.rule();
  DGField out(mesh, degree);
  for (int j = 0; j < mesh->size(); ++j) {
    const double h = mesh->h(j);
    const double scale = 0.5 * std::sqrt(h);  // (h/2) / sqrt(h)
    for (int q = 0; q < basis.n_quad(); ++q) {
      const double fq = f(mesh->to_global(j, rule.nodes[q])) * rule.weights[q] * scale;
      for (int m = 0; m <= degree; ++m) out(j, m) += fq * basis.value(q, m);
    }
  }
  return out;
}

DGField project_onesided(const ScalarFn& f, const MeshPtr& mesh, int degree, Side side, int n_quad) {
  DGField out = degree > 0 ? l2_project(f, mesh, degree - 1, n_quad > 0 ? n_quad : default_quad_points(degree))
                                 .with_degree(degree)
                           : DGField(mesh, 0);
  const double top = std::sqrt(2.0 * degree + 1.0);
  for (int j = 0; j < mesh->size(); ++j) {
    const double sh = std::sqrt(mesh->h(j));
    const double x = side == Side::Right ? mesh->right(j) : mesh->left(j);
    const double trace = side == Side::Right ? out.right_trace(j) : out.left_trace(j);
    const double top_at_end = (side == Side::Left && degree % 2 == 1) ? -top : top;
    out(j, degree) = (f(x) - trace) * sh / top_at_end;
  }
  return out;
}

InterfaceTraces traces(const DGField& u, bool periodic) {
  const int n = u.n_cells();
  InterfaceTraces tr;
  tr.minus.resize(n + 1);
  tr.plus.resize(n + 1);
  for (int j = 0; j < n; ++j) {
    tr.plus[j] = u.left_trace(j);
    tr.minus[j + 1] = u.right_trace(j);
  }
  if (periodic) {
    tr.minus[0] = tr.minus[n];
    tr.plus[n] = tr.plus[0];
  } else {
    tr.minus[0] = tr.plus[0];
    tr.plus[n] = tr.minus[n];
  }
  return tr;
}

ErrorNorms error_norms(const DGField& u_h, const ScalarFn& exact, int n_quad) {
  const Mesh1D& mesh = u_h.mesh();
  const QuadRule& rule = gauss_rule(n_quad > 0 ? n_quad : default_quad_points(u_h.degree()));
  ErrorNorms e;
  double sum = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double d = u_h.evaluate_local(j, xi) - exact(mesh.to_global(j, xi));
      sum += rule.weights[q] * 0.5 * mesh.h(j) * d * d;
      e.linf = std::max(e.linf, std::abs(d));
    }
    e.linf = std::max(e.linf, std::abs(u_h.left_trace(j) - exact(mesh.left(j))));
    e.linf = std::max(e.linf, std::abs(u_h.right_trace(j) - exact(mesh.right(j))));
  }
  e.l2 = std::sqrt(sum);
  return e;
}

double l2_inner(const DGField& u, const DGField& v) {
  if (&u.mesh() != &v.mesh() && u.n_cells() != v.n_cells())
    throw std::invalid_argument("l2_inner on different meshes");
  const int nm = std::min(u.degree(), v.degree()) + 1;
  double sum = 0.0;
  for (int j = 0; j < u.n_cells(); ++j)
    for (int m = 0; m < nm; ++m) sum += u(j, m) * v(j, m);
  return sum;
}

double l2_norm(const DGField& u) { return std::sqrt(l2_inner(u, u)); }

DGField antiderivative(const DGField& u, double left_value) {
  const int k = u.degree();
  const Mesh1D& mesh = u.mesh();
  DGField out(u.mesh_ptr(), k + 1);
  std::vector<double> g(k + 2);
  double v_left = left_value;
  for (int j = 0; j < mesh.size(); ++j) {
    const double sh = std::sqrt(mesh.h(j));
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = v_left;
    // \int_{-1}^{xi} P_0 = P_0 + P_1;  \int_{-1}^{xi} P_m = (P_{m+1} - P_{m-1}) / (2m+1)
    const double a0 = 0.5 * sh * u(j, 0);
    g[0] += a0;
    g[1] += a0;
    for (int m = 1; m <= k; ++m) {
      const double am = 0.5 * sh * u(j, m) * std::sqrt(2.0 * m + 1.0) / (2.0 * m + 1.0);
      g[m + 1] += am;
      g[m - 1] -= am;
    }
    double v_right = 0.0;
    for (int n = 0; n <= k + 1; ++n) {
      out(j, n) = g[n] * sh / std::sqrt(2.0 * n + 1.0);
      v_right += g[n];
    }
    v_left = v_right;
  }
  return out;
}

DGField cellwise_derivative(const DGField& u) {
  const int k = u.degree();
  DGField out(u.mesh_ptr(), std::max(k - 1, 0));
  if (k == 0) return out;
  for (int j = 0; j < u.n_cells(); ++j) {
    const double h = u.mesh().h(j);
    for (int n = 0; n < k; ++n) {
      double sum = 0.0;
      for (int m = n + 1; m <= k; m += 2) sum += u(j, m) * std::sqrt(2.0 * m + 1.0);
      out(j, n) = (2.0 / h) * std::sqrt(2.0 * n + 1.0) * sum;
    }
  }
  return out;
}

}  // namespace ovdg
