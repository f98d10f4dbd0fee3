#ifndef OVDG_MESH_BASIS_HPP
#define OVDG_MESH_BASIS_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ovdg {

/// Partition of [a,b] into N cells I_j = [x_{j-1/2}, x_{j+1/2}].
class Mesh1D {
 public:
  static Mesh1D uniform(double a, double b, int n_cells);
  /// Nonuniform mesh from an explicit, strictly increasing node list.
  static Mesh1D from_nodes(std::vector<double> nodes);

  int size() const { return static_cast<int>(sizes_.size()); }
  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double length() const { return b() - a(); }
  /// Largest cell size.
  double h() const { return hmax_; }
  double h(int j) const { return sizes_[j]; }
  double left(int j) const { return nodes_[j]; }
  double right(int j) const { return nodes_[j + 1]; }
  double center(int j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
  std::span<const double> nodes() const { return nodes_; }

  /// Cell containing x (the right cell on an interior node); clamps to the ends.
  int locate(double x) const;
  double to_local(int j, double x) const { return 2.0 * (x - center(j)) / sizes_[j]; }
  double to_global(int j, double xi) const { return center(j) + 0.5 * sizes_[j] * xi; }

 private:
  explicit Mesh1D(std::vector<double> nodes);
  std::vector<double> nodes_;
  std::vector<double> sizes_;
  double hmax_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

MeshPtr build_mesh(double a, double b, int n_cells);

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule on [-1,1], 1 <= n <= 16.
const QuadRule& gauss_rule(int n);

/// Legendre polynomials P_0..P_k at xi (out.size() == k+1).
void legendre_values(double xi, std::span<double> out);
/// Legendre values and their xi-derivatives.
void legendre_values_and_derivatives(double xi, std::span<double> p, std::span<double> dp);

/// Reference basis \hat P_m = sqrt(2m+1) P_m sampled on a Gauss rule.
/// On cell j, phi_m(x) = \hat P_m(xi) / sqrt(h_j).
class BasisTable {
 public:
  BasisTable(int degree, int n_quad);

  int degree() const { return k_; }
  int n_modes() const { return k_ + 1; }
  int n_quad() const { return rule_->size(); }
  const QuadRule& rule() const { return *rule_; }

  double value(int q, int m) const { return val_[q * (k_ + 1) + m]; }
  double deriv(int q, int m) const { return der_[q * (k_ + 1) + m]; }
  double at_left(int m) const { return left_[m]; }
  double at_right(int m) const { return right_[m]; }
  /// D_{mn} = \int_{-1}^{1} \hat P_n \hat P_m' d\xi; (phi_n, phi_m')_{I_j} = D_{mn} / h_j.
  double stiffness(int m, int n) const { return stiff_[m * (k_ + 1) + n]; }

 private:
  int k_;
  const QuadRule* rule_;
  std::vector<double> val_, der_, left_, right_, stiff_;
};

/// Piecewise polynomial of degree k in the per-cell orthonormal Legendre basis.
class DGField {
 public:
  DGField() = default;
  DGField(MeshPtr mesh, int degree);
  DGField(MeshPtr mesh, int degree, std::vector<double> coeffs);

  const Mesh1D& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return k_; }
  int n_modes() const { return k_ + 1; }
  int n_cells() const { return mesh_->size(); }

  double& operator()(int j, int m) { return coeffs_[j * (k_ + 1) + m]; }
  double operator()(int j, int m) const { return coeffs_[j * (k_ + 1) + m]; }
  std::span<double> cell(int j) { return {coeffs_.data() + j * (k_ + 1), static_cast<size_t>(k_ + 1)}; }
  std::span<const double> cell(int j) const {
    return {coeffs_.data() + j * (k_ + 1), static_cast<size_t>(k_ + 1)};
  }
  std::vector<double>& coeffs() { return coeffs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double evaluate(double x) const;
  double evaluate_local(int j, double xi) const;
  double left_trace(int j) const;   // u^+_{j-1/2}
  double right_trace(int j) const;  // u^-_{j+1/2}
  double cell_average(int j) const;
  double integral() const;

  /// Same function in a different degree: truncation (L2 projection) or zero padding.
  DGField with_degree(int degree) const;

  DGField& operator+=(const DGField& other);
  DGField& operator-=(const DGField& other);
  DGField& operator*=(double s);

 private:
  void check_compatible(const DGField& other) const;
  MeshPtr mesh_;
  int k_ = 0;
  std::vector<double> coeffs_;
};

DGField operator+(DGField a, const DGField& b);
DGField operator-(DGField a, const DGField& b);
DGField operator*(double s, DGField a);
DGField operator*(DGField a, double s);
bool is_finite(const DGField& u);

using ScalarFn = std::function<double(double)>;

inline int default_quad_points(int degree) { return degree + 3; }

/// Standard L2 projection; n_quad <= 0 selects k+3 points.
DGField l2_project(const ScalarFn& f, const MeshPtr& mesh, int degree, int n_quad = 0);

enum class Side { Left, Right };

/// One-sided projections: Side::Right is P^- (matches f at x_{j+1/2}^-),
/// Side::Left is P^+ (matches f at x_{j-1/2}^+). Both are L2-orthogonal to P^{k-1}.
DGField project_onesided(const ScalarFn& f, const MeshPtr& mesh, int degree, Side side, int n_quad = 0);

/// Interface values at nodes x_0..x_N: minus[i] from the left cell, plus[i] from the right cell.
/// Without periodic wrap the missing outer trace copies the interior one.
struct InterfaceTraces {
  std::vector<double> minus;
  std::vector<double> plus;
  double jump(int i) const { return plus[i] - minus[i]; }
  double average(int i) const { return 0.5 * (plus[i] + minus[i]); }
};

InterfaceTraces traces(const DGField& u, bool periodic);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// L2 by per-cell Gauss quadrature, L-infinity sampled at quadrature points and both cell ends.
ErrorNorms error_norms(const DGField& u_h, const ScalarFn& exact, int n_quad = 0);

double l2_inner(const DGField& u, const DGField& v);
double l2_norm(const DGField& u);

/// Continuous degree-(k+1) antiderivative V with V' = u cellwise and V(a) = left_value.
DGField antiderivative(const DGField& u, double left_value);

/// Cellwise derivative (broken), degree max(k-1, 0).
DGField cellwise_derivative(const DGField& u);

}  // namespace ovdg

#endif
