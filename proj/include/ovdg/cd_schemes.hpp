#ifndef OVDG_CD_SCHEMES_HPP
#define OVDG_CD_SCHEMES_HPP

#include <functional>
#include <string>
#include <vector>

#include "ovdg/mesh_basis.hpp"

namespace ovdg {

enum class CDScheme { DG, Integration };

struct CDConfig {
  double gamma = -3.0;
  double c = 0.0;
  CDScheme scheme = CDScheme::DG;
  std::function<double(double s)> u_boundary;  // u(b, s); empty means 0
};

/// Evolved pair (q_h, omega_h) in the transformed coordinates (y, s).
struct CDVars {
  DGField q;
  DGField omega;

  CDVars& operator+=(const CDVars& o) {
    q += o.q;
    omega += o.omega;
    return *this;
  }
  CDVars& operator*=(double s) {
    q *= s;
    omega *= s;
    return *this;
  }
};

bool is_finite(const CDVars& v);

struct CDState {
  DGField q;
  DGField omega;
  DGField u;  // degree k (DG) or continuous degree k+1 (Integration)
};

/// Weak derivative with the u^+ flux closed by the boundary value at y = b:
/// (w, psi) = <u^+, psi> - (u, psi_y).
DGField dg_weak_derivative(const DGField& u, double u_right_boundary);

/// Inverse of dg_weak_derivative by a right-to-left cell sweep.
DGField recover_u_dg(const DGField& omega, double s, const CDConfig& cfg);
/// Continuous degree-(k+1) antiderivative of omega with u(b) = u_boundary(s).
DGField recover_u_integration(const DGField& omega, double s, const CDConfig& cfg);

class CDOperator {
 public:
  CDOperator(MeshPtr mesh, int degree, CDConfig cfg);

  DGField recover_u(const DGField& omega, double s) const;
  CDVars rhs(const CDVars& v, double s) const;
  /// Right-hand side with u supplied (no recovery), for consistency checks.
  CDVars rhs_given_u(const CDVars& v, const DGField& u) const;
  CDState state(const CDVars& v, double s) const { return {v.q, v.omega, recover_u(v.omega, s)}; }

  const CDConfig& config() const { return cfg_; }
  int degree() const { return k_; }
  const MeshPtr& mesh() const { return mesh_; }

 private:
  MeshPtr mesh_;
  int k_;
  CDConfig cfg_;
  int nq_;
};

CDVars rhs_cd(const CDState& state, const CDConfig& cfg);

struct ProfilePoint {
  double y;
  double x;
  double u;
  double q;
};

/// Parametric curve (x(y), u(y)) with x = x_ref + int_{y_min}^y q_h.
std::vector<ProfilePoint> hodograph_profile(const CDState& state, double x_ref, int samples_per_cell);

std::string to_string(CDScheme s);

}  // namespace ovdg

#endif
