#ifndef OVDG_OV_SCHEMES_HPP
#define OVDG_OV_SCHEMES_HPP

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "ovdg/mesh_basis.hpp"

namespace ovdg {

enum class OVScheme { EnergyDG, EnergyIntegrationDG, HamiltonianDG };

/// Constraint closing v_x = u. ZeroMean implies periodic boundaries for both u and v.
enum class VConstraint { ZeroMean, DirichletLeft, DirichletRight };

using SourceFn = std::function<double(double x, double t)>;

struct OVConfig {
  double gamma = 1.0;
  OVScheme scheme = OVScheme::EnergyDG;
  VConstraint constraint = VConstraint::ZeroMean;
  SourceFn source;  // empty: no forcing

  bool periodic() const { return constraint == VConstraint::ZeroMean; }
};

/// The periodic v-system has a nontrivial kernel and was solved without augmentation.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// v_x = u has no periodic solution because u_h has nonzero mean.
class IncompatibleDatum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VFlux { Upwind, Central };

/// Factorized global operator of  <v^, psi> - (v, psi_x) = (u, psi)  over all cells.
///
/// Upwind uses v^ = v^- for gamma > 0 and v^+ for gamma < 0; Central uses {v}.
/// Under ZeroMean the system is bordered by its kernel (the constant, plus the
/// odd/even grid mode the central flux admits for even N or odd k) so the solve
/// returns the minimum-norm solution, which has zero mean.
class AuxSolve {
 public:
  AuxSolve(MeshPtr mesh, int degree, double gamma, VFlux flux, VConstraint constraint, bool augment = true);
  ~AuxSolve();
  AuxSolve(AuxSolve&&) noexcept;
  AuxSolve& operator=(AuxSolve&&) noexcept;

  DGField solve(const DGField& u) const;
  /// Moments (A v)_{j,m} of the left-hand side, for consistency checks.
  DGField apply(const DGField& v) const;
  /// Dimension of the kernel used for the bordering (0 when not periodic).
  int kernel_dimension() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double lax_friedrichs(double u_left, double u_right, double alpha);
double compute_alpha(const DGField& u);

/// Energy-stable DG auxiliary variable (upwind DG solve). Builds a fresh factorization.
DGField solve_v_dg(const DGField& u, const OVConfig& cfg);
/// Integration DG auxiliary variable: exact continuous antiderivative of degree k+1,
/// anchored at v(b) = 0 (ZeroMean, DirichletRight) or v(a) = 0 (DirichletLeft);
/// ZeroMean then subtracts the mean.
DGField recover_v_integration(const DGField& u, const OVConfig& cfg);

/// Semi-discrete OV operator with the auxiliary factorization cached.
class OVOperator {
 public:
  OVOperator(MeshPtr mesh, int degree, OVConfig cfg);

  DGField rhs(const DGField& u, double t) const;
  /// v_h from the active scheme's auxiliary relation.
  DGField auxiliary(const DGField& u) const;
  /// Central-flux solve applied to arbitrary data (used for v_t in the Hamiltonian check).
  DGField central_solve(const DGField& data) const;

  const OVConfig& config() const { return cfg_; }
  int degree() const { return k_; }
  const MeshPtr& mesh() const { return mesh_; }

 private:
  DGField energy_rhs(const DGField& u, double t) const;
  DGField hamiltonian_rhs(const DGField& u, double t) const;

  MeshPtr mesh_;
  int k_;
  OVConfig cfg_;
  BasisTable basis_;
  std::shared_ptr<const AuxSolve> aux_;
};

DGField rhs_energy(const DGField& u, double t, const OVConfig& cfg);
/// Central-flux scheme; the optional source enters as (g(., t), phi) exactly as in rhs_energy.
DGField rhs_hamiltonian(const DGField& u, const OVConfig& cfg, double t = 0.0);

/// E = \int u^2.
double energy(const DGField& u);
/// H = \int -u^3/6 + (gamma/2) v^2; gamma = 1 is the classical form.
double hamiltonian(const DGField& u, const DGField& v, double gamma = 1.0);

std::string to_string(OVScheme s);
std::string to_string(VConstraint c);

}  // namespace ovdg

#endif
