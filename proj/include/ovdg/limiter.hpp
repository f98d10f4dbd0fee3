#ifndef OVDG_LIMITER_HPP
#define OVDG_LIMITER_HPP

#include <vector>

#include "ovdg/mesh_basis.hpp"

namespace ovdg {

struct LimiterConfig {
  bool enabled = false;
  double M = 1.0;  // TVB bound: deviations below M h^2 are left alone
  bool periodic = true;
  /// Relative slack of the troubled-cell test.
  double tolerance = 1e-10;
};

/// Common sign -> that sign times the smallest magnitude, otherwise 0.
double minmod(double a1, double a2, double a3);
/// TVB-corrected minmod: returns a1 when |a1| <= M h^2.
double minmod_tvb(double a1, double a2, double a3, double M, double h);

/// Cells whose interface deviations the TVB minmod would modify.
std::vector<int> troubled_cells(const DGField& u, const LimiterConfig& cfg);

/// Cockburn-Shu TVB limiter. Cell averages are preserved; troubled cells are
/// replaced by a linear polynomial whose slope is minmod-limited against the
/// neighbouring average differences.
DGField tvb_limit(const DGField& u, const LimiterConfig& cfg);

}  // namespace ovdg

#endif
