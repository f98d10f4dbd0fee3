#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ovdg/exact_solutions.hpp"
#include "ovdg/ov_schemes.hpp"
#include "ovdg/time_integration.hpp"
#include "test_util.hpp"

using namespace ovdg;
using std::numbers::pi;

namespace {

double sinx(double x) { return std::sin(x); }
double cosx(double x) { return std::cos(x); }

/// \int -u^2/2 * w by an exact Gauss rule for the cubic integrand.
double cubic_inner(const DGField& u, const DGField& w) {
  const auto& g = gauss_rule(std::min(16, (3 * u.degree()) / 2 + 2));
  double s = 0;
  for (int j = 0; j < u.n_cells(); ++j)
    for (int q = 0; q < g.size(); ++q) {
      const double uq = u.evaluate_local(j, g.nodes[q]);
      s += 0.5 * u.mesh().h(j) * g.weights[q] * (-0.5 * uq * uq) * w.evaluate_local(j, g.nodes[q]);
    }
  return s;
}

}  // namespace

TEST(Flux, LaxFriedrichsExamples) {
  EXPECT_DOUBLE_EQ(lax_friedrichs(2, 2, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(lax_friedrichs(2, 2, 5.0), 2.0);
  EXPECT_DOUBLE_EQ(lax_friedrichs(1, -1, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(lax_friedrichs(0, 0, 0), 0.0);
}

TEST(Flux, LaxFriedrichsMonotone) {
  const double alpha = 2.5;
  for (double a = -2; a <= 2; a += 0.25)
    for (double b = -2; b <= 2; b += 0.25) {
      EXPECT_GE(lax_friedrichs(a + 1e-3, b, alpha), lax_friedrichs(a, b, alpha));
      EXPECT_LE(lax_friedrichs(a, b + 1e-3, alpha), lax_friedrichs(a, b, alpha));
      EXPECT_DOUBLE_EQ(lax_friedrichs(a, a, alpha), 0.5 * a * a);
    }
}

TEST(Flux, AlphaExamples) {
  auto mesh = build_mesh(0, 2 * pi, 40);
  EXPECT_DOUBLE_EQ(compute_alpha(DGField(mesh, 2)), 0.0);
  EXPECT_NEAR(compute_alpha(l2_project(sinx, mesh, 2)), 1.0, 1e-3);
  EXPECT_NEAR(compute_alpha(l2_project([](double) { return -3.0; }, mesh, 1)), 3.0, 1e-14);
}

TEST(AuxDG, ZeroAndSine) {
  auto mesh = build_mesh(0, 2 * pi, 40);
  OVConfig cfg;
  DGField v0 = solve_v_dg(DGField(mesh, 2), cfg);
  for (double c : v0.coeffs()) EXPECT_EQ(c, 0.0);

  std::vector<double> e;
  for (int n : {20, 40, 80}) {
    DGField v = solve_v_dg(l2_project(sinx, build_mesh(0, 2 * pi, n), 2), cfg);
    e.push_back(test::l2_distance(v, [](double x) { return -std::cos(x); }));
    EXPECT_NEAR(v.integral(), 0.0, 1e-12);
  }
  EXPECT_LE(e[1], 1e-4);
  EXPECT_NEAR(std::log2(e[1] / e[2]), 3.0, 0.2);
}

TEST(AuxDG, IncompatibleDatum) {
  auto mesh = build_mesh(0, 1, 8);
  EXPECT_THROW(solve_v_dg(l2_project([](double) { return 1.0; }, mesh, 1), OVConfig{}), IncompatibleDatum);
}

TEST(AuxDG, SatisfiesWeakRelation) {
  std::mt19937 rng(4);
  for (double gamma : {1.0, -1.0})
    for (VFlux flux : {VFlux::Upwind, VFlux::Central})
      for (int k : {0, 1, 2}) {
        auto mesh = build_mesh(0, 1, 9);
        AuxSolve aux(mesh, k, gamma, flux, VConstraint::ZeroMean);
        DGField u = test::random_field(mesh, k, rng);
        DGField v = aux.solve(u);
        DGField Av = aux.apply(v);
        if (aux.kernel_dimension() == 1) {
          for (size_t i = 0; i < u.coeffs().size(); ++i) EXPECT_NEAR(Av.coeffs()[i], u.coeffs()[i], 1e-11);
        } else {
          EXPECT_NEAR(l2_inner(Av - u, Av), 0.0, 1e-11);
        }
        EXPECT_NEAR(v.integral(), 0.0, 1e-12);
      }
}

TEST(AuxDG, RankDeficiencyWithoutAugmentation) {
  auto mesh = build_mesh(0, 1, 8);
  std::mt19937 rng(1);
  DGField u = test::random_field(mesh, 1, rng);
  EXPECT_THROW(AuxSolve(mesh, 1, 1.0, VFlux::Upwind, VConstraint::ZeroMean, false).solve(u), RankDeficiency);
  EXPECT_THROW(AuxSolve(mesh, 1, 1.0, VFlux::Central, VConstraint::ZeroMean, false).solve(u), RankDeficiency);
}

TEST(AuxDG, CentralKernelDimension) {
  EXPECT_EQ(AuxSolve(build_mesh(0, 1, 8), 2, 1.0, VFlux::Central, VConstraint::ZeroMean).kernel_dimension(), 2);
  EXPECT_EQ(AuxSolve(build_mesh(0, 1, 9), 1, 1.0, VFlux::Central, VConstraint::ZeroMean).kernel_dimension(), 2);
  EXPECT_EQ(AuxSolve(build_mesh(0, 1, 9), 2, 1.0, VFlux::Central, VConstraint::ZeroMean).kernel_dimension(), 1);
  EXPECT_EQ(AuxSolve(build_mesh(0, 1, 8), 2, 1.0, VFlux::Upwind, VConstraint::ZeroMean).kernel_dimension(), 1);
}

TEST(AuxDG, DirichletUpwindAnchor) {
  auto mesh = build_mesh(0, pi, 32);
  OVConfig cfg;
  cfg.constraint = VConstraint::DirichletLeft;
  DGField v = solve_v_dg(l2_project(cosx, mesh, 2), cfg);
  EXPECT_LE(test::l2_distance(v, sinx), 1e-5);
  cfg.gamma = -1.0;
  cfg.constraint = VConstraint::DirichletRight;
  DGField w = solve_v_dg(l2_project(cosx, mesh, 2), cfg);
  EXPECT_LE(test::l2_distance(w, sinx), 1e-5);
  cfg.constraint = VConstraint::DirichletLeft;
  EXPECT_THROW(solve_v_dg(l2_project(cosx, mesh, 2), cfg), std::invalid_argument);
}

TEST(AuxIntegration, Examples) {
  auto unit = build_mesh(0, 1, 5);
  OVConfig cfg;
  DGField z = recover_v_integration(DGField(unit, 1), cfg);
  for (double c : z.coeffs()) EXPECT_NEAR(c, 0.0, 1e-15);

  cfg.constraint = VConstraint::DirichletRight;
  DGField v = recover_v_integration(l2_project([](double) { return 1.0; }, unit, 0), cfg);
  EXPECT_EQ(v.degree(), 1);
  EXPECT_LE(test::l2_distance(v, [](double x) { return x - 1; }), 1e-14);

  cfg.constraint = VConstraint::DirichletLeft;
  DGField w = recover_v_integration(l2_project([](double) { return 1.0; }, unit, 0), cfg);
  EXPECT_LE(test::l2_distance(w, [](double x) { return x; }), 1e-14);
}

TEST(AuxIntegration, OneSidedSineOrder) {
  OVConfig cfg;
  for (int k : {1, 2, 3}) {
    std::vector<double> e;
    for (int n : {20, 40, 80}) {
      auto mesh = build_mesh(0, 2 * pi, n);
      DGField v = recover_v_integration(project_onesided(sinx, mesh, k, Side::Right), cfg);
      EXPECT_NEAR(v.integral(), 0.0, 1e-13);
      for (int j = 1; j < n; ++j) EXPECT_NEAR(v.left_trace(j), v.right_trace(j - 1), 1e-13);
      e.push_back(test::l2_distance(v, [](double x) { return -std::cos(x); }));
    }
    EXPECT_NEAR(std::log2(e[1] / e[2]), k + 2, 0.15) << "k=" << k;
  }
}

TEST(EnergyRhs, ZeroIsFixedPoint) {
  auto mesh = build_mesh(0, 2 * pi, 10);
  for (OVScheme s : {OVScheme::EnergyDG, OVScheme::EnergyIntegrationDG}) {
    OVConfig cfg;
    cfg.scheme = s;
    const DGField r = rhs_energy(DGField(mesh, 2), 0.0, cfg);
    for (double c : r.coeffs()) EXPECT_EQ(c, 0.0);
  }
  OVConfig h;
  h.scheme = OVScheme::HamiltonianDG;
  const DGField r = rhs_hamiltonian(DGField(mesh, 2), h);
  for (double c : r.coeffs()) EXPECT_EQ(c, 0.0);
  EXPECT_THROW(rhs_energy(DGField(mesh, 2), 0.0, h), std::invalid_argument);
}

TEST(EnergyRhs, ManufacturedResidual) {
  for (int k : {0, 1, 2}) {
    std::vector<double> e;
    for (int n : {40, 80, 160}) {
      auto mesh = build_mesh(0, 2 * pi, n);
      OVConfig cfg;
      cfg.source = manufactured_source;
      DGField r = rhs_energy(l2_project(sinx, mesh, k), 0.0, cfg) - l2_project(cosx, mesh, k);
      e.push_back(l2_norm(r));
    }
    EXPECT_GE(std::log2(e[1] / e[2]), std::max(1, k) - 0.1) << "k=" << k;
  }
}

TEST(EnergyRhs, SemiDiscreteDissipation) {
  std::mt19937 rng(2024);
  for (OVScheme s : {OVScheme::EnergyDG, OVScheme::EnergyIntegrationDG})
    for (double gamma : {1.0, -1.0})
      for (int k : {0, 1, 2})
        for (int n : {8, 16}) {
          auto mesh = build_mesh(0, 1, n);
          OVConfig cfg;
          cfg.scheme = s;
          cfg.gamma = gamma;
          OVOperator op(mesh, k, cfg);
          for (int i = 0; i < 20; ++i) {
            DGField u = test::random_field(mesh, k, rng);
            const double d = 2 * l2_inner(u, op.rhs(u, 0.0));
            EXPECT_LE(d, 1e-10 * l2_norm(u) * l2_norm(u));
          }
        }
}

TEST(HamiltonianRhs, SemiDiscreteConservation) {
  std::mt19937 rng(7);
  for (double gamma : {1.0, -1.0})
    for (int k : {0, 1, 2})
      for (int n : {8, 16}) {
        auto mesh = build_mesh(0, 1, n);
        OVConfig cfg;
        cfg.scheme = OVScheme::HamiltonianDG;
        cfg.gamma = gamma;
        OVOperator op(mesh, k, cfg);
        for (int i = 0; i < 20; ++i) {
          DGField u = test::random_field(mesh, k, rng);
          DGField ut = op.rhs(u, 0.0);
          const double dH = cubic_inner(u, ut) + gamma * l2_inner(op.auxiliary(u), op.central_solve(ut));
          const double nu = l2_norm(u);
          EXPECT_LE(std::abs(dH), 1e-10 * (1 + nu * nu * nu));
        }
      }
}

TEST(Functionals, EnergyExamples) {
  auto mesh = build_mesh(0, 2 * pi, 40);
  EXPECT_EQ(energy(DGField(mesh, 2)), 0.0);
  EXPECT_NEAR(energy(l2_project(sinx, mesh, 2)), pi, 1e-6);
  EXPECT_NEAR(energy(l2_project([](double) { return 2.0; }, build_mesh(0, 1, 3), 1)), 4.0, 1e-14);
}

TEST(Functionals, HamiltonianExamples) {
  auto unit = build_mesh(0, 1, 4);
  EXPECT_EQ(hamiltonian(DGField(unit, 1), DGField(unit, 1)), 0.0);
  EXPECT_NEAR(hamiltonian(DGField(unit, 1), l2_project([](double) { return 1.0; }, unit, 1)), 0.5, 1e-14);
  auto mesh = build_mesh(0, 2 * pi, 40);
  DGField u = l2_project(sinx, mesh, 2);
  EXPECT_NEAR(hamiltonian(u, solve_v_dg(u, OVConfig{})), pi / 2, 1e-5);
  auto cube = [](double x) { return -std::pow(1 + x, 3) / 6 + 0.5 * 4.0; };
  const double ref = test::panel_integral(*unit, [&](int, double x) { return cube(x); });
  EXPECT_NEAR(hamiltonian(l2_project([](double x) { return 1 + x; }, unit, 1),
                          l2_project([](double) { return 2.0; }, unit, 1)),
              ref, 1e-12);
}

TEST(HamiltonianRun, DriftSmallAndThirdOrder) {
  auto mesh = build_mesh(0, 2 * pi, 40);
  OVConfig cfg;
  cfg.scheme = OVScheme::HamiltonianDG;
  OVOperator op(mesh, 2, cfg);
  auto drift = [&](double cfl) {
    DGField u0 = l2_project([](double x) { return 0.25 * std::sin(x); }, mesh, 2);
    const double H0 = hamiltonian(u0, op.auxiliary(u0), cfg.gamma);
    auto res = integrate(u0, [&](const DGField& s, double t) { return op.rhs(s, t); },
                         StepPlan::from_cfl(cfl, mesh->h(), 1.0));
    return std::abs(hamiltonian(res.state, op.auxiliary(res.state), cfg.gamma) - H0) / std::abs(H0);
  };
  const double d1 = drift(0.1), d2 = drift(0.05);
  EXPECT_LE(d1, 1e-6);
  EXPECT_NEAR(std::log2(d1 / d2), 3.0, 0.5);
}

TEST(EnergyRun, EnergyNonIncreasing) {
  auto mesh = build_mesh(0, 2 * pi, 40);
  for (OVScheme s : {OVScheme::EnergyDG, OVScheme::EnergyIntegrationDG}) {
    OVConfig cfg;
    cfg.scheme = s;
    OVOperator op(mesh, 1, cfg);
    std::vector<double> E;
    Observers<DGField> obs;
    obs.each_step = [&](long, double, const DGField& u) { E.push_back(energy(u)); };
    integrate(l2_project(sinx, mesh, 1), [&](const DGField& u, double t) { return op.rhs(u, t); },
              StepPlan::from_cfl(0.1, mesh->h(), 1.0), obs);
    for (size_t i = 1; i < E.size(); ++i) EXPECT_LE(E[i], E[i - 1] * (1 + 1e-10));
  }
}
