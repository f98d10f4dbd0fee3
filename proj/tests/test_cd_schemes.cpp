#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ovdg/cd_schemes.hpp"
#include "ovdg/exact_solutions.hpp"
#include "ovdg/time_integration.hpp"
#include "test_util.hpp"

using namespace ovdg;

namespace {

ExpSumTau one_soliton() { return build_tau({{1.0}, 2.0, {0.0}}, 1); }

CDConfig soliton_config(const ExpSumTau& tau, CDScheme scheme) {
  CDConfig cfg;
  cfg.c = 2.0;
  cfg.scheme = scheme;
  cfg.u_boundary = [tau](double s) { return cd_exact(tau, 20.0, s).u; };
  return cfg;
}

CDVars project_exact(const ExpSumTau& tau, const MeshPtr& mesh, int k, double s) {
  return {l2_project([&](double y) { return cd_exact(tau, y, s).q; }, mesh, k),
          l2_project([&](double y) { return cd_exact(tau, y, s).omega; }, mesh, k)};
}

DGField constant(const MeshPtr& mesh, int k, double c) {
  return l2_project([c](double) { return c; }, mesh, k);
}

}  // namespace

TEST(CDRhs, BackgroundIsFixedPoint) {
  auto mesh = build_mesh(-1, 1, 6);
  for (double c : {-2.0, 0.0, 2.0}) {
    CDConfig cfg;
    cfg.c = c;
    CDState st{constant(mesh, 2, 1.0), DGField(mesh, 2), DGField(mesh, 2)};
    CDVars d = rhs_cd(st, cfg);
    for (int j = 0; j < 6; ++j)
      for (double xi : {-1.0, 0.0, 1.0}) {
        EXPECT_NEAR(d.q.evaluate_local(j, xi), 0.0, 1e-15);
        EXPECT_NEAR(d.omega.evaluate_local(j, xi), 0.0, 1e-14);
      }
  }
}

TEST(CDRhs, ZeroQ) {
  auto mesh = build_mesh(0, 1, 4);
  CDConfig cfg;
  cfg.c = 2.0;
  CDState st{DGField(mesh, 1), DGField(mesh, 1), DGField(mesh, 1)};
  CDVars d = rhs_cd(st, cfg);
  for (int j = 0; j < 4; ++j)
    for (double xi : {-1.0, 0.3, 1.0}) EXPECT_NEAR(d.omega.evaluate_local(j, xi), -2.0, 1e-14);
}

TEST(CDRhs, RhsGivenUMatchesState) {
  auto mesh = build_mesh(-20, 20, 40);
  const ExpSumTau tau = one_soliton();
  CDOperator op(mesh, 2, soliton_config(tau, CDScheme::DG));
  CDVars v = project_exact(tau, mesh, 2, 0.0);
  CDVars a = op.rhs(v, 0.0);
  CDVars b = rhs_cd(op.state(v, 0.0), op.config());
  CDVars c = op.rhs_given_u(v, op.recover_u(v.omega, 0.0));
  for (size_t i = 0; i < a.omega.coeffs().size(); ++i) {
    EXPECT_NEAR(a.omega.coeffs()[i], b.omega.coeffs()[i], 1e-13);
    EXPECT_NEAR(a.omega.coeffs()[i], c.omega.coeffs()[i], 1e-13);
    EXPECT_EQ(a.q.coeffs()[i], v.omega.coeffs()[i]);
  }
}

TEST(CDRhs, ExactDataResidual) {
  const ExpSumTau tau = one_soliton();
  for (CDScheme scheme : {CDScheme::DG, CDScheme::Integration})
    for (int k : {1, 2}) {
      std::vector<double> e;
      for (int n : {80, 160, 320}) {
        auto mesh = build_mesh(-20, 20, n);
        CDOperator op(mesh, k, soliton_config(tau, scheme));
        CDVars d = op.rhs(project_exact(tau, mesh, k, 0.0), 0.0);
        DGField ref = l2_project([&](double y) { return cd_exact_rates(tau, y, 0.0).omega_s; }, mesh, k);
        e.push_back(l2_norm(d.omega - ref));
      }
      EXPECT_GE(std::log2(e[1] / e[2]), k + 1 - 0.2) << to_string(scheme) << " k=" << k;
    }
}

TEST(URecoveryDG, Examples) {
  auto unit = build_mesh(0, 1, 5);
  CDConfig cfg;
  DGField z = recover_u_dg(DGField(unit, 2), 0.0, cfg);
  for (double c : z.coeffs()) EXPECT_EQ(c, 0.0);
  cfg.u_boundary = [](double) { return 1.0; };
  for (int k : {1, 2, 3}) {
    DGField u = recover_u_dg(constant(unit, k, 1.0), 0.0, cfg);
    EXPECT_LE(test::l2_distance(u, [](double y) { return y; }), 1e-13);
  }
}

TEST(URecoveryDG, InverseOfWeakDerivative) {
  std::mt19937 rng(21);
  for (int k : {0, 1, 2, 3}) {
    auto mesh = Mesh1D::from_nodes({-1.0, -0.4, 0.1, 0.2, 0.9, 1.5});
    auto mp = std::make_shared<const Mesh1D>(mesh);
    DGField u = test::random_field(mp, k, rng, false);
    const double ub = 0.37;
    DGField w = dg_weak_derivative(u, ub);
    CDConfig cfg;
    cfg.u_boundary = [ub](double) { return ub; };
    DGField back = recover_u_dg(w, 0.0, cfg);
    for (size_t i = 0; i < u.coeffs().size(); ++i) EXPECT_NEAR(back.coeffs()[i], u.coeffs()[i], 1e-11);
  }
}

TEST(URecoveryDG, WeakDerivativeOfSmoothField) {
  auto mesh = build_mesh(0, 2, 40);
  DGField u = l2_project([](double y) { return std::sin(y); }, mesh, 2);
  DGField w = dg_weak_derivative(u, std::sin(2.0));
  EXPECT_LE(test::l2_distance(w, [](double y) { return std::cos(y); }), 1e-4);
}

TEST(URecoveryDG, OneSolitonOrder) {
  const ExpSumTau tau = one_soliton();
  for (int k : {1, 2}) {
    std::vector<double> e;
    for (int n : {80, 160}) {
      auto mesh = build_mesh(-20, 20, n);
      DGField w = l2_project([&](double y) { return cd_exact(tau, y, 0.0).omega; }, mesh, k);
      DGField u = recover_u_dg(w, 0.0, soliton_config(tau, CDScheme::DG));
      e.push_back(test::l2_distance(u, [&](double y) { return cd_exact(tau, y, 0.0).u; }));
    }
    EXPECT_NEAR(std::log2(e[0] / e[1]), k + 1, 0.3) << "k=" << k;
  }
}

TEST(URecoveryIntegration, Examples) {
  auto unit = build_mesh(0, 1, 5);
  CDConfig cfg;
  DGField z = recover_u_integration(DGField(unit, 1), 0.0, cfg);
  for (double c : z.coeffs()) EXPECT_NEAR(c, 0.0, 1e-15);
  DGField u = recover_u_integration(constant(unit, 0, 1.0), 0.0, cfg);
  EXPECT_EQ(u.degree(), 1);
  EXPECT_LE(test::l2_distance(u, [](double y) { return y - 1; }), 1e-14);
}

TEST(URecoveryIntegration, AntiderivativeIdentity) {
  std::mt19937 rng(5);
  auto mesh = build_mesh(-3, 2, 7);
  CDConfig cfg;
  cfg.u_boundary = [](double s) { return 2 * s; };
  for (int k : {0, 1, 2}) {
    DGField w = test::random_field(mesh, k, rng, false);
    DGField u = recover_u_integration(w, 0.25, cfg);
    EXPECT_NEAR(u.right_trace(6), 0.5, 1e-13);
    for (int j = 1; j < 7; ++j) EXPECT_NEAR(u.left_trace(j), u.right_trace(j - 1), 1e-13);
    DGField d = cellwise_derivative(u);
    for (int j = 0; j < 7; ++j)
      for (double xi : {-0.8, 0.0, 0.6}) EXPECT_NEAR(d.evaluate_local(j, xi), w.evaluate_local(j, xi), 1e-12);
  }
}

TEST(Hodograph, IdentityAndLinearMaps) {
  auto mesh = build_mesh(0, 2, 8);
  CDState one{constant(mesh, 1, 1.0), DGField(mesh, 1), DGField(mesh, 1)};
  auto p = hodograph_profile(one, 0.0, 4);
  ASSERT_EQ(p.size(), 8u * 4 + 1);
  for (const auto& pt : p) EXPECT_NEAR(pt.x, pt.y, 1e-14);
  CDState half{constant(mesh, 1, 0.5), DGField(mesh, 1), DGField(mesh, 1)};
  auto h = hodograph_profile(half, 3.0, 3);
  EXPECT_NEAR(h.front().x, 3.0, 1e-15);
  EXPECT_NEAR(h.back().x, 4.0, 1e-14);
  EXPECT_NEAR(h.back().y, 2.0, 1e-15);
  for (const auto& pt : h) EXPECT_NEAR(pt.q, 0.5, 1e-14);
}

TEST(Hodograph, TwoLoopNonMonotone) {
  const ExpSumTau tau = build_tau({{1.2, 1.5}, 0.0, {-24.0, -30.0}}, 2);
  auto mesh = build_mesh(-20, 20, 320);
  CDConfig cfg;
  cfg.u_boundary = [tau](double s) { return cd_exact(tau, 20.0, s).u; };
  CDOperator op(mesh, 2, cfg);
  CDState st = op.state(project_exact(tau, mesh, 2, 0.0), 0.0);
  auto p = hodograph_profile(st, cd_exact(tau, -20.0, 0.0).x, 4);
  bool decreasing = false;
  for (size_t i = 1; i < p.size(); ++i) decreasing = decreasing || p[i].x < p[i - 1].x;
  EXPECT_TRUE(decreasing);
  for (const auto& pt : p) EXPECT_NEAR(pt.x, cd_exact(tau, pt.y, 0.0).x, 1e-3);
}

TEST(CDRun, ShortHorizonConvergence) {
  const ExpSumTau tau = one_soliton();
  for (CDScheme scheme : {CDScheme::DG, CDScheme::Integration}) {
    std::vector<double> e;
    for (int n : {80, 160}) {
      auto mesh = build_mesh(-20, 20, n);
      CDOperator op(mesh, 1, soliton_config(tau, scheme));
      auto res = integrate(project_exact(tau, mesh, 1, 0.0), [&](const CDVars& v, double s) { return op.rhs(v, s); },
                           StepPlan::from_cfl(0.1, mesh->h(), 0.5));
      DGField u = op.recover_u(res.state.omega, 0.5);
      e.push_back(test::l2_distance(u, [&](double y) { return cd_exact(tau, y, 0.5).u; }));
    }
    const double expect = scheme == CDScheme::DG ? 2.0 : 3.0;
    EXPECT_NEAR(std::log2(e[0] / e[1]), expect, 0.3) << to_string(scheme);
  }
}
