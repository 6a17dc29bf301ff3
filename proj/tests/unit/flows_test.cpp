#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"
#include "smlab/flows.hpp"

using namespace smlab;

namespace {

Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

BoundaryClosure closure_of(const FlowFamily& f) {
  return [f](const Vector& x, double t) { return f.value(x, t); };
}

GridSpec square_grid(double lo0, double hi0, double lo1, double hi1, int nodes) {
  GridSpec g;
  g.lo = {lo0, lo1};
  g.hi = {hi0, hi1};
  g.nodes = {nodes, nodes};
  return g;
}

double separable_error(int nodes, double kappa, double horizon) {
  const FlowFamily f = flow_families::separable_log(1.0, 2.0);
  const GridState s0 = make_grid_state(square_grid(1.0, 2.0, 1.0, 2.0, nodes), closure_of(f));
  const double h = s0.grid.spacing(0);
  const double dt = kappa * h * h;
  const int steps = static_cast<int>(std::lround(horizon / dt));
  const auto traj = integrate_hk(s0, dt, steps);
  return max_error(traj.final_state(), closure_of(f));
}

}  // namespace

TEST(HkResidual, StaticQuadratic) {
  const auto f = flow_families::static_potential(catalogue::quadratic(2));
  EXPECT_NEAR(hk_residual(f, v2(0.3, 0.7), 1.0), 0.0, 1e-15);
}

TEST(HkResidual, Anisotropic) {
  Rng rng(1);
  const auto f = flow_families::anisotropic(2.0, 3.0);
  for (int s = 0; s < 20; ++s) {
    const Vector xt = f.sampler(rng);
    EXPECT_NEAR(hk_residual(f, xt.head(2), xt[2]), 0.0, 1e-14);
  }
}

TEST(HkResidual, SolitonLiteralClaimFails) {
  const auto f = flow_families::soliton();
  EXPECT_NEAR(hk_residual(f, v2(0.0, -1.0), 2.0), 0.0, 1e-14);
  EXPECT_NEAR(hk_residual(f, v2(0.0, -2.0), 2.0), 2.0 * std::log(2.0), 1e-14);
  Rng rng(2);
  for (int s = 0; s < 20; ++s) {
    const Vector xt = f.sampler(rng);
    EXPECT_NEAR(hk_residual(f, xt.head(2), xt[2]), 2.0 * std::log(-xt[1]) - std::log(xt[2] / 2.0), 1e-12);
  }
}

TEST(HkResidual, ExactSolutions) {
  Rng rng(3);
  for (const auto& f : {flow_families::separable_log(1.0, 2.0), flow_families::normal_flow()}) {
    for (int s = 0; s < 20; ++s) {
      const Vector xt = f.sampler(rng);
      EXPECT_NEAR(hk_residual(f, xt.head(2), xt[2]), 0.0, 1e-12) << f.name;
    }
  }
}

TEST(HkResidual, OutsideDomain) {
  EXPECT_THROW((void)hk_residual(flow_families::soliton(), v2(0.0, 1.0), 1.0), Error);
}

TEST(ConjResidual, StaticAndAnisotropic) {
  EXPECT_NEAR(conj_residual(flow_families::static_potential(catalogue::quadratic(2)), v2(0.1, 0.2), 0.5), 0.0, 1e-15);
  EXPECT_NEAR(conj_residual(flow_families::anisotropic_dual(2.0, 3.0), v2(0.4, -1.0), 1.5), 0.0, 1e-14);
}

TEST(ConjResidual, SolitonDualIsFinite) {
  const double r = conj_residual(flow_families::soliton_dual(), v2(0.0, 1.0), 1.0);
  EXPECT_TRUE(std::isfinite(r));
}

TEST(Soliton, PullbackExamples) {
  EXPECT_NEAR(soliton_pullback_residual(4.0, v2(1.0, -1.0)), 0.0, 1e-14);
  EXPECT_EQ(soliton_pullback_residual(1.0, v2(0.3, -0.8)), 0.0);
  Rng rng(4);
  std::uniform_real_distribution<double> t(0.1, 10.0), x1(-2.0, 2.0), x2(-2.0, -0.2);
  for (int s = 0; s < 100; ++s) EXPECT_LT(soliton_pullback_residual(t(rng), v2(x1(rng), x2(rng))), 1e-12);
}

TEST(Soliton, MetricAtFour) {
  const auto spec = flow_families::soliton().at_time(4.0);
  Matrix expected(2, 2);
  expected << 0.5, 1.0, 1.0, 6.0;
  EXPECT_LT((metric(spec, v2(2.0, -1.0)).g - expected).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Soliton, DualFamilyValue) {
  const auto d = dual_family_value(1.0, v2(0.0, 1.0));
  EXPECT_NEAR(d.value, -1.0, 1e-12);
  Matrix expected(2, 2);
  expected << 2.0, 0.0, 0.0, 1.0;
  EXPECT_LT((d.hessian - expected).lpNorm<Eigen::Infinity>(), 1e-10);
  // At t = 1/2 the dual Hessian is that of the Normal dual potential.
  const Vector u = v2(0.3, 1.2);
  const auto half = dual_family_value(0.5, u);
  EXPECT_LT((half.hessian - metric(catalogue::normal_dual(), u).g).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Soliton, DualMatchesClosedForm) {
  Rng rng(5);
  const auto dual = flow_families::soliton_dual();
  for (int s = 0; s < 30; ++s) {
    const Vector ut = dual.sampler(rng);
    const Vector u = ut.head(2);
    const double t = ut[2];
    const auto d = dual_family_value(t, u);
    EXPECT_NEAR(d.value, dual.value(u, t), 1e-10 * std::max(1.0, std::abs(d.value)));
    Matrix target = 2.0 * t * metric(catalogue::normal_dual(), u).g;
    EXPECT_LT((d.hessian - target).lpNorm<Eigen::Infinity>(), 1e-10 * std::max(1.0, target.lpNorm<Eigen::Infinity>()));
    EXPECT_GT(u[1], u[0] * u[0]);
  }
}

TEST(Grid, StationaryQuadratic) {
  const auto f = flow_families::static_potential(catalogue::quadratic(2));
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -1.0, 1.0, 33), closure_of(f));
  const auto traj = integrate_hk(s0, stable_dt(s0), 100);
  ASSERT_EQ(traj.status, FlowStatus::Completed);
  double drift = 0.0;
  for (std::size_t k = 0; k < s0.phi.size(); ++k) drift = std::max(drift, std::abs(traj.final_state().phi[k] - s0.phi[k]));
  EXPECT_LT(drift, 1e-10);
}

TEST(Grid, AnisotropicExact) {
  const auto f = flow_families::anisotropic(2.0, 3.0);
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -1.0, 1.0, 33), closure_of(f));
  const auto traj = integrate_hk(s0, stable_dt(s0), 200);
  EXPECT_LT(max_error(traj.final_state(), closure_of(f)), 1e-8);
}

TEST(Grid, SecondOrderConvergence) {
  const double e1 = separable_error(9, 0.04, 0.05);
  const double e2 = separable_error(17, 0.04, 0.05);
  const double e3 = separable_error(33, 0.04, 0.05);
  EXPECT_GT(e1 / e2, 3.5) << e1 << " " << e2 << " " << e3;
  EXPECT_LT(e1 / e2, 4.5) << e1 << " " << e2 << " " << e3;
  EXPECT_GT(e2 / e3, 3.5);
  EXPECT_LT(e2 / e3, 4.5);
}

TEST(Grid, StabilityViolation) {
  const auto f = flow_families::anisotropic(2.0, 3.0);
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -1.0, 1.0, 17), closure_of(f));
  try {
    (void)integrate_hk(s0, 2.0 * stable_dt(s0), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StabilityViolation);
  }
}

TEST(Grid, NormalFlowKeepsPositiveDefinite) {
  const auto f = flow_families::normal_flow();
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -2.0, -1.0, 33), closure_of(f));
  const auto traj = integrate_hk(s0, stable_dt(s0), 400, 100);
  ASSERT_EQ(traj.status, FlowStatus::Completed);
  for (const auto& s : traj.snapshots) EXPECT_GT(max_inverse_hessian_eigenvalue(s), 0.0);
  EXPECT_LT(max_error(traj.final_state(), closure_of(f)), 1e-3);
}

TEST(Grid, SignPersistenceSpotCheck) {
  const auto f = flow_families::normal_flow();
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -2.0, -1.0, 33), closure_of(f));
  const auto traj = integrate_hk(s0, stable_dt(s0), 400, 100);
  for (const auto& s : traj.snapshots) {
    const auto values = grid_orthogonal_mtw(s, 200, 99);
    double lo = 1e300;
    for (double v : values) lo = std::min(lo, v);
    RecordProperty("min_mtw_step_" + std::to_string(s.step), std::to_string(lo));
    EXPECT_GE(lo, -1e-6) << "step " << s.step;
  }
}

TEST(Grid, CsvHeaderAndRows) {
  const auto f = flow_families::anisotropic(2.0, 3.0);
  const GridState s0 = make_grid_state(square_grid(-1.0, 1.0, -1.0, 1.0, 5), closure_of(f));
  const auto traj = integrate_hk(s0, stable_dt(s0), 2);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, 18), "step,t,x1,x2,phi\n0");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 25);
}
