#include <doctest.h>

#include <cmath>

#include "spherenav/benchmarks.hpp"
#include "spherenav/simulator.hpp"

using namespace spherenav;

TEST_CASE("scenario parameter checks") {
  auto sc = single_cone_scenario();
  sc.dt = 0.0;
  CHECK_THROWS_AS(sc.check(), InvalidScenarioError);
  sc = single_cone_scenario();
  sc.mode = ControlMode::Multi;  // allowed: nav controller with one cone
  CHECK_NOTHROW(sc.check());
  sc = five_cone_scenario();
  sc.mode = ControlMode::Single;
  CHECK_THROWS_AS(sc.check(), InvalidScenarioError);
}

TEST_CASE("equilibrium start stays put") {
  auto sc = five_cone_scenario();
  sc.x0 = sc.xd;
  sc.t_end = 0.5;
  const auto traj = simulate(sc);
  CHECK(traj.summary.converged);
  CHECK(traj.summary.max_control_norm <= 1e-10);
  CHECK(traj.summary.final_distance <= 1e-12);
}

TEST_CASE("single step at the target is a fixed point") {
  auto sc = five_cone_scenario();
  const UnitVector next = step(sc.xd, sc);
  CHECK((next.coords() - sc.xd.coords()).norm() <= 1e-14);
}

TEST_CASE("single-constraint flow matches the exact exponential") {
  auto sc = single_cone_scenario(5.0);
  sc.t_end = 3.0;
  sc.record_stride = 25;
  const auto traj = simulate(sc);
  REQUIRE(!traj.samples.empty());

  const VectorXd xi0 = traj.samples.front().xi;
  const EuclideanPoint xi_d = project(sc.set.to_aligned(sc.xd));
  const double initial = (xi0 - xi_d).norm();
  for (const auto& s : traj.samples) {
    const double expected = initial * std::exp(-sc.params.gamma * s.t);
    const double actual = (s.xi - xi_d).norm();
    CHECK(std::abs(actual - expected) <= 1e-6 * initial);
  }
  CHECK(traj.summary.min_margin_overall >= -1e-9);
}

TEST_CASE("local step error against the exact linear flow is fifth order") {
  auto sc = single_cone_scenario(5.0);
  const EuclideanPoint xi_d = project(sc.set.to_aligned(sc.xd));
  const EuclideanPoint xi0 = project(sc.set.to_aligned(sc.x0));

  auto one_step_error = [&](double dt) {
    Scenario local = sc;
    local.dt = dt;
    const UnitVector next = step(sc.x0, local);
    const EuclideanPoint xi = project(local.set.to_aligned(next));
    const EuclideanPoint exact =
        xi_d + std::exp(-sc.params.gamma * dt) * (xi0 - xi_d);
    return (xi - exact).norm();
  };

  const double e1 = one_step_error(0.1);
  const double e2 = one_step_error(0.05);
  CHECK(e2 <= e1 / 20.0);  // fifth-order local error shrinks by ~32x
}

TEST_CASE("norm drift per step stays tiny before renormalization") {
  auto sc = five_cone_scenario();
  detail::ClosedLoop loop(sc);
  UnitVector xa = loop.xa0;
  for (int i = 0; i < 50; ++i) {
    const VectorXd& y = xa.coords();
    const double dt = sc.dt;
    const VectorXd k1 = loop.derivative(y);
    const VectorXd k2 = loop.derivative(y + 0.5 * dt * k1);
    const VectorXd k3 = loop.derivative(y + 0.5 * dt * k2);
    const VectorXd k4 = loop.derivative(y + dt * k3);
    const VectorXd raw = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    CHECK(std::abs(raw.norm() - 1.0) <= 1e-12);
    xa = renormalize(raw);
  }
}

TEST_CASE("five-cone benchmark converges safely") {
  auto sc = five_cone_scenario();
  sc.record_stride = 100;
  const auto traj = simulate(sc);
  CHECK(traj.summary.converged);
  CHECK(traj.summary.min_margin_overall >= -1e-9);
  CHECK_FALSE(traj.summary.safety_violation);
  CHECK(traj.summary.max_phi_increase <= 1e-9);
  CHECK(traj.summary.max_control_norm < 1e3);

  // Samples are ordered in time and stay on the sphere.
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    CHECK(std::abs(traj.samples[i].x.norm() - 1.0) <= 1e-9);
    if (i > 0) CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    REQUIRE(traj.samples[i].phi.has_value());
  }
}

TEST_CASE("determinism: identical scenarios give identical trajectories") {
  auto sc = five_cone_scenario();
  sc.t_end = 1.0;
  sc.record_stride = 10;
  const auto a = simulate(sc);
  const auto b = simulate(sc);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    CHECK(a.samples[i].u == b.samples[i].u);
  }
}

TEST_CASE("invalid scenario is rejected before integration") {
  auto sc = five_cone_scenario();
  sc.xd = UnitVector::axis(3, 0);  // inside cone 1
  CHECK_THROWS_AS(simulate(sc), InvalidScenarioError);
}

TEST_CASE("halving dt improves the final state by roughly 2^4") {
  auto run_error = [](double dt) {
    auto sc = single_cone_scenario(5.0);
    sc.dt = dt;
    sc.t_end = 1.0;
    sc.convergence_tol = 1e-12;  // never converges; run the full horizon
    sc.record_stride = 1 << 30;
    const auto traj = simulate(sc);
    const EuclideanPoint xi_d = project(sc.set.to_aligned(sc.xd));
    const EuclideanPoint xi0 = project(sc.set.to_aligned(sc.x0));
    const EuclideanPoint exact =
        xi_d + std::exp(-5.0 * sc.t_end) * (xi0 - xi_d);
    return (traj.samples.back().xi - exact).norm();
  };
  const double coarse = run_error(0.04);
  const double fine = run_error(0.02);
  CHECK(fine <= coarse / 8.0);
}

TEST_CASE("dual consistency") {
  SUBCASE("single constraint") {
    auto sc = single_cone_scenario(5.0);
    sc.t_end = 3.0;
    CHECK(dual_consistency_check(sc) <= 1e-8);
  }
  SUBCASE("five cones, short horizon") {
    auto sc = five_cone_scenario();
    sc.t_end = 2.0;
    CHECK(dual_consistency_check(sc) <= 1e-6);
  }
  SUBCASE("minimal horizon starts at zero deviation") {
    auto sc = single_cone_scenario(5.0);
    sc.t_end = sc.dt;
    CHECK(dual_consistency_check(sc) <= 1e-12);
  }
}

TEST_CASE("basin starts are deterministic and inside the free space") {
  const auto set = five_cone_set();
  const auto a = basin_starts(set, 100, 0);
  const auto b = basin_starts(set, 100, 0);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coords() == b[i].coords());
    CHECK(min_sphere_margin(set, a[i]) >= 0.0);
  }

  // Non-S^2 path: seeded sampler on S^3.
  std::vector<ConicConstraint> cones;
  cones.emplace_back(UnitVector::pole(4), M_PI / 7);
  const ConstraintSet set4(std::move(cones));
  const auto c = basin_starts(set4, 50, 42);
  REQUIRE(c.size() == 50);
  for (const auto& x : c) CHECK(min_sphere_margin(set4, x) >= 0.0);
}

TEST_CASE("small basin study on the single-cone scenario") {
  auto sc = single_cone_scenario(5.0);
  sc.t_end = 6.0;
  sc.convergence_tol = 1e-3;
  const auto report = basin_study(sc, 20);
  CHECK(report.total == 20);
  CHECK(report.converged == 20);
  CHECK(report.safety_violations == 0);
}
