#pragma once

#include <memory>

#include "spherenav/simulator.hpp"

namespace spherenav {

// Stock benchmark problems on S^2 used by the self-check suites, the CLI
// examples and the regression tests.

/// Five keep-out cones on the coordinate axes, half-angles pi/7 .. pi/11.
inline ConstraintSet five_cone_set() {
  std::vector<ConicConstraint> cones;
  const double angles[] = {M_PI / 7, M_PI / 8, M_PI / 9, M_PI / 10, M_PI / 11};
  VectorXd e1(3), e2(3), e3(3);
  e1 << 1, 0, 0;
  e2 << 0, 1, 0;
  e3 << 0, 0, 1;
  cones.emplace_back(UnitVector(e3), angles[0]);
  cones.emplace_back(UnitVector(e1), angles[1]);
  cones.emplace_back(UnitVector(VectorXd(-e1)), angles[2]);
  cones.emplace_back(UnitVector(e2), angles[3]);
  cones.emplace_back(UnitVector(VectorXd(-e2)), angles[4]);
  return ConstraintSet(std::move(cones));
}

inline UnitVector five_cone_start() {
  VectorXd v(3);
  v << -1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  return UnitVector(std::move(v), UnitVector::Strictness::Normalize);
}

inline UnitVector five_cone_target() {
  VectorXd v(3);
  v << 1.0 / 3.0, 2.0 / 3.0, -2.0 / 3.0;
  return UnitVector(std::move(v), UnitVector::Strictness::Normalize);
}

/// Spherical pendulum steered through the five-cone field with the
/// gradient controller, gamma = k = 5.
inline Scenario five_cone_scenario() {
  Scenario sc(std::make_shared<SphericalPendulum>(), five_cone_set(),
              five_cone_start(), five_cone_target());
  sc.params = NavParams(5.0, 5.0);
  sc.mode = ControlMode::Multi;
  sc.dt = 1e-3;
  sc.t_end = 20.0;
  sc.convergence_tol = 1e-3;
  return sc;
}

/// Single workspace cone (half-angle pi/7) with the linear chart controller;
/// the closed loop in chart coordinates is exactly xi' = -gamma (xi - xi_d).
inline Scenario single_cone_scenario(double gamma = 5.0) {
  VectorXd e3(3);
  e3 << 0, 0, 1;
  std::vector<ConicConstraint> cones;
  cones.emplace_back(UnitVector(e3), M_PI / 7);
  Scenario sc(std::make_shared<SphericalPendulum>(), ConstraintSet(std::move(cones)),
              five_cone_start(), five_cone_target());
  sc.params = NavParams(gamma, 5.0);
  sc.mode = ControlMode::Single;
  sc.dt = 1e-3;
  sc.t_end = 10.0;
  sc.convergence_tol = 1e-4;
  return sc;
}

}  // namespace spherenav
