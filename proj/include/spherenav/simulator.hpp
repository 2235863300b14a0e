#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spherenav/controller.hpp"

namespace spherenav {

inline constexpr double kSafetyAbortMargin = -1e-6;
inline constexpr double kReportMargin = -1e-9;
inline constexpr int kSustainedSteps = 100;

struct Scenario {
  std::shared_ptr<const DynamicsModel> model;
  ConstraintSet set;
  UnitVector x0;
  UnitVector xd;
  NavParams params;
  ControlMode mode = ControlMode::Multi;
  double dt = 1e-3;
  double t_end = 20.0;
  double convergence_tol = 1e-3;  // radians
  int record_stride = 1;

  Scenario(std::shared_ptr<const DynamicsModel> m, ConstraintSet s, UnitVector start,
           UnitVector target)
      : model(std::move(m)), set(std::move(s)), x0(std::move(start)), xd(std::move(target)) {}

  void check() const {
    if (!(dt > 0.0) || !(t_end >= dt) || !(convergence_tol > 0.0) ||
        record_stride < 1) {
      throw InvalidScenarioError("scenario: bad integration parameters");
    }
    if (mode == ControlMode::Single && set.size() != 1) {
      throw InvalidScenarioError("scenario: single mode needs exactly one cone");
    }
  }
};

struct TrajectorySample {
  double t;
  VectorXd x;    // original frame
  VectorXd xi;   // aligned chart coordinates
  VectorXd u;
  std::optional<double> phi;  // multi mode only
  double min_margin;
};

struct TrajectorySummary {
  bool converged = false;
  std::optional<double> t_converge;
  double final_distance = 0.0;    // radians
  double min_margin_overall = 0.0;
  double max_control_norm = 0.0;
  double max_phi_increase = 0.0;  // worst per-step increase, multi mode
  bool safety_violation = false;
  std::string diagnostic;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectorySummary summary;
};

namespace detail {

// Closed loop prepared in the aligned frame (cone 0 on the pole); the
// integration state is the aligned unit vector.
struct ClosedLoop {
  const Scenario& scenario;
  RotatedModel model;
  SphereWorld world;
  UnitVector xa0;
  UnitVector xad;
  EuclideanPoint xi_d;

  explicit ClosedLoop(const Scenario& sc)
      : scenario(sc),
        model(*sc.model, sc.set.alignment()),
        world(to_sphere_world(sc.set)),
        xa0(sc.set.to_aligned(sc.x0)),
        xad(sc.set.to_aligned(sc.xd)),
        xi_d(project(xad)) {}

  VectorXd velocity(const EuclideanPoint& xi) const {
    return scenario.mode == ControlMode::Single
               ? kappa_single(xi, xi_d, scenario.params.gamma)
               : kappa_nav(world, xi, xi_d, scenario.params);
  }

  VectorXd control_at(const UnitVector& xa) const {
    return sigma_pinv_apply(model, xa, velocity(project(xa)));
  }

  VectorXd derivative(const VectorXd& state, VectorXd* u_out = nullptr) const {
    const UnitVector xa = renormalize(state);
    const VectorXd u = control_at(xa);
    if (u_out) *u_out = u;
    return model.pi_matrix(xa) * u;
  }
};

}  // namespace detail

/// One classical RK4 step of the closed loop with the control re-evaluated
/// at every stage, followed by renormalization back onto the sphere.
inline UnitVector step(const UnitVector& x_aligned, const detail::ClosedLoop& loop,
                       double dt) {
  const VectorXd& y = x_aligned.coords();
  const VectorXd k1 = loop.derivative(y);
  const VectorXd k2 = loop.derivative(y + 0.5 * dt * k1);
  const VectorXd k3 = loop.derivative(y + 0.5 * dt * k2);
  const VectorXd k4 = loop.derivative(y + dt * k3);
  return renormalize(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Convenience overload operating on original-frame states.
inline UnitVector step(const UnitVector& x, const Scenario& scenario) {
  scenario.check();
  detail::ClosedLoop loop(scenario);
  const UnitVector xa = scenario.set.to_aligned(x);
  if (min_sphere_margin(scenario.set, x) < kSafetyAbortMargin) {
    throw FreeSpaceDomainError("step: state violates the constraints");
  }
  return scenario.set.from_aligned(step(xa, loop, scenario.dt));
}

inline Trajectory simulate(const Scenario& scenario) {
  scenario.check();
  const ValidationReport report = validate(scenario.set, scenario.x0, scenario.xd);
  if (!report.passed()) {
    throw InvalidScenarioError("scenario validation failed:\n" + report.to_string());
  }
  const detail::ClosedLoop loop(scenario);

  Trajectory traj;
  traj.summary.min_margin_overall = std::numeric_limits<double>::infinity();
  UnitVector xa = loop.xa0;
  double prev_phi = std::numeric_limits<double>::infinity();
  int below_tol_streak = 0;
  const long total_steps = static_cast<long>(std::ceil(scenario.t_end / scenario.dt));

  auto record = [&](long step_index, double t, const UnitVector& state,
                    bool force = false) {
    const double margin = min_sphere_margin(scenario.set, scenario.set.from_aligned(state));
    traj.summary.min_margin_overall = std::min(traj.summary.min_margin_overall, margin);

    VectorXd u = loop.control_at(state);
    traj.summary.max_control_norm = std::max(traj.summary.max_control_norm, u.norm());

    std::optional<double> phi_val;
    if (scenario.mode == ControlMode::Multi) {
      const double p = phi(loop.world, project(state), loop.xi_d, scenario.params);
      phi_val = p;
      if (std::isfinite(prev_phi)) {
        traj.summary.max_phi_increase =
            std::max(traj.summary.max_phi_increase, p - prev_phi);
      }
      prev_phi = p;
    }
    if (force || step_index % scenario.record_stride == 0 ||
        step_index == total_steps) {
      traj.samples.push_back({t, scenario.set.from_aligned(state).coords(),
                              project(state), std::move(u), phi_val, margin});
    }
    return margin;
  };

  long k = 0;
  double margin = record(0, 0.0, xa);
  for (k = 1; k <= total_steps; ++k) {
    if (margin < kSafetyAbortMargin) break;
    xa = step(xa, loop, scenario.dt);
    const double t = static_cast<double>(k) * scenario.dt;
    margin = record(k, t, xa);

    const double dist = geodesic_distance(scenario.set.from_aligned(xa), scenario.xd);
    if (dist < scenario.convergence_tol) {
      if (++below_tol_streak >= kSustainedSteps) {
        traj.summary.converged = true;
        traj.summary.t_converge = t - (kSustainedSteps - 1) * scenario.dt;
        break;
      }
    } else {
      below_tol_streak = 0;
    }
  }

  const double t_final = static_cast<double>(std::min(k, total_steps)) * scenario.dt;
  if (!traj.samples.empty() && traj.samples.back().t < t_final) {
    record(std::min(k, total_steps), t_final, xa, /*force=*/true);
  }

  if (margin < kSafetyAbortMargin) {
    traj.summary.safety_violation = true;
    traj.summary.diagnostic =
        "safety violation: min sphere margin " + std::to_string(margin) + " at t=" +
        std::to_string(static_cast<double>(k) * scenario.dt);
  }
  traj.summary.final_distance =
      geodesic_distance(scenario.set.from_aligned(xa), scenario.xd);
  return traj;
}

/// Integrates the chart dynamics xi' = kappa(xi, xi_d) with the same RK4
/// scheme, and returns the largest gap between the projected sphere
/// trajectory and the direct chart trajectory.
inline double dual_consistency_check(const Scenario& scenario) {
  scenario.check();
  const ValidationReport report = validate(scenario.set, scenario.x0, scenario.xd);
  if (!report.passed()) {
    throw InvalidScenarioError("scenario validation failed:\n" + report.to_string());
  }
  const detail::ClosedLoop loop(scenario);

  UnitVector xa = loop.xa0;
  EuclideanPoint xi = project(xa);
  double max_dev = (project(xa) - xi).norm();
  int below_tol_streak = 0;
  const long total_steps = static_cast<long>(std::ceil(scenario.t_end / scenario.dt));
  for (long k = 1; k <= total_steps; ++k) {
    xa = step(xa, loop, scenario.dt);

    const double dt = scenario.dt;
    const VectorXd k1 = loop.velocity(xi);
    const VectorXd k2 = loop.velocity(xi + 0.5 * dt * k1);
    const VectorXd k3 = loop.velocity(xi + 0.5 * dt * k2);
    const VectorXd k4 = loop.velocity(xi + dt * k3);
    xi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    max_dev = std::max(max_dev, (project(xa) - xi).norm());

    const double dist = geodesic_distance(scenario.set.from_aligned(xa), scenario.xd);
    if (dist < scenario.convergence_tol) {
      if (++below_tol_streak >= kSustainedSteps) break;
    } else {
      below_tol_streak = 0;
    }
  }
  return max_dev;
}

struct BasinReport {
  int total = 0;
  int converged = 0;
  int safety_violations = 0;
  std::vector<VectorXd> non_converged_starts;

  double converged_fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(converged) / total;
  }
};

/// Deterministic quasi-uniform starts inside the free space: a Fibonacci
/// lattice on S^2, a seeded Gaussian-direction sampler otherwise.
inline std::vector<UnitVector> basin_starts(const ConstraintSet& set, int count,
                                            std::uint64_t seed) {
  std::vector<UnitVector> starts;
  starts.reserve(count);
  const Eigen::Index d = set.ambient_dim();
  if (d == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    // Oversample the lattice until enough points clear the cones.
    for (long density = 4L * count; starts.size() < static_cast<std::size_t>(count);
         density *= 2) {
      starts.clear();
      for (long i = 0; i < density && starts.size() < static_cast<std::size_t>(count);
           ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / density;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double theta = 2.0 * M_PI * static_cast<double>(i) / golden;
        VectorXd v(3);
        v << r * std::cos(theta), r * std::sin(theta), z;
        UnitVector x(std::move(v), UnitVector::Strictness::Normalize);
        if (min_sphere_margin(set, x) >= 0.0) starts.push_back(std::move(x));
      }
    }
    return starts;
  }
  // Box-Muller over the standard-specified mt19937_64 stream keeps the
  // sequence platform-independent.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  while (starts.size() < static_cast<std::size_t>(count)) {
    VectorXd v(d);
    for (Eigen::Index i = 0; i < d; i += 2) {
      const double u1 = uniform();
      const double u2 = uniform();
      const double mag = std::sqrt(-2.0 * std::log(u1));
      v[i] = mag * std::cos(2.0 * M_PI * u2);
      if (i + 1 < d) v[i + 1] = mag * std::sin(2.0 * M_PI * u2);
    }
    if (v.norm() < 1e-6) continue;
    UnitVector x(std::move(v), UnitVector::Strictness::Normalize);
    if (min_sphere_margin(set, x) >= 0.0) starts.push_back(std::move(x));
  }
  return starts;
}

inline BasinReport basin_study(const Scenario& scenario, int count,
                               std::uint64_t seed = 0, int jobs = 1) {
  const auto starts = basin_starts(scenario.set, count, seed);
  BasinReport report;
  report.total = static_cast<int>(starts.size());

  std::vector<char> ok(starts.size(), 0);
  std::vector<char> violated(starts.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < starts.size(); i = next.fetch_add(1)) {
      Scenario run = scenario;
      run.x0 = starts[i];
      run.record_stride = std::numeric_limits<int>::max();
      const Trajectory traj = simulate(run);
      ok[i] = traj.summary.converged ? 1 : 0;
      violated[i] = traj.summary.safety_violation ? 1 : 0;
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    report.converged += ok[i];
    report.safety_violations += violated[i];
    if (!ok[i]) report.non_converged_starts.push_back(starts[i].coords());
  }
  return report;
}

}  // namespace spherenav
