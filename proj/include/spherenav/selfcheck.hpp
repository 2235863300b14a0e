#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "spherenav/benchmarks.hpp"
#include "spherenav/sampling.hpp"

namespace spherenav {

struct SuiteResult {
  std::string name;
  bool passed;
  double worst_error;
  double tolerance;
  std::string detail;
};

struct SelfCheckOptions {
  std::vector<int> sphere_dims = {1, 2, 3, 5};
  std::uint64_t seed = 20240817;
  int samples = 2000;
  // Test hook: adds a bias to one identity so the suite must fail.
  bool inject_fault = false;
};

namespace selfcheck_detail {

inline SuiteResult chart_identities(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double worst = 0.0;
  const double fault = opt.inject_fault ? 1e-3 : 0.0;
  for (int n : opt.sphere_dims) {
    for (int s = 0; s < opt.samples; ++s) {
      // chart -> sphere -> chart
      VectorXd xi = 3.0 * random_gaussian(n, rng);
      worst = std::max(worst, (project(unproject(xi)) - xi).norm() / (1.0 + xi.norm()));

      // sphere -> chart -> sphere, identities, jacobian kernel
      const UnitVector x = random_unit_vector_below(n + 1, 0.9, rng);
      const UnitVector y = random_unit_vector_below(n + 1, 0.9, rng);
      worst = std::max(worst, (unproject(project(x)).coords() - x.coords()).norm());
      const double chordal = chordal_norm_sq(x, y) + fault;
      const double direct = (project(x) - project(y)).squaredNorm();
      worst = std::max(worst, std::abs(chordal - direct) / (1.0 + direct));
      const double norm_identity =
          (1.0 + x.pole_component()) / (1.0 - x.pole_component());
      const double norm_direct = project(x).squaredNorm();
      worst = std::max(worst,
                       std::abs(norm_identity - norm_direct) / (1.0 + norm_direct));
      VectorXd kernel_dir = x.coords();
      kernel_dir[n] -= 1.0;
      worst = std::max(worst, (jacobian(x) * kernel_dir).norm());
    }
  }
  return {"chart identities", worst <= 1e-10, worst, 1e-10, ""};
}

inline SuiteResult jacobian_finite_differences(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  double worst = 0.0;
  for (int n : opt.sphere_dims) {
    for (int s = 0; s < std::max(50, opt.samples / 20); ++s) {
      const UnitVector x = random_unit_vector_below(n + 1, 0.9, rng);
      const VectorXd t = random_tangent_at(x, rng);
      const VectorXd analytic = jacobian(x) * t;
      const VectorXd numeric = chart_directional_difference(x, t);
      worst = std::max(worst,
                       (analytic - numeric).norm() / (1.0 + analytic.norm()));
    }
  }
  return {"jacobian finite differences", worst <= 1e-6, worst, 1e-6, ""};
}

inline SuiteResult world_boundary_mapping(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  const ConstraintSet set = five_cone_set();
  const SphereWorld world = to_sphere_world(set);
  const auto& cones = set.aligned_constraints();
  double worst = 0.0;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (int s = 0; s < std::max(100, opt.samples / 4); ++s) {
      const UnitVector x = cone_boundary_point(cones[i].axis, cones[i].half_angle, rng);
      const EuclideanPoint xi = project(x);
      const double err = (i == 0)
                             ? std::abs(xi.norm() - world.workspace_radius)
                             : std::abs((xi - world.obstacles[i - 1].center).norm() -
                                        world.obstacles[i - 1].radius);
      worst = std::max(worst, err);
    }
  }
  return {"cone boundaries map to ball boundaries", worst <= 1e-9, worst, 1e-9, ""};
}

inline SuiteResult membership_equivalence(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 3);
  const ConstraintSet set = five_cone_set();
  const SphereWorld world = to_sphere_world(set);
  int mismatches = 0;
  int tested = 0;
  for (int s = 0; s < 5 * opt.samples; ++s) {
    const UnitVector x = random_unit_vector_below(3, 0.999, rng);
    const auto sm = sphere_margin(set, x);
    const double min_sm = *std::min_element(sm.begin(), sm.end());
    if (std::abs(min_sm) < 1e-9) continue;  // skip near-boundary samples
    const double min_em = min_euclidean_margin(world, project(x));
    if (std::abs(min_em) < 1e-9) continue;
    ++tested;
    if ((min_sm >= 0.0) != (min_em >= 0.0)) ++mismatches;
  }
  return {"free-space membership equivalence", mismatches == 0,
          static_cast<double>(mismatches), 0.0,
          std::to_string(tested) + " samples"};
}

inline SuiteResult potential_gradient(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 4);
  const ConstraintSet set = five_cone_set();
  const SphereWorld world = to_sphere_world(set);
  const EuclideanPoint xi_d = project(set.to_aligned(five_cone_target()));
  double worst = 0.0;
  const double h = 1e-6;
  for (double k : {3.0, 5.0, 8.0}) {
    const NavParams params(5.0, k);
    int done = 0;
    while (done < std::max(100, opt.samples / 10)) {
      const UnitVector x = random_unit_vector_below(3, 0.999, rng);
      const EuclideanPoint xi = project(x);
      if (min_euclidean_margin(world, xi) < 1e-3) continue;
      ++done;
      const VectorXd analytic = grad_phi(world, xi, xi_d, params);
      VectorXd numeric(xi.size());
      for (Eigen::Index j = 0; j < xi.size(); ++j) {
        EuclideanPoint plus = xi, minus = xi;
        plus[j] += h;
        minus[j] -= h;
        numeric[j] =
            (phi(world, plus, xi_d, params) - phi(world, minus, xi_d, params)) /
            (2.0 * h);
      }
      worst = std::max(worst, (analytic - numeric).norm() / (1.0 + analytic.norm()));
    }
  }
  return {"potential gradient finite differences", worst <= 1e-6, worst, 1e-6, ""};
}

inline SuiteResult pendulum_closed_forms(const SelfCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 5);
  const SphericalPendulum pendulum;
  double worst = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const UnitVector x = random_unit_vector_below(3, 0.999, rng);
    const MatrixXd sig = sigma(pendulum, x);
    const double scale = 1.0 / std::pow(pole_gap(x), 2);
    worst = std::max(
        worst, (sig * sig.transpose() - scale * MatrixXd::Identity(2, 2)).norm() /
                   scale);
    const MatrixXd closed = pendulum_sigma_pinv_closed_form(x);
    const MatrixXd numeric = sigma_pinv(pendulum, x);
    worst = std::max(worst, (closed - numeric).norm() / (1.0 + numeric.norm()));
  }
  return {"pendulum closed-form pseudo-inverse", worst <= 1e-8, worst, 1e-8, ""};
}

}  // namespace selfcheck_detail

inline std::vector<SuiteResult> run_selfcheck(const SelfCheckOptions& opt = {}) {
  return {selfcheck_detail::chart_identities(opt),
          selfcheck_detail::jacobian_finite_differences(opt),
          selfcheck_detail::world_boundary_mapping(opt),
          selfcheck_detail::membership_equivalence(opt),
          selfcheck_detail::potential_gradient(opt),
          selfcheck_detail::pendulum_closed_forms(opt)};
}

}  // namespace spherenav
