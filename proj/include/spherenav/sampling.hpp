#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "spherenav/sphere_geometry.hpp"
#include "spherenav/stereographic.hpp"

namespace spherenav {

inline VectorXd random_gaussian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

inline UnitVector random_unit_vector(Eigen::Index ambient_dim, std::mt19937_64& rng) {
  VectorXd v = random_gaussian(ambient_dim, rng);
  while (v.norm() < 1e-6) v = random_gaussian(ambient_dim, rng);
  return UnitVector(std::move(v), UnitVector::Strictness::Normalize);
}

/// Uniform point with pole component capped, i.e. away from the chart pole.
inline UnitVector random_unit_vector_below(Eigen::Index ambient_dim, double max_pole,
                                           std::mt19937_64& rng) {
  for (;;) {
    UnitVector x = random_unit_vector(ambient_dim, rng);
    if (x.pole_component() <= max_pole) return x;
  }
}

inline VectorXd random_tangent_at(const UnitVector& x, std::mt19937_64& rng) {
  VectorXd v = random_gaussian(x.ambient_dim(), rng);
  v -= x.coords().dot(v) * x.coords();
  while (v.norm() < 1e-6) {
    v = random_gaussian(x.ambient_dim(), rng);
    v -= x.coords().dot(v) * x.coords();
  }
  return v / v.norm();
}

/// A point on the cone boundary: angle theta away from the axis.
inline UnitVector cone_boundary_point(const UnitVector& axis, double theta,
                                      std::mt19937_64& rng) {
  const VectorXd tangent = random_tangent_at(axis, rng);
  return UnitVector(std::cos(theta) * axis.coords() + std::sin(theta) * tangent,
                    UnitVector::Strictness::Normalize);
}

/// Central differences of the chart along a tangent direction, with the
/// perturbed points renormalized back onto the sphere.
inline VectorXd chart_directional_difference(const UnitVector& x, const VectorXd& tangent,
                                             double step = 1e-6) {
  const UnitVector plus = renormalize(x.coords() + step * tangent);
  const UnitVector minus = renormalize(x.coords() - step * tangent);
  return (project(plus) - project(minus)) / (2.0 * step);
}

}  // namespace spherenav
