#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "spherenav/sphere_geometry.hpp"

namespace spherenav {

// Stereographic chart from the pole e_{n+1}:
//   psi(x)      = x_{1..n} / (1 - x_{n+1})
//   psi^{-1}(z) = (2 [z; 0] + (|z|^2 - 1) e_{n+1}) / (1 + |z|^2)
// The chart is a diffeomorphism S^n \ {e_{n+1}} -> R^n.

inline constexpr double kPoleGuard = 1e-9;

/// A point in the chart image R^n. Thin wrapper: any finite vector is valid.
using EuclideanPoint = VectorXd;

inline double pole_gap(const UnitVector& x) { return 1.0 - x.pole_component(); }

inline void require_away_from_pole(const UnitVector& x) {
  if (pole_gap(x) < kPoleGuard) {
    throw PoleSingularityError("stereographic chart evaluated too close to the pole");
  }
}

inline EuclideanPoint project(const UnitVector& x) {
  require_away_from_pole(x);
  const Eigen::Index n = x.sphere_dim();
  return x.coords().head(n) / pole_gap(x);
}

inline UnitVector unproject(const EuclideanPoint& xi) {
  const Eigen::Index n = xi.size();
  const double s = xi.squaredNorm();
  VectorXd v(n + 1);
  v.head(n) = 2.0 * xi;
  v[n] = s - 1.0;
  v /= 1.0 + s;
  return UnitVector(std::move(v), UnitVector::Strictness::Normalize);
}

/// Chart Jacobian, an n x (n+1) matrix. Its kernel is span{x - e_{n+1}}.
inline MatrixXd jacobian(const UnitVector& x) {
  require_away_from_pole(x);
  const Eigen::Index n = x.sphere_dim();
  const double g = pole_gap(x);
  MatrixXd jac(n, n + 1);
  jac.leftCols(n) = MatrixXd::Identity(n, n) * (g / (g * g));
  jac.col(n) = x.coords().head(n) / (g * g);
  return jac;
}

/// Squared chart distance |psi(x1) - psi(x2)|^2 evaluated without projecting:
///   2 (1 - x1^T x2) / ((1 - x1_{n+1}) (1 - x2_{n+1})).
inline double chordal_norm_sq(const UnitVector& x1, const UnitVector& x2) {
  require_same_dim(x1, x2);
  require_away_from_pole(x1);
  require_away_from_pole(x2);
  return 2.0 * (1.0 - x1.coords().dot(x2.coords())) / (pole_gap(x1) * pole_gap(x2));
}

}  // namespace spherenav
